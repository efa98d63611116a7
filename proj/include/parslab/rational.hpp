#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace parslab {

using BigInt = boost::multiprecision::cpp_int;

// Exact non-negative rational. Always stored reduced, denominator >= 1.
// All semantic quantities in this library (probabilities, masses, mean-time
// partial sums) are values of this type; no floating point enters any
// computation, doubles appear only in display code.
class Rat {
 public:
  Rat() : num_(0), den_(1) {}
  Rat(unsigned long v) : num_(v), den_(1) {}
  Rat(BigInt n, BigInt d);

  // Accepts "a/b" or "a" with non-negative integer literals.
  static std::optional<Rat> parse(std::string_view text);

  // 2^-k, the workhorse denominator of the fixture systems.
  static Rat dyadic(unsigned k);

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }

  // "a/b", or just "a" when the denominator is 1.
  std::string str() const;
  double approx() const;

  friend Rat operator+(const Rat& a, const Rat& b);
  // Throws std::domain_error if the result would be negative; the library
  // never has a use for a negative quantity, so underflow is a logic bug.
  friend Rat operator-(const Rat& a, const Rat& b);
  friend Rat operator*(const Rat& a, const Rat& b);

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

 private:
  BigInt num_, den_;
  void reduce();
};

// A rational constrained to [0, 1]. Probabilities and sub-distribution
// masses live here; sums that may exceed 1 are ordinary Rat values and
// must be converted back explicitly (which re-checks the bound).
class Prob {
 public:
  Prob() = default;  // zero
  explicit Prob(Rat v);

  static Prob zero() { return Prob(); }
  static Prob one() { return Prob(Rat(1ul)); }
  static Prob dyadic(unsigned k) { return Prob(Rat::dyadic(k)); }
  static std::optional<Prob> parse(std::string_view text);

  const Rat& rat() const { return val_; }
  bool is_zero() const { return val_.is_zero(); }
  bool is_one() const { return val_.is_one(); }
  std::string str() const { return val_.str(); }
  double approx() const { return val_.approx(); }

  // Closed in [0,1].
  Prob operator*(const Prob& o) const { return Prob(val_ * o.rat()); }
  // 1 - p.
  Prob complement() const { return Prob(Rat(1ul) - val_); }

  friend bool operator==(const Prob& a, const Prob& b) { return a.val_ == b.val_; }
  friend bool operator!=(const Prob& a, const Prob& b) { return a.val_ != b.val_; }
  friend bool operator<(const Prob& a, const Prob& b) { return a.val_ < b.val_; }
  friend bool operator<=(const Prob& a, const Prob& b) { return a.val_ <= b.val_; }
  friend bool operator>(const Prob& a, const Prob& b) { return a.val_ > b.val_; }
  friend bool operator>=(const Prob& a, const Prob& b) { return a.val_ >= b.val_; }

 private:
  Rat val_;
};

inline Rat operator+(const Prob& a, const Prob& b) { return a.rat() + b.rat(); }

}  // namespace parslab
