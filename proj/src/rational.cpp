#include "parslab/rational.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace parslab {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

Rat::Rat(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
  if (den_ == 0) throw std::invalid_argument("rational with zero denominator");
  if (num_ < 0 || den_ < 0) throw std::invalid_argument("negative rational");
  reduce();
}

void Rat::reduce() {
  if (num_ == 0) {
    den_ = 1;
    return;
  }
  BigInt g = boost::multiprecision::gcd(num_, den_);
  num_ /= g;
  den_ /= g;
}

std::optional<Rat> Rat::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!all_digits(text)) return std::nullopt;
    return Rat(BigInt(std::string(text)), BigInt(1));
  }
  std::string_view a = text.substr(0, slash);
  std::string_view b = text.substr(slash + 1);
  if (!all_digits(a) || !all_digits(b)) return std::nullopt;
  BigInt den{std::string(b)};
  if (den == 0) return std::nullopt;
  return Rat(BigInt(std::string(a)), std::move(den));
}

Rat Rat::dyadic(unsigned k) { return Rat(BigInt(1), BigInt(1) << k); }

std::string Rat::str() const {
  std::string s = num_.str();
  if (den_ != 1) {
    s += '/';
    s += den_.str();
  }
  return s;
}

double Rat::approx() const {
  return num_.convert_to<double>() / den_.convert_to<double>();
}

Rat operator+(const Rat& a, const Rat& b) {
  return Rat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rat operator-(const Rat& a, const Rat& b) {
  BigInt n = a.num_ * b.den_ - b.num_ * a.den_;
  if (n < 0) throw std::domain_error("rational subtraction went negative");
  return Rat(std::move(n), a.den_ * b.den_);
}

Rat operator*(const Rat& a, const Rat& b) {
  return Rat(a.num_ * b.num_, a.den_ * b.den_);
}

Prob::Prob(Rat v) : val_(std::move(v)) {
  if (val_ > Rat(1ul)) throw std::domain_error("probability above 1: " + val_.str());
}

std::optional<Prob> Prob::parse(std::string_view text) {
  auto r = Rat::parse(text);
  if (!r || *r > Rat(1ul)) return std::nullopt;
  return Prob(*r);
}

}  // namespace parslab
