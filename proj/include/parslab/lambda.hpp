#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "parslab/pars.hpp"

namespace parslab {

// Terms of the probabilistic weak call-by-value calculus:
//   M ::= x | \x. M | M M | M (+) N
// Values are variables and abstractions. Reduction never enters an
// abstraction body or a (+) operand; (+) itself is the probabilistic redex.
struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Var, Abs, App, Choice };
  Kind kind;
  std::string name;  // Var: the variable; Abs: the binder
  TermPtr sub1;      // Abs: body; App/Choice: left
  TermPtr sub2;      // App/Choice: right
};

TermPtr var(std::string name);
TermPtr abs(std::string binder, TermPtr body);
TermPtr app(TermPtr fun, TermPtr arg);
TermPtr choice(TermPtr left, TermPtr right);

bool is_value(const TermPtr& t);
std::set<std::string> free_vars(const TermPtr& t);
bool is_closed(const TermPtr& t);

struct NotAValue : std::runtime_error {
  explicit NotAValue(const std::string& what) : std::runtime_error(what) {}
};
struct InvalidPosition : std::runtime_error {
  explicit InvalidPosition(const std::string& what) : std::runtime_error(what) {}
};

// m[x := v]. Capture is avoided by renaming binders (primes appended, which
// the surface syntax accepts); v must be a value, matching the call-by-value
// beta rule.
TermPtr substitute(const TermPtr& m, const std::string& x, const TermPtr& v);

// Nameless canonical form; two terms are alpha-equivalent iff keys match.
std::string alpha_key(const TermPtr& t);
bool alpha_equal(const TermPtr& a, const TermPtr& b);

// Surface syntax, also used for display:
//   \x. M       abstraction, body extends as far right as possible
//   M N         application, left-associative
//   M (+) N     choice, lowest precedence, right-associative
std::string print_term(const TermPtr& t);
TermPtr parse_term(std::string_view text);  // throws ParseError

enum class RedexKind { Beta, Choice };
enum class Dir : std::uint8_t { Left, Right };

// A redex is addressed by its path through application nodes from the
// root; weak reduction never moves through Abs or Choice, so Left/Right
// only ever select an App operand.
struct RedexPosition {
  std::vector<Dir> path;
  RedexKind kind;
};

// All weak redexes, leftmost-outermost first.
std::vector<RedexPosition> redexes(const TermPtr& t);

// Contract the redex at pos inside t. Beta yields one contractum with mass
// 1; choice yields both branches at 1/2 each (merged when they collide up
// to alpha). Total mass is always exactly 1.
std::vector<std::pair<Prob, TermPtr>> step_at(const TermPtr& t, const RedexPosition& pos);

// Interns terms up to alpha-equivalence; the first representative seen is
// the one used for display.
class TermUniverse {
 public:
  ElementId intern(const TermPtr& t);
  const TermPtr& term(ElementId id) const;

 private:
  std::vector<TermPtr> terms_;
  std::unordered_map<std::string, ElementId> by_key_;
  mutable std::mutex lock_;
};

enum class LambdaStrategy { Full, Leftmost, Rightmost, Random };

// The calculus as a rewrite system. Full keeps every redex as a separate
// rule; the others restrict to a single one per term, so they are
// deterministic sub-relations with the same normal forms. Random pins one
// redex per term from the seed.
class LambdaSystem : public ParsSystem {
 public:
  LambdaSystem(TermUniverse& universe, LambdaStrategy strategy,
               std::uint64_t seed = 0)
      : universe_(universe), strategy_(strategy), seed_(seed) {}

  const std::vector<Rule>& rules(ElementId e) const override;
  std::string display(ElementId e) const override;

  TermUniverse& universe() const { return universe_; }

 private:
  TermUniverse& universe_;
  LambdaStrategy strategy_;
  std::uint64_t seed_;
  mutable std::unordered_map<ElementId, std::vector<Rule>> memo_;
  mutable std::mutex memo_lock_;
};

// Seeded generator of closed terms for the property harnesses. Choice
// nodes appear with weight about 1/3; sizes are node counts in
// [3, max_size].
std::vector<TermPtr> random_closed_terms(std::size_t count, std::size_t max_size,
                                         std::uint64_t seed);

struct HarnessReport {
  std::size_t terms = 0;
  std::size_t divergence_pairs = 0;  // distinct one-step reduct pairs seen
  std::size_t violations = 0;
  bool rd_holds = true;  // aggregated bounded descent check over the corpus
  std::string first_violation;
};

// For every corpus term, checks the one-step diamond the calculus is
// supposed to satisfy for the normal-form observation: distinct one-step
// reducts of [1 M] carry no normal mass and rejoin in one step. Also runs
// the bounded all-reducts observation-equality check from each term.
HarnessReport diamond_harness(TermUniverse& universe,
                              const std::vector<TermPtr>& corpus,
                              std::size_t rd_depth,
                              const SearchLimits& limits = {});

}  // namespace parslab
