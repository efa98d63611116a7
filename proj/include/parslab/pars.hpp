#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "parslab/multidist.hpp"

namespace parslab {

// Bidirectional name <-> id map. Interning order is determined by the
// input, which is what makes every downstream ordering reproducible.
class SymbolTable {
 public:
  ElementId intern(std::string_view name);
  std::optional<ElementId> find(std::string_view name) const;
  const std::string& name(ElementId id) const;
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, ElementId> ids_;
};

// One rewrite rule: a distribution over results with mass exactly 1.
using Rule = SubDistribution;

// A probabilistic rewrite system over interned elements. An element with no
// rules is a normal form. Systems are immutable once built; rule lookup may
// populate an internal cache (rule generators, lambda reduction), which is
// guarded so concurrent readers stay safe.
class ParsSystem {
 public:
  virtual ~ParsSystem() = default;
  virtual const std::vector<Rule>& rules(ElementId e) const = 0;
  virtual std::string display(ElementId e) const = 0;

  bool is_normal(ElementId e) const { return rules(e).empty(); }
  NormalPred normal_pred() const {
    return [this](ElementId e) { return is_normal(e); };
  }
};

enum class WalkKind { None, Walk, WalkStop };

// Rule-table system, optionally backed by one of the built-in random-walk
// generators over the naturals:
//   walk       n+1 -> 1/2 n, 1/2 n+2          (0 is normal)
//   walk-stop  additionally n+1 -> 1 stop
// An explicit table entry for an element overrides its generated rules.
class TableSystem : public ParsSystem {
 public:
  explicit TableSystem(WalkKind generator = WalkKind::None) : generator_(generator) {}

  SymbolTable& symbols() { return symbols_; }
  const SymbolTable& symbols() const { return symbols_; }
  WalkKind generator() const { return generator_; }

  // Declaration order is preserved per element; it is the rule index the
  // policies refer to.
  void add_rule(ElementId lhs, Rule rhs);

  // Resolves a user-supplied element name: known symbols always; fresh
  // numerals and "stop" when a generator is active.
  std::optional<ElementId> resolve(std::string_view name);

  // Explicit table entries only, nullptr when the element has none.
  const std::vector<Rule>* explicit_rules(ElementId e) const;

  const std::vector<Rule>& rules(ElementId e) const override;
  std::string display(ElementId e) const override;

 private:
  SymbolTable symbols_;
  WalkKind generator_;
  std::unordered_map<ElementId, std::vector<Rule>> table_;
  mutable std::unordered_map<ElementId, std::vector<Rule>> generated_;
  mutable std::mutex memo_lock_;
  static const std::vector<Rule> kNoRules;
};

// Restriction of a base system to a sub-relation: each element keeps a
// non-empty subset of its rules, so normal forms are untouched.
class StrategySystem : public ParsSystem {
 public:
  using Selector = std::function<std::vector<std::size_t>(ElementId, std::size_t)>;

  StrategySystem(const ParsSystem& base, Selector selector)
      : base_(base), selector_(std::move(selector)) {}

  const std::vector<Rule>& rules(ElementId e) const override;
  std::string display(ElementId e) const override { return base_.display(e); }

 private:
  const ParsSystem& base_;
  Selector selector_;
  mutable std::unordered_map<ElementId, std::vector<Rule>> memo_;
  mutable std::mutex memo_lock_;
};

// Always rule min(k, count-1).
std::unique_ptr<ParsSystem> strategy_single_rule(const ParsSystem& base, std::size_t k);

// Picks the rule for every occurrence of one lifted step:
// (element, occurrence index in canonical order, step number) -> rule index.
// The index must be valid for the element's rule list.
using ChoiceResolver =
    std::function<std::size_t(ElementId, std::size_t occurrence, std::size_t step)>;

// Rule min(k, count-1) everywhere.
ChoiceResolver uniform_rule(const ParsSystem& sys, std::size_t k);

// Step-indexed bit string: at step n, rule bits[n] (the last bit repeats
// once the string runs out), clamped to the element's rule count.
ChoiceResolver lex_bits(const ParsSystem& sys, std::string bits);

// Per occurrence, the rule whose right-hand side puts the most mass on
// normal forms (ties to the lowest index). Equivalent to choosing the
// successor of greatest nnorm, since contributions are independent.
ChoiceResolver greedy_nnorm(const ParsSystem& sys);

// One lifted step: normal occurrences persist, every other occurrence
// rewrites with the rule picked by the resolver. Mass is preserved.
MultiDistribution lift_step(const ParsSystem& sys, const MultiDistribution& m,
                            const ChoiceResolver& choose, std::size_t step);

struct SuccessorSet {
  std::vector<MultiDistribution> items;  // deduplicated, canonically ordered
  bool truncated = false;                // enumeration stopped at the cap
};

// All one-step reducts of m. Interchangeable occurrences (equal probability
// and element) are enumerated as grouped rule counts, which collapses the
// per-occurrence product without losing any distinct successor.
SuccessorSet successors(const ParsSystem& sys, const MultiDistribution& m,
                        std::size_t cap = 10000);

struct RewriteTrace {
  std::vector<MultiDistribution> states;  // states[0] is the start
  std::vector<SubDistribution> nf_states;
  std::vector<Prob> nnorm_states;

  std::size_t depth() const { return states.empty() ? 0 : states.size() - 1; }
};

// depth lifted steps under one resolver, with per-state nf/nnorm snapshots.
RewriteTrace run(const ParsSystem& sys, const MultiDistribution& start,
                 const ChoiceResolver& choose, std::size_t depth);

struct SearchLimits {
  std::size_t successor_cap = 10000;
  std::size_t frontier_cap = 10000;
};

}  // namespace parslab
