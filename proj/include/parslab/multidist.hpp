#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "parslab/rational.hpp"

namespace parslab {

// Elements are opaque interned identifiers; the hosting system (rule table,
// lambda-term universe) owns the mapping to displayable data. Nothing in
// this header inspects an element beyond its identity.
using ElementId = std::uint32_t;

struct MassOverflow : std::runtime_error {
  explicit MassOverflow(const std::string& what) : std::runtime_error(what) {}
};

// Finite map element -> probability with total mass <= 1 and no
// zero-probability entries. This is both the "flattened" view of a
// multidistribution and the right-hand side of a single rewrite rule
// (where the mass is exactly 1).
class SubDistribution {
 public:
  SubDistribution() = default;

  // Merges into an existing entry; zero contributions are dropped.
  void add(ElementId e, const Prob& p);

  const std::map<ElementId, Prob>& entries() const { return entries_; }
  Prob at(ElementId e) const;
  Prob mass() const { return mass_; }
  bool empty() const { return entries_.empty(); }

  // Pointwise order.
  bool leq(const SubDistribution& o) const;

  friend bool operator==(const SubDistribution& a, const SubDistribution& b) {
    return a.entries_ == b.entries_;
  }
  friend bool operator!=(const SubDistribution& a, const SubDistribution& b) {
    return !(a == b);
  }
  friend bool operator<(const SubDistribution& a, const SubDistribution& b);

 private:
  std::map<ElementId, Prob> entries_;
  Prob mass_;
};

// Multiset of (probability, element) occurrences, total mass <= 1.
// Distinct occurrences of the same pair are kept apart: they are the
// independent branches of a probabilistic reduction, and each one rewrites
// on its own. The representation is canonical (sorted by element, then
// probability), so equality is multiset equality.
class MultiDistribution {
 public:
  MultiDistribution() = default;
  explicit MultiDistribution(std::vector<std::pair<Prob, ElementId>> pairs);

  // [1 a]
  static MultiDistribution point(ElementId e);

  const std::vector<std::pair<Prob, ElementId>>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  Prob mass() const { return mass_; }

  friend bool operator==(const MultiDistribution& a, const MultiDistribution& b) {
    return a.pairs_ == b.pairs_;
  }
  friend bool operator!=(const MultiDistribution& a, const MultiDistribution& b) {
    return !(a == b);
  }
  // Lexicographic on the canonical representation; used for deterministic
  // successor sets and frontier dedup.
  friend bool operator<(const MultiDistribution& a, const MultiDistribution& b);

 private:
  std::vector<std::pair<Prob, ElementId>> pairs_;
  Prob mass_;
};

using NormalPred = std::function<bool(ElementId)>;

// q . m, every occurrence rescaled. Requires q > 0.
MultiDistribution scale(const Prob& q, const MultiDistribution& m);

// Disjoint sum: concatenation as multisets. Throws MassOverflow when the
// combined mass exceeds 1.
MultiDistribution sum(const std::vector<MultiDistribution>& ms);

// Mass per element, occurrences merged.
SubDistribution flatten(const MultiDistribution& m);

// Restriction of flatten to normal forms: the mass already settled.
SubDistribution nf(const MultiDistribution& m, const NormalPred& is_normal);

// ||nf m||, the probability of having reached a normal form.
Prob nnorm(const MultiDistribution& m, const NormalPred& is_normal);

enum class CompareMode { Flat, Nf, Norm };
enum class Relation { Equal, Leq, Geq, Incomparable };

// Strongest relation between the two views of m and r under the chosen
// observation. Norm compares a totally ordered quantity, so it never
// returns Incomparable.
Relation compare(const MultiDistribution& m, const MultiDistribution& r,
                 CompareMode mode, const NormalPred& is_normal);

const char* relation_name(Relation r);

}  // namespace parslab
