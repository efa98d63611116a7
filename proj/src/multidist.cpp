#include "parslab/multidist.hpp"

#include <algorithm>

namespace parslab {

void SubDistribution::add(ElementId e, const Prob& p) {
  if (p.is_zero()) return;
  Rat total = mass_.rat() + p.rat();
  if (total > Rat(1ul))
    throw MassOverflow("sub-distribution mass would reach " + total.str());
  mass_ = Prob(std::move(total));
  auto it = entries_.find(e);
  if (it == entries_.end())
    entries_.emplace(e, p);
  else
    it->second = Prob(it->second.rat() + p.rat());
}

Prob SubDistribution::at(ElementId e) const {
  auto it = entries_.find(e);
  return it == entries_.end() ? Prob::zero() : it->second;
}

bool SubDistribution::leq(const SubDistribution& o) const {
  for (const auto& [e, p] : entries_)
    if (!(p <= o.at(e))) return false;
  return true;
}

bool operator<(const SubDistribution& a, const SubDistribution& b) {
  return std::lexicographical_compare(
      a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end(),
      [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first < y.first;
        return x.second < y.second;
      });
}

MultiDistribution::MultiDistribution(std::vector<std::pair<Prob, ElementId>> pairs)
    : pairs_(std::move(pairs)) {
  std::erase_if(pairs_, [](const auto& pr) { return pr.first.is_zero(); });
  std::sort(pairs_.begin(), pairs_.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second < y.second;
    return x.first < y.first;
  });
  Rat total;
  for (const auto& [p, e] : pairs_) total = total + p.rat();
  if (total > Rat(1ul))
    throw MassOverflow("multidistribution mass would reach " + total.str());
  mass_ = Prob(std::move(total));
}

MultiDistribution MultiDistribution::point(ElementId e) {
  return MultiDistribution({{Prob::one(), e}});
}

bool operator<(const MultiDistribution& a, const MultiDistribution& b) {
  return std::lexicographical_compare(
      a.pairs_.begin(), a.pairs_.end(), b.pairs_.begin(), b.pairs_.end(),
      [](const auto& x, const auto& y) {
        if (x.second != y.second) return x.second < y.second;
        return x.first < y.first;
      });
}

MultiDistribution scale(const Prob& q, const MultiDistribution& m) {
  if (q.is_zero()) throw std::invalid_argument("scale by zero");
  std::vector<std::pair<Prob, ElementId>> out;
  out.reserve(m.size());
  for (const auto& [p, e] : m.pairs()) out.emplace_back(q * p, e);
  return MultiDistribution(std::move(out));
}

MultiDistribution sum(const std::vector<MultiDistribution>& ms) {
  std::vector<std::pair<Prob, ElementId>> out;
  for (const auto& m : ms)
    out.insert(out.end(), m.pairs().begin(), m.pairs().end());
  return MultiDistribution(std::move(out));
}

SubDistribution flatten(const MultiDistribution& m) {
  SubDistribution d;
  for (const auto& [p, e] : m.pairs()) d.add(e, p);
  return d;
}

SubDistribution nf(const MultiDistribution& m, const NormalPred& is_normal) {
  SubDistribution d;
  for (const auto& [p, e] : m.pairs())
    if (is_normal(e)) d.add(e, p);
  return d;
}

Prob nnorm(const MultiDistribution& m, const NormalPred& is_normal) {
  return nf(m, is_normal).mass();
}

namespace {

Relation relate_sub(const SubDistribution& a, const SubDistribution& b) {
  if (a == b) return Relation::Equal;
  if (a.leq(b)) return Relation::Leq;
  if (b.leq(a)) return Relation::Geq;
  return Relation::Incomparable;
}

}  // namespace

Relation compare(const MultiDistribution& m, const MultiDistribution& r,
                 CompareMode mode, const NormalPred& is_normal) {
  switch (mode) {
    case CompareMode::Flat:
      return relate_sub(flatten(m), flatten(r));
    case CompareMode::Nf:
      return relate_sub(nf(m, is_normal), nf(r, is_normal));
    case CompareMode::Norm: {
      Prob a = nnorm(m, is_normal), b = nnorm(r, is_normal);
      if (a == b) return Relation::Equal;
      return a < b ? Relation::Leq : Relation::Geq;
    }
  }
  throw std::logic_error("unreachable");
}

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::Equal: return "equal";
    case Relation::Leq: return "leq";
    case Relation::Geq: return "geq";
    case Relation::Incomparable: return "incomparable";
  }
  throw std::logic_error("unreachable");
}

}  // namespace parslab
