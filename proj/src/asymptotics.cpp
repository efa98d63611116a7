#include "parslab/asymptotics.hpp"

#include <set>
#include <stdexcept>

namespace parslab {

LimitBound limit_bound(const ParsSystem& sys, const RewriteTrace& trace) {
  if (trace.states.empty()) throw std::invalid_argument("empty trace");
  LimitBound b;
  b.lower = nf(trace.states.back(), sys.normal_pred());
  b.depth = trace.depth();
  // Lifted steps preserve mass, so whatever is not settled is still live.
  b.residual = trace.states.front().mass().rat() - b.lower.mass().rat();
  return b;
}

MeanTimeBound meantime_bound(const ParsSystem& sys, const RewriteTrace& trace) {
  (void)sys;
  if (trace.states.empty()) throw std::invalid_argument("empty trace");
  if (!trace.states.front().mass().is_one())
    throw std::invalid_argument("mean-time bounds need a unit-mass start");
  MeanTimeBound out;
  out.depth = trace.depth();
  for (std::size_t n = 0; n < trace.depth(); ++n)
    out.partial = out.partial + trace.nnorm_states[n].complement().rat();
  if (trace.depth() >= 1) {
    Rat last = trace.nnorm_states[trace.depth()].complement().rat();
    Rat prev = trace.nnorm_states[trace.depth() - 1].complement().rat();
    out.plateau = !last.is_zero() && last == prev;
  }
  return out;
}

LimitExploration explore_limits(const ParsSystem& sys, const MultiDistribution& m0,
                                std::size_t depth, const SearchLimits& limits) {
  LimitExploration out;
  std::set<MultiDistribution> frontier{m0};
  for (std::size_t d = 0; d < depth; ++d) {
    std::set<MultiDistribution> next;
    for (const auto& m : frontier) {
      auto succ = successors(sys, m, limits.successor_cap);
      out.truncated |= succ.truncated;
      next.insert(succ.items.begin(), succ.items.end());
    }
    if (next.size() > limits.frontier_cap) {
      out.truncated = true;
      while (next.size() > limits.frontier_cap) next.erase(std::prev(next.end()));
    }
    frontier = std::move(next);
  }
  auto pred = sys.normal_pred();
  Rat start_mass = m0.mass().rat();
  for (const auto& m : frontier) {
    LimitBound b;
    b.lower = nf(m, pred);
    b.depth = depth;
    b.residual = start_mass - b.lower.mass().rat();
    out.bounds.push_back(std::move(b));
  }
  out.path_count = frontier.size();
  return out;
}

namespace {

// Largest amount by which a's settled mass exceeds what b can still reach on
// some element, or nothing when a stays inside b's envelope everywhere.
std::optional<Rat> envelope_excess(const LimitBound& a, const LimitBound& b) {
  std::optional<Rat> best;
  for (const auto& [e, p] : a.lower.entries()) {
    Rat ceiling = b.lower.at(e).rat() + b.residual;
    if (p.rat() > ceiling) {
      Rat gap = p.rat() - ceiling;
      if (!best || *best < gap) best = gap;
    }
  }
  return best;
}

}  // namespace

ClassifyReport classify(const ParsSystem& sys, const MultiDistribution& m0,
                        std::size_t depth, const SearchLimits& limits) {
  auto ex = explore_limits(sys, m0, depth, limits);
  ClassifyReport r;
  r.depth = depth;
  r.truncated = ex.truncated;
  r.path_count = ex.path_count;
  r.bounds = std::move(ex.bounds);

  bool first = true;
  for (const auto& b : r.bounds) {
    Rat settled = b.lower.mass().rat();
    if (first) {
      r.min_residual = b.residual;
      r.max_residual = b.residual;
      r.wn_best = settled;
      first = false;
    } else {
      if (b.residual < r.min_residual) r.min_residual = b.residual;
      if (r.max_residual < b.residual) r.max_residual = b.residual;
      if (r.wn_best < settled) r.wn_best = settled;
    }
  }
  r.sn_refuted_at_depth = !r.max_residual.is_zero();

  // A pair of bounds refutes uniqueness only when each demands more of some
  // normal form than the other can ever deliver; then no pair of extensions
  // can meet. One-sided excess leaves the question open.
  bool one_sided = false;
  std::optional<Rat> best_score;
  for (std::size_t i = 0; i < r.bounds.size(); ++i) {
    for (std::size_t j = i + 1; j < r.bounds.size(); ++j) {
      auto eij = envelope_excess(r.bounds[i], r.bounds[j]);
      auto eji = envelope_excess(r.bounds[j], r.bounds[i]);
      if (eij && eji) {
        Rat score = *eij < *eji ? *eij : *eji;
        if (!best_score || *best_score < score) {
          best_score = score;
          r.un_witness = {i, j};
        }
      } else if (eij || eji) {
        one_sided = true;
      }
    }
  }
  if (r.un_witness)
    r.un = UnVerdict::RefutedConclusive;
  else if (one_sided)
    r.un = UnVerdict::Inconclusive;
  else
    r.un = UnVerdict::Evidence;
  return r;
}

const char* un_verdict_name(UnVerdict v) {
  switch (v) {
    case UnVerdict::Evidence:
      return "evidence";
    case UnVerdict::Inconclusive:
      return "inconclusive";
    case UnVerdict::RefutedConclusive:
      return "refuted-conclusive";
  }
  return "?";
}

}  // namespace parslab
