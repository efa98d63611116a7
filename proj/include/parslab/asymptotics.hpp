#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "parslab/multidist.hpp"
#include "parslab/pars.hpp"

namespace parslab {

// Lower bound on a limit distribution, read off a finite prefix of a rewrite
// sequence.  `lower` is the normal-form mass collected so far; `residual` is
// the mass still sitting on reducible elements, an upper bound on how much any
// extension of the prefix can still add to each normal form.
struct LimitBound {
  SubDistribution lower;
  std::size_t depth = 0;
  Rat residual;
};

LimitBound limit_bound(const ParsSystem& sys, const RewriteTrace& trace);

// Partial sum of the expected-steps series: each level contributes the mass
// that has not yet reached a normal form.  `plateau` records that the residual
// was positive and unchanged over the last step, a cheap hint (not a proof)
// that the series may diverge.
struct MeanTimeBound {
  Rat partial;
  std::size_t depth = 0;
  bool plateau = false;
};

// Requires a unit-mass starting distribution; throws std::invalid_argument
// otherwise.  Sums over levels 0 .. depth()-1, so the final state only feeds
// the plateau flag.
MeanTimeBound meantime_bound(const ParsSystem& sys, const RewriteTrace& trace);

// Breadth-first sweep of every rewrite sequence up to `depth`, one bound per
// distinct endpoint.  Frontiers are deduplicated level by level; `truncated`
// is set when either the per-state successor cap or the frontier cap bit.
struct LimitExploration {
  std::vector<LimitBound> bounds;
  bool truncated = false;
  std::size_t path_count = 0;
};

LimitExploration explore_limits(const ParsSystem& sys, const MultiDistribution& m0,
                                std::size_t depth,
                                const SearchLimits& limits = {});

// Verdict on uniqueness of limit distributions, judged from depth-bounded
// evidence.  Refutation is only reported when two bounds exclude each other
// in both directions: each demands more of some normal form than the other
// could ever still deliver, so every pair of extensions disagrees.
enum class UnVerdict { Evidence, Inconclusive, RefutedConclusive };

struct ClassifyReport {
  std::size_t depth = 0;
  bool truncated = false;
  std::size_t path_count = 0;
  std::vector<LimitBound> bounds;
  UnVerdict un = UnVerdict::Inconclusive;
  std::optional<std::pair<std::size_t, std::size_t>> un_witness;
  Rat min_residual;
  Rat max_residual;
  bool sn_refuted_at_depth = false;  // some sequence still carries live mass
  Rat wn_best;                       // best normal-form mass seen on any path
};

ClassifyReport classify(const ParsSystem& sys, const MultiDistribution& m0,
                        std::size_t depth, const SearchLimits& limits = {});

const char* un_verdict_name(UnVerdict v);

}  // namespace parslab
