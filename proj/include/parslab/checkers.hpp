#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "parslab/multidist.hpp"
#include "parslab/pars.hpp"

namespace parslab {

// What a checker compares between states: the settled distribution itself or
// just its mass. The distribution order is pointwise (partial); the mass
// order is total.
enum class ObsKind { Nf, Nnorm };

struct Observation {
  ObsKind kind = ObsKind::Nf;
};

struct ObsValue {
  ObsKind kind = ObsKind::Nf;
  SubDistribution dist;  // meaningful for Nf
  Prob norm;             // meaningful for Nnorm
};

ObsValue observe(const Observation& obs, const ParsSystem& sys,
                 const MultiDistribution& m);
bool obs_equal(const ObsValue& a, const ObsValue& b);
bool obs_leq(const ObsValue& a, const ObsValue& b);
std::string render_obs(const ParsSystem& sys, const ObsValue& v);
const char* obs_kind_name(ObsKind k);

// Two one-step reducts of the same state that the checked property could not
// reconcile. `step` is measured in lifted steps from `origin`, so the
// diverging reducts themselves sit at step 1.
struct DivergenceWitness {
  MultiDistribution origin;
  MultiDistribution left;
  MultiDistribution right;
  std::size_t step = 1;
  std::string left_obs;
  std::string right_obs;
  std::string note;
};

// `holds` is the verdict, `conclusive` says whether it is a theorem about
// the system or only what a bounded search could see. A missing witness
// within the horizon refutes nothing, so those failures stay inconclusive.
struct CheckVerdict {
  bool holds = true;
  bool conclusive = false;
  bool truncated = false;
  std::size_t checked_depth = 0;
  std::optional<DivergenceWitness> witness;
};

// Every pair of one-step reducts of [1 a] must agree on the observation and
// either coincide or rejoin in one more step. Checked per element, which is
// complete for this one-step property, so verdicts are conclusive unless the
// enumeration was cut off.
CheckVerdict check_pointed_diamond(const ParsSystem& sys,
                                   const std::vector<ElementId>& elements,
                                   const Observation& obs,
                                   const SearchLimits& limits = {});

// For each divergence t <= m0 => s, searches for a pair of extension
// sequences from t and s whose observations agree at every level up to the
// horizon (the reducts themselves are level 0). Either outcome is
// depth-bounded: a surviving pair is a witness prefix, an empty level means
// no aligned pair exists within the horizon (holds=false, conclusive=false).
CheckVerdict check_local_rd(const ParsSystem& sys, const MultiDistribution& m0,
                            const Observation& obs, std::size_t depth,
                            const SearchLimits& limits = {});

// All states reachable from m0 in exactly k steps must share one observation,
// for every k up to the horizon. A mismatch exhibits two same-length
// sequences that disagree, which refutes conclusively; agreement up to the
// horizon is evidence only.
CheckVerdict check_rd_global(const ParsSystem& sys, const MultiDistribution& m0,
                             const Observation& obs, std::size_t depth,
                             const SearchLimits& limits = {});

// Is `better` at least as good as `base` from m0? For every divergence
// t <=[better] m0 =>[base] s and every k below the horizon, some k-step
// descendant of t under `base` must observe at least as much as some k-step
// descendant of s under `better`. The two systems must share an element
// space. A level with no such pair refutes conclusively (frontiers are
// complete); surviving the horizon is evidence.
CheckVerdict check_locally_better(const ParsSystem& better, const ParsSystem& base,
                                  const MultiDistribution& m0,
                                  const Observation& obs, std::size_t depth,
                                  const SearchLimits& limits = {});

// For every two states s, r reachable from m0 within the horizon, s must
// reach (within the horizon) a state observing at least obs(r). Both verdict
// directions are depth-bounded evidence.
CheckVerdict check_skew_confluence(const ParsSystem& sys,
                                   const MultiDistribution& m0,
                                   const Observation& obs, std::size_t depth,
                                   const SearchLimits& limits = {});

// Elements reachable from the roots through rule right-hand sides, in
// ascending id order. The cap bounds the closure size.
std::vector<ElementId> reachable_elements(const ParsSystem& sys,
                                          const std::vector<ElementId>& roots,
                                          std::size_t depth, std::size_t cap = 10000);

}  // namespace parslab
