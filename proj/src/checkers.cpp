#include "parslab/checkers.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace parslab {

ObsValue observe(const Observation& obs, const ParsSystem& sys,
                 const MultiDistribution& m) {
  ObsValue v;
  v.kind = obs.kind;
  auto pred = sys.normal_pred();
  if (obs.kind == ObsKind::Nf)
    v.dist = nf(m, pred);
  else
    v.norm = nnorm(m, pred);
  return v;
}

bool obs_equal(const ObsValue& a, const ObsValue& b) {
  if (a.kind != b.kind) return false;
  return a.kind == ObsKind::Nf ? a.dist == b.dist : a.norm == b.norm;
}

bool obs_leq(const ObsValue& a, const ObsValue& b) {
  if (a.kind != b.kind) return false;
  return a.kind == ObsKind::Nf ? a.dist.leq(b.dist) : a.norm <= b.norm;
}

std::string render_obs(const ParsSystem& sys, const ObsValue& v) {
  if (v.kind == ObsKind::Nnorm) return v.norm.str();
  std::string out = "{";
  bool first = true;
  for (const auto& [e, p] : v.dist.entries()) {
    if (!first) out += ", ";
    first = false;
    out += sys.display(e);
    out += ": ";
    out += p.str();
  }
  out += "}";
  return out;
}

const char* obs_kind_name(ObsKind k) {
  return k == ObsKind::Nf ? "nf" : "nnorm";
}

namespace {

// Successor and observation lookups shared by one checker invocation. All
// verdicts inherit its truncation flag.
struct Explorer {
  const ParsSystem& sys;
  const Observation& obs;
  SearchLimits limits;
  bool truncated = false;
  std::map<MultiDistribution, std::vector<MultiDistribution>> succ_cache{};
  std::map<MultiDistribution, ObsValue> obs_cache{};

  const std::vector<MultiDistribution>& succ(const MultiDistribution& m) {
    if (auto it = succ_cache.find(m); it != succ_cache.end()) return it->second;
    auto s = successors(sys, m, limits.successor_cap);
    truncated |= s.truncated;
    return succ_cache.emplace(m, std::move(s.items)).first->second;
  }

  const ObsValue& value(const MultiDistribution& m) {
    if (auto it = obs_cache.find(m); it != obs_cache.end()) return it->second;
    return obs_cache.emplace(m, observe(obs, sys, m)).first->second;
  }

  std::set<MultiDistribution> next_level(const std::set<MultiDistribution>& cur) {
    std::set<MultiDistribution> out;
    for (const auto& m : cur) {
      const auto& s = succ(m);
      out.insert(s.begin(), s.end());
    }
    if (out.size() > limits.frontier_cap) {
      truncated = true;
      while (out.size() > limits.frontier_cap) out.erase(std::prev(out.end()));
    }
    return out;
  }
};

DivergenceWitness make_witness(Explorer& ex, const MultiDistribution& origin,
                               const MultiDistribution& left,
                               const MultiDistribution& right, std::size_t step,
                               std::string note) {
  DivergenceWitness w;
  w.origin = origin;
  w.left = left;
  w.right = right;
  w.step = step;
  w.left_obs = render_obs(ex.sys, ex.value(left));
  w.right_obs = render_obs(ex.sys, ex.value(right));
  w.note = std::move(note);
  return w;
}

}  // namespace

CheckVerdict check_pointed_diamond(const ParsSystem& sys,
                                   const std::vector<ElementId>& elements,
                                   const Observation& obs,
                                   const SearchLimits& limits) {
  CheckVerdict v;
  v.checked_depth = 1;
  Explorer ex{sys, obs, limits};
  for (ElementId a : elements) {
    auto m0 = MultiDistribution::point(a);
    const auto succ = ex.succ(m0);
    for (std::size_t i = 0; i < succ.size(); ++i) {
      for (std::size_t j = i + 1; j < succ.size(); ++j) {
        const auto& t = succ[i];
        const auto& s = succ[j];
        std::string note;
        bool obs_fail = !obs_equal(ex.value(t), ex.value(s));
        if (obs_fail) {
          note = "diverging reducts observe differently";
        } else {
          const auto& st = ex.succ(t);
          const auto& ss = ex.succ(s);
          std::vector<MultiDistribution> join;
          std::set_intersection(st.begin(), st.end(), ss.begin(), ss.end(),
                                std::back_inserter(join));
          if (join.empty()) note = "diverging reducts have no one-step join";
        }
        if (!note.empty()) {
          v.holds = false;
          v.truncated = ex.truncated;
          v.conclusive = obs_fail || !ex.truncated;
          v.witness = make_witness(ex, m0, t, s, 1, std::move(note));
          return v;
        }
      }
    }
  }
  v.truncated = ex.truncated;
  v.conclusive = !ex.truncated;
  return v;
}

CheckVerdict check_local_rd(const ParsSystem& sys, const MultiDistribution& m0,
                            const Observation& obs, std::size_t depth,
                            const SearchLimits& limits) {
  CheckVerdict v;
  v.checked_depth = depth;
  Explorer ex{sys, obs, limits};
  const auto succ = ex.succ(m0);
  bool any_divergence = false;
  for (std::size_t i = 0; i < succ.size(); ++i) {
    for (std::size_t j = i + 1; j < succ.size(); ++j) {
      any_divergence = true;
      const auto& t = succ[i];
      const auto& s = succ[j];
      // Pairs of extensions whose observations have agreed at every level so
      // far. A surviving pair at the horizon is a witnessing pair of
      // sequences; an empty set means no pair of sequences can keep the
      // observations aligned.
      std::set<std::pair<MultiDistribution, MultiDistribution>> live;
      if (obs_equal(ex.value(t), ex.value(s))) live.insert({t, s});
      for (std::size_t k = 0; k < depth && !live.empty(); ++k) {
        std::set<std::pair<MultiDistribution, MultiDistribution>> next;
        for (const auto& [a, b] : live) {
          for (const auto& a2 : ex.succ(a)) {
            for (const auto& b2 : ex.succ(b)) {
              if (obs_equal(ex.value(a2), ex.value(b2))) next.insert({a2, b2});
            }
          }
          if (next.size() > limits.frontier_cap) {
            ex.truncated = true;
            while (next.size() > limits.frontier_cap) next.erase(std::prev(next.end()));
          }
        }
        live = std::move(next);
      }
      if (live.empty()) {
        v.holds = false;
        v.conclusive = false;  // sequences are infinite; this is depth-bounded
        v.truncated = ex.truncated;
        v.witness = make_witness(
            ex, m0, t, s, 1,
            "no pair of sequences keeps the observations aligned within the horizon");
        return v;
      }
    }
  }
  v.truncated = ex.truncated;
  // A surviving pair only witnesses a finite prefix; nothing to witness is a
  // vacuous theorem.
  v.conclusive = !any_divergence && !ex.truncated;
  return v;
}

CheckVerdict check_rd_global(const ParsSystem& sys, const MultiDistribution& m0,
                             const Observation& obs, std::size_t depth,
                             const SearchLimits& limits) {
  CheckVerdict v;
  v.checked_depth = depth;
  Explorer ex{sys, obs, limits};
  std::set<MultiDistribution> frontier{m0};
  for (std::size_t k = 0; k <= depth; ++k) {
    if (frontier.size() >= 2) {
      auto it = frontier.begin();
      const MultiDistribution& head = *it;
      const ObsValue& head_obs = ex.value(head);
      for (++it; it != frontier.end(); ++it) {
        if (!obs_equal(head_obs, ex.value(*it))) {
          v.holds = false;
          v.conclusive = true;  // two same-length sequences already disagree
          v.truncated = ex.truncated;
          v.checked_depth = k;
          v.witness = make_witness(ex, m0, head, *it, k,
                                   "same-length sequences observe differently");
          return v;
        }
      }
    }
    if (k < depth) frontier = ex.next_level(frontier);
  }
  v.truncated = ex.truncated;
  v.conclusive = false;  // deeper levels could still split
  return v;
}

CheckVerdict check_locally_better(const ParsSystem& better, const ParsSystem& base,
                                  const MultiDistribution& m0,
                                  const Observation& obs, std::size_t depth,
                                  const SearchLimits& limits) {
  CheckVerdict v;
  v.checked_depth = depth;
  // t extends under the base relation, s under the better one: the two
  // frontiers are crossed so the comparison chases the same step count.
  Explorer ex_base{base, obs, limits};
  Explorer ex_better{better, obs, limits};
  const auto succ_better = ex_better.succ(m0);
  const auto succ_base = ex_base.succ(m0);
  for (const auto& t : succ_better) {
    for (const auto& s : succ_base) {
      std::set<MultiDistribution> ft{t}, fs{s};
      for (std::size_t k = 0; k < depth; ++k) {
        bool dominated = false;
        for (const auto& a : ft) {
          for (const auto& b : fs) {
            if (obs_leq(ex_better.value(b), ex_base.value(a))) {
              dominated = true;
              break;
            }
          }
          if (dominated) break;
        }
        if (!dominated) {
          v.holds = false;
          v.truncated = ex_base.truncated || ex_better.truncated;
          v.conclusive = !v.truncated;  // the failing level was fully enumerated
          v.witness = make_witness(ex_base, m0, *ft.begin(), *fs.begin(), k + 1,
                                   "no descendant pair restores the advantage");
          return v;
        }
        ft = ex_base.next_level(ft);
        fs = ex_better.next_level(fs);
      }
    }
  }
  v.truncated = ex_base.truncated || ex_better.truncated;
  v.conclusive = false;  // every level beyond the horizon is unchecked
  return v;
}

CheckVerdict check_skew_confluence(const ParsSystem& sys,
                                   const MultiDistribution& m0,
                                   const Observation& obs, std::size_t depth,
                                   const SearchLimits& limits) {
  CheckVerdict v;
  v.checked_depth = depth;
  Explorer ex{sys, obs, limits};

  std::set<MultiDistribution> reach{m0};
  std::set<MultiDistribution> frontier{m0};
  for (std::size_t k = 0; k < depth; ++k) {
    frontier = ex.next_level(frontier);
    reach.insert(frontier.begin(), frontier.end());
  }

  std::map<MultiDistribution, std::set<MultiDistribution>> reach_memo;
  auto reachable_from = [&](const MultiDistribution& s)
      -> const std::set<MultiDistribution>& {
    if (auto it = reach_memo.find(s); it != reach_memo.end()) return it->second;
    std::set<MultiDistribution> acc{s};
    std::set<MultiDistribution> fr{s};
    for (std::size_t k = 0; k < depth; ++k) {
      fr = ex.next_level(fr);
      acc.insert(fr.begin(), fr.end());
    }
    return reach_memo.emplace(s, std::move(acc)).first->second;
  };

  for (const auto& s : reach) {
    for (const auto& r : reach) {
      if (s == r) continue;
      const ObsValue& target = ex.value(r);
      bool dominated = false;
      for (const auto& cand : reachable_from(s)) {
        if (obs_leq(target, ex.value(cand))) {
          dominated = true;
          break;
        }
      }
      if (!dominated) {
        v.holds = false;
        v.conclusive = false;  // a dominating reduct may sit past the horizon
        v.truncated = ex.truncated;
        v.witness = make_witness(ex, m0, s, r, depth,
                                 "left cannot catch up with right's observation");
        return v;
      }
    }
  }
  v.truncated = ex.truncated;
  v.conclusive = false;
  return v;
}

std::vector<ElementId> reachable_elements(const ParsSystem& sys,
                                          const std::vector<ElementId>& roots,
                                          std::size_t depth, std::size_t cap) {
  std::set<ElementId> seen(roots.begin(), roots.end());
  std::vector<ElementId> frontier(seen.begin(), seen.end());
  for (std::size_t d = 0; d < depth && !frontier.empty(); ++d) {
    std::vector<ElementId> next;
    for (ElementId e : frontier) {
      for (const Rule& r : sys.rules(e)) {
        for (const auto& [target, p] : r.entries()) {
          if (seen.size() >= cap) break;
          if (seen.insert(target).second) next.push_back(target);
        }
      }
    }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

}  // namespace parslab
