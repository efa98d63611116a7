#include "parslab/pars.hpp"

#include <algorithm>
#include <set>

namespace parslab {

ElementId SymbolTable::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  ElementId id = static_cast<ElementId>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<ElementId> SymbolTable::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& SymbolTable::name(ElementId id) const {
  return names_.at(id);
}

const std::vector<Rule> TableSystem::kNoRules;

void TableSystem::add_rule(ElementId lhs, Rule rhs) {
  if (rhs.mass() != Prob::one())
    throw std::invalid_argument("rule right-hand side must have mass 1");
  table_[lhs].push_back(std::move(rhs));
}

namespace {

// Canonical numerals only, so that name <-> value is a bijection.
std::optional<unsigned long long> as_natural(const std::string& name) {
  if (name.empty() || name.size() > 12) return std::nullopt;
  if (name.size() > 1 && name[0] == '0') return std::nullopt;
  unsigned long long v = 0;
  for (char c : name) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<unsigned long long>(c - '0');
  }
  return v;
}

}  // namespace

std::optional<ElementId> TableSystem::resolve(std::string_view name) {
  if (auto id = symbols_.find(name)) return id;
  if (generator_ != WalkKind::None) {
    std::string s(name);
    if (as_natural(s) || (generator_ == WalkKind::WalkStop && s == "stop"))
      return symbols_.intern(s);
  }
  return std::nullopt;
}

const std::vector<Rule>* TableSystem::explicit_rules(ElementId e) const {
  auto it = table_.find(e);
  return it == table_.end() ? nullptr : &it->second;
}

const std::vector<Rule>& TableSystem::rules(ElementId e) const {
  if (auto it = table_.find(e); it != table_.end()) return it->second;
  if (generator_ == WalkKind::None) return kNoRules;

  std::scoped_lock lock(memo_lock_);
  if (auto it = generated_.find(e); it != generated_.end()) return it->second;

  auto n = as_natural(symbols_.name(e));
  if (!n || *n == 0) return generated_.emplace(e, std::vector<Rule>{}).first->second;

  // A TableSystem is logically immutable; generating the walk rules for a
  // natural interns its neighbours on first use.
  auto& self = const_cast<TableSystem&>(*this);
  Rule step;
  step.add(self.symbols_.intern(std::to_string(*n - 1)), Prob::dyadic(1));
  step.add(self.symbols_.intern(std::to_string(*n + 1)), Prob::dyadic(1));
  std::vector<Rule> rs{std::move(step)};
  if (generator_ == WalkKind::WalkStop) {
    Rule stop;
    stop.add(self.symbols_.intern("stop"), Prob::one());
    rs.push_back(std::move(stop));
  }
  return generated_.emplace(e, std::move(rs)).first->second;
}

std::string TableSystem::display(ElementId e) const { return symbols_.name(e); }

const std::vector<Rule>& StrategySystem::rules(ElementId e) const {
  std::scoped_lock lock(memo_lock_);
  if (auto it = memo_.find(e); it != memo_.end()) return it->second;
  const auto& base = base_.rules(e);
  std::vector<Rule> picked;
  if (!base.empty()) {
    auto idx = selector_(e, base.size());
    if (idx.empty())
      throw std::logic_error("strategy dropped every rule of a non-normal element");
    for (std::size_t i : idx) picked.push_back(base.at(i));
  }
  return memo_.emplace(e, std::move(picked)).first->second;
}

std::unique_ptr<ParsSystem> strategy_single_rule(const ParsSystem& base, std::size_t k) {
  return std::make_unique<StrategySystem>(
      base, [k](ElementId, std::size_t count) {
        return std::vector<std::size_t>{std::min(k, count - 1)};
      });
}

ChoiceResolver uniform_rule(const ParsSystem& sys, std::size_t k) {
  return [&sys, k](ElementId e, std::size_t, std::size_t) {
    return std::min(k, sys.rules(e).size() - 1);
  };
}

ChoiceResolver lex_bits(const ParsSystem& sys, std::string bits) {
  if (bits.empty() || bits.find_first_not_of("01") != std::string::npos)
    throw std::invalid_argument("lex policy wants a non-empty 0/1 string");
  return [&sys, bits](ElementId e, std::size_t, std::size_t step) {
    std::size_t pos = std::min(step, bits.size() - 1);
    std::size_t idx = static_cast<std::size_t>(bits[pos] - '0');
    return std::min(idx, sys.rules(e).size() - 1);
  };
}

ChoiceResolver greedy_nnorm(const ParsSystem& sys) {
  auto cache = std::make_shared<std::unordered_map<ElementId, std::size_t>>();
  return [&sys, cache](ElementId e, std::size_t, std::size_t) {
    if (auto it = cache->find(e); it != cache->end()) return it->second;
    const auto& rs = sys.rules(e);
    std::size_t best = 0;
    Rat best_mass;
    for (std::size_t j = 0; j < rs.size(); ++j) {
      Rat settled;
      for (const auto& [b, q] : rs[j].entries())
        if (sys.is_normal(b)) settled = settled + q.rat();
      if (j == 0 || settled > best_mass) {
        best = j;
        best_mass = settled;
      }
    }
    cache->emplace(e, best);
    return best;
  };
}

MultiDistribution lift_step(const ParsSystem& sys, const MultiDistribution& m,
                            const ChoiceResolver& choose, std::size_t step) {
  std::vector<std::pair<Prob, ElementId>> out;
  std::size_t occurrence = 0;
  for (const auto& [p, e] : m.pairs()) {
    const auto& rs = sys.rules(e);
    if (rs.empty()) {
      out.emplace_back(p, e);
    } else {
      std::size_t idx = choose(e, occurrence, step);
      if (idx >= rs.size())
        throw std::out_of_range("resolver picked rule " + std::to_string(idx) +
                                " of " + std::to_string(rs.size()) + " for " +
                                sys.display(e));
      for (const auto& [b, q] : rs[idx].entries()) out.emplace_back(p * q, b);
    }
    ++occurrence;
  }
  return MultiDistribution(std::move(out));
}

namespace {

// Count vectors (c_0..c_{r-1}) with sum k, ascending lexicographic.
void count_vectors(std::size_t k, std::size_t r, std::vector<std::size_t>& cur,
                   std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() + 1 == r) {
    cur.push_back(k);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (std::size_t c = 0; c <= k; ++c) {
    cur.push_back(c);
    count_vectors(k - c, r, cur, out);
    cur.pop_back();
  }
}

struct Group {
  Prob p;
  ElementId e;
  std::size_t count;
  // One entry per rule; empty for a normal element.
  std::vector<std::vector<std::pair<Prob, ElementId>>> scaled_rules;
  std::vector<std::vector<std::size_t>> splits;  // rule count vectors
};

}  // namespace

SuccessorSet successors(const ParsSystem& sys, const MultiDistribution& m,
                        std::size_t cap) {
  // Occurrences with equal probability and element are interchangeable: a
  // successor depends only on how many of them take each rule. Grouping
  // them turns the per-occurrence product into a product of rule counts.
  std::vector<Group> groups;
  for (const auto& [p, e] : m.pairs()) {
    if (!groups.empty() && groups.back().p == p && groups.back().e == e) {
      ++groups.back().count;
      continue;
    }
    groups.push_back({p, e, 1, {}, {}});
  }
  for (auto& g : groups) {
    for (const auto& rule : sys.rules(g.e)) {
      std::vector<std::pair<Prob, ElementId>> scaled;
      for (const auto& [b, q] : rule.entries()) scaled.emplace_back(g.p * q, b);
      g.scaled_rules.push_back(std::move(scaled));
    }
  }

  SuccessorSet result;
  std::set<MultiDistribution> seen;
  std::size_t enumerated = 0;

  for (auto& g : groups) {
    if (g.scaled_rules.empty()) continue;
    std::vector<std::size_t> cur;
    count_vectors(g.count, g.scaled_rules.size(), cur, g.splits);
  }

  std::vector<std::size_t> pick(groups.size(), 0);
  std::vector<std::pair<Prob, ElementId>> pairs;
  auto emit = [&]() {
    pairs.clear();
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const auto& g = groups[gi];
      if (g.scaled_rules.empty()) {
        for (std::size_t c = 0; c < g.count; ++c) pairs.emplace_back(g.p, g.e);
        continue;
      }
      const auto& split = g.splits[pick[gi]];
      for (std::size_t j = 0; j < split.size(); ++j)
        for (std::size_t c = 0; c < split[j]; ++c)
          pairs.insert(pairs.end(), g.scaled_rules[j].begin(), g.scaled_rules[j].end());
    }
    seen.insert(MultiDistribution(pairs));
  };

  // Odometer over the groups' split choices, lexicographic.
  std::function<void(std::size_t)> walk = [&](std::size_t gi) {
    if (result.truncated) return;
    if (gi == groups.size()) {
      if (++enumerated > cap) {
        result.truncated = true;
        return;
      }
      emit();
      return;
    }
    const auto& g = groups[gi];
    std::size_t options = g.scaled_rules.empty() ? 1 : g.splits.size();
    for (std::size_t o = 0; o < options; ++o) {
      pick[gi] = o;
      walk(gi + 1);
      if (result.truncated) return;
    }
  };
  walk(0);

  result.items.assign(seen.begin(), seen.end());
  return result;
}

RewriteTrace run(const ParsSystem& sys, const MultiDistribution& start,
                 const ChoiceResolver& choose, std::size_t depth) {
  RewriteTrace t;
  auto pred = sys.normal_pred();
  t.states.push_back(start);
  for (std::size_t n = 0; n < depth; ++n)
    t.states.push_back(lift_step(sys, t.states.back(), choose, n));
  t.nf_states.reserve(t.states.size());
  t.nnorm_states.reserve(t.states.size());
  for (const auto& m : t.states) {
    t.nf_states.push_back(nf(m, pred));
    t.nnorm_states.push_back(t.nf_states.back().mass());
  }
  return t;
}

}  // namespace parslab
