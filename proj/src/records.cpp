#include "parslab/records.hpp"

namespace parslab {

Json to_json(const ParsSystem& sys, const MultiDistribution& m) {
  Json out = Json::array();
  for (const auto& [p, e] : m.pairs()) out.push_back({p.str(), sys.display(e)});
  return out;
}

Json to_json(const ParsSystem& sys, const SubDistribution& d) {
  Json out = Json::object();
  for (const auto& [e, p] : d.entries()) out[sys.display(e)] = p.str();
  return out;
}

Json to_json(const ParsSystem& sys, const DivergenceWitness& w) {
  return Json{{"origin", to_json(sys, w.origin)},
              {"left", to_json(sys, w.left)},
              {"right", to_json(sys, w.right)},
              {"step", w.step},
              {"left_obs", w.left_obs},
              {"right_obs", w.right_obs},
              {"note", w.note}};
}

Json to_json(const ParsSystem& sys, const CheckVerdict& v) {
  Json out{{"holds", v.holds},
           {"conclusive", v.conclusive},
           {"truncated", v.truncated},
           {"checked_depth", v.checked_depth}};
  if (v.witness) out["witness"] = to_json(sys, *v.witness);
  return out;
}

Json to_json(const ParsSystem& sys, const LimitBound& b) {
  return Json{{"lower", to_json(sys, b.lower)},
              {"depth", b.depth},
              {"residual", b.residual.str()}};
}

Json to_json(const ParsSystem& sys, const ClassifyReport& r) {
  Json bounds = Json::array();
  for (const auto& b : r.bounds) bounds.push_back(to_json(sys, b));
  Json out{{"depth", r.depth},
           {"truncated", r.truncated},
           {"path_count", r.path_count},
           {"bounds", std::move(bounds)},
           {"unique_limit", un_verdict_name(r.un)},
           {"min_residual", r.min_residual.str()},
           {"max_residual", r.max_residual.str()},
           {"all_paths_settled", !r.sn_refuted_at_depth},
           {"best_settled_mass", r.wn_best.str()}};
  if (r.un_witness)
    out["unique_limit_witness"] = Json{r.un_witness->first, r.un_witness->second};
  return out;
}

Json step_record(const ParsSystem& sys, const RewriteTrace& t, std::size_t step) {
  return Json{{"step", step},
              {"state", to_json(sys, t.states.at(step))},
              {"nf", to_json(sys, t.nf_states.at(step))},
              {"nnorm", t.nnorm_states.at(step).str()}};
}

namespace {

Prob parse_prob_field(const std::string& text) {
  auto p = Prob::parse(text);
  if (!p) throw std::invalid_argument("bad probability in record: " + text);
  return *p;
}

ElementId resolve_name(TableSystem& sys, const std::string& name) {
  auto id = sys.resolve(name);
  if (!id) throw std::invalid_argument("unknown element in record: " + name);
  return *id;
}

}  // namespace

MultiDistribution multidist_from_json(TableSystem& sys, const Json& j) {
  std::vector<std::pair<Prob, ElementId>> pairs;
  for (const auto& entry : j) {
    pairs.emplace_back(parse_prob_field(entry.at(0).get<std::string>()),
                       resolve_name(sys, entry.at(1).get<std::string>()));
  }
  return MultiDistribution(std::move(pairs));
}

DivergenceWitness witness_from_json(TableSystem& sys, const Json& j) {
  DivergenceWitness w;
  w.origin = multidist_from_json(sys, j.at("origin"));
  w.left = multidist_from_json(sys, j.at("left"));
  w.right = multidist_from_json(sys, j.at("right"));
  w.step = j.at("step").get<std::size_t>();
  w.left_obs = j.at("left_obs").get<std::string>();
  w.right_obs = j.at("right_obs").get<std::string>();
  w.note = j.at("note").get<std::string>();
  return w;
}

}  // namespace parslab
