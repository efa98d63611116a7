#pragma once

#include <string>

#include "json.hpp"
#include "parslab/asymptotics.hpp"
#include "parslab/checkers.hpp"
#include "parslab/multidist.hpp"
#include "parslab/pars.hpp"

namespace parslab {

// JSON views of the core values. Probabilities are rendered as exact
// fraction strings ("3/8"), never as floating point, so records compare
// byte-for-byte across runs. nlohmann orders object keys, which keeps the
// rendering canonical.
using Json = nlohmann::json;

Json to_json(const ParsSystem& sys, const MultiDistribution& m);
Json to_json(const ParsSystem& sys, const SubDistribution& d);
Json to_json(const ParsSystem& sys, const DivergenceWitness& w);
Json to_json(const ParsSystem& sys, const CheckVerdict& v);
Json to_json(const ParsSystem& sys, const LimitBound& b);
Json to_json(const ParsSystem& sys, const ClassifyReport& r);

// One JSONL record per step of a trace.
Json step_record(const ParsSystem& sys, const RewriteTrace& t, std::size_t step);

// Inverses for the record kinds the CLI can replay. Element names are
// resolved against the given system; unknown names throw
// std::invalid_argument.
MultiDistribution multidist_from_json(TableSystem& sys, const Json& j);
DivergenceWitness witness_from_json(TableSystem& sys, const Json& j);

}  // namespace parslab
