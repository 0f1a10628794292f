#pragma once

#include "json.hpp"
#include "needlekit/discrete_space.hpp"
#include "needlekit/interval_set.hpp"
#include "needlekit/models.hpp"
#include "needlekit/pl_concave.hpp"

namespace needlekit::json_io {

using nlohmann::json;

json parse(const std::string& text);
/// The value under `key` when `doc` is an object holding it, else `doc`.
const json& unwrap(const json& doc, const char* key);

double number(const json& v);
json number_json(double x);

PLConcave space(const json& j);
json to_json(const PLConcave& space);
IntervalSet interval_set(const json& j);
json to_json(const IntervalSet& set);
DiscreteSpace discrete_space(const json& j);
json to_json(const DiscreteSpace& space);
ModelSpec model_spec(const json& j);
json to_json(const ModelSpec& spec);

}  // namespace needlekit::json_io
