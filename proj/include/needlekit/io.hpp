#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "needlekit/discrete_space.hpp"
#include "needlekit/interpolate1d.hpp"
#include "needlekit/interval_set.hpp"
#include "needlekit/models.hpp"
#include "needlekit/pl_concave.hpp"

namespace needlekit {

// JSON documents. Infinite values are written as the strings "inf" / "-inf".
// Readers also accept a wrapping object holding the value under the key
// "space", "set", "density" or "model", which is how counterexample files
// are laid out.

PLConcave space_from_json(const std::string& text);
std::string space_to_json(const PLConcave& space);

IntervalSet interval_set_from_json(const std::string& text);
std::string interval_set_to_json(const IntervalSet& set);

DiscreteSpace discrete_space_from_json(const std::string& text);
std::string discrete_space_to_json(const DiscreteSpace& space);

ModelSpec model_spec_from_json(const std::string& text);
std::string model_spec_to_json(const ModelSpec& spec);

/// {"edges": [...], "rho": [...]}, rho relative to the reference measure;
/// normalised on reading. `key` selects the wrapped entry.
Density1D density_from_json(const PLConcave& reference, const std::string& text,
                            const char* key = "density");

/// Either a boolean array with one entry per point or {"indices": [...]}.
std::vector<bool> mask_from_json(const std::string& text, std::size_t n);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// 17 significant digits; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double x);

}  // namespace needlekit
