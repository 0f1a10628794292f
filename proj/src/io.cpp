#include "needlekit/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json_io.hpp"
#include "needlekit/error.hpp"

namespace needlekit {

namespace json_io {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::parse, std::string("malformed JSON: ") + e.what());
  }
}

const json& unwrap(const json& doc, const char* key) {
  if (doc.is_object() && doc.contains(key)) return doc.at(key);
  return doc;
}

double number(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  fail(ErrorCode::parse, "expected a number or \"inf\"/\"-inf\", got " + v.dump());
}

json number_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

namespace {

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) fail(ErrorCode::parse, std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v));
  return out;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorCode::parse, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

}  // namespace

PLConcave space(const json& doc) {
  const json& j = unwrap(doc, "space");
  const auto domain = numbers(field(j, "domain"), "domain");
  if (domain.size() != 2) fail(ErrorCode::parse, "domain must have two entries");
  const auto bp = numbers(field(j, "breakpoints"), "breakpoints");
  const auto vals = numbers(field(j, "values"), "values");
  double sl = 0.0, sr = 0.0;
  if (j.contains("end_slopes")) {
    const auto s = numbers(j.at("end_slopes"), "end_slopes");
    if (s.size() != 2) fail(ErrorCode::parse, "end_slopes must have two entries");
    sl = s[0];
    sr = s[1];
  } else if (std::isinf(domain[0]) || std::isinf(domain[1])) {
    fail(ErrorCode::parse, "end_slopes are required on an unbounded domain");
  }
  return PLConcave::create(domain[0], domain[1], bp, vals, sl, sr);
}

json to_json(const PLConcave& s) {
  json j;
  j["domain"] = {number_json(s.domain_lo()), number_json(s.domain_hi())};
  j["breakpoints"] = s.breakpoints();
  j["values"] = s.values();
  j["end_slopes"] = {s.left_slope(), s.right_slope()};
  return j;
}

IntervalSet interval_set(const json& doc) {
  const json& j = unwrap(doc, "set");
  if (!j.is_array()) fail(ErrorCode::parse, "an interval set must be an array of [a, b] pairs");
  std::vector<Interval> iv;
  for (const auto& p : j) {
    const auto ab = numbers(p, "interval");
    if (ab.size() != 2) fail(ErrorCode::parse, "intervals must have two endpoints");
    iv.push_back({ab[0], ab[1]});
  }
  return IntervalSet(std::move(iv));
}

json to_json(const IntervalSet& set) {
  json j = json::array();
  for (const auto& iv : set) j.push_back({number_json(iv.lo), number_json(iv.hi)});
  return j;
}

DiscreteSpace discrete_space(const json& doc) {
  const json& j = unwrap(doc, "space");
  const auto w = numbers(field(j, "weights"), "weights");
  std::vector<std::vector<double>> rows;
  const bool coords = j.contains("coords");
  const json& m = coords ? j.at("coords") : field(j, "dist");
  if (!m.is_array()) fail(ErrorCode::parse, "coords/dist must be an array of rows");
  for (const auto& r : m) rows.push_back(numbers(r, "row"));
  return coords ? DiscreteSpace::from_coordinates(std::move(rows), w)
                : DiscreteSpace::from_distances(std::move(rows), w);
}

json to_json(const DiscreteSpace& s) {
  json j;
  json rows = json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    json r = json::array();
    if (s.embedded()) {
      for (double x : s.coords(i)) r.push_back(x);
    } else {
      for (std::size_t k = 0; k < s.size(); ++k) r.push_back(s.distance(i, k));
    }
    rows.push_back(r);
  }
  j[s.embedded() ? "coords" : "dist"] = rows;
  j["weights"] = s.weights();
  return j;
}

ModelSpec model_spec(const json& doc) {
  const json& j = unwrap(doc, "model");
  if (!j.is_object()) fail(ErrorCode::parse, "a model spec must be an object");
  const auto kind = field(j, "kind");
  if (!kind.is_string()) fail(ErrorCode::parse, "model kind must be a string");
  ModelSpec s;
  s.kind = model_kind_from_name(kind.get<std::string>());
  auto get = [&](const char* key, double& dst) {
    if (j.contains(key)) dst = number(j.at(key));
  };
  auto get_count = [&](const char* key, std::size_t& dst) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      fail(ErrorCode::parse, std::string(key) + " must be a non-negative integer");
    }
    dst = v.get<std::size_t>();
  };
  get("h", s.h);
  get("H", s.H);
  get("D", s.D);
  get("a", s.a);
  get("b", s.b);
  get("spacing", s.spacing);
  get_count("n_rows", s.n_rows);
  get_count("n_cols", s.n_cols);
  if (j.contains("omega_cut")) s.omega_cut = number(j.at("omega_cut"));
  return s;
}

json to_json(const ModelSpec& s) {
  json j;
  j["kind"] = model_kind_name(s.kind);
  switch (s.kind) {
    case ModelKind::log_linear:
      j["h"] = s.h;
      break;
    case ModelKind::truncated_exp:
      j["H"] = s.H;
      j["D"] = s.D;
      break;
    case ModelKind::tent:
      j["a"] = s.a;
      j["b"] = s.b;
      break;
    case ModelKind::product_strip:
      j["h"] = s.h;
      j["n_rows"] = s.n_rows;
      j["n_cols"] = s.n_cols;
      j["spacing"] = s.spacing;
      if (s.omega_cut) j["omega_cut"] = *s.omega_cut;
      break;
    case ModelKind::gaussian_like_tent:
      break;
  }
  return j;
}

}  // namespace json_io

PLConcave space_from_json(const std::string& text) { return json_io::space(json_io::parse(text)); }
std::string space_to_json(const PLConcave& space) { return json_io::to_json(space).dump(); }

IntervalSet interval_set_from_json(const std::string& text) {
  return json_io::interval_set(json_io::parse(text));
}
std::string interval_set_to_json(const IntervalSet& set) { return json_io::to_json(set).dump(); }

DiscreteSpace discrete_space_from_json(const std::string& text) {
  return json_io::discrete_space(json_io::parse(text));
}
std::string discrete_space_to_json(const DiscreteSpace& space) {
  return json_io::to_json(space).dump();
}

ModelSpec model_spec_from_json(const std::string& text) {
  return json_io::model_spec(json_io::parse(text));
}
std::string model_spec_to_json(const ModelSpec& spec) { return json_io::to_json(spec).dump(); }

Density1D density_from_json(const PLConcave& reference, const std::string& text, const char* key) {
  const auto doc = json_io::parse(text);
  const auto& j = json_io::unwrap(doc, key);
  if (!j.is_object() || !j.contains("edges") || !j.contains("rho")) {
    fail(ErrorCode::parse, "a density needs \"edges\" and \"rho\"");
  }
  std::vector<double> edges, rho;
  for (const auto& v : j.at("edges")) edges.push_back(json_io::number(v));
  for (const auto& v : j.at("rho")) rho.push_back(json_io::number(v));
  return Density1D::normalized(reference, std::move(edges), std::move(rho));
}

std::vector<bool> mask_from_json(const std::string& text, std::size_t n) {
  const auto doc = json_io::parse(text);
  const auto& j = json_io::unwrap(doc, "omega");
  std::vector<bool> mask(n, false);
  if (j.is_array()) {
    if (j.size() != n) fail(ErrorCode::parse, "mask must have one entry per point");
    for (std::size_t i = 0; i < n; ++i) {
      if (!j[i].is_boolean()) fail(ErrorCode::parse, "mask entries must be booleans");
      mask[i] = j[i].get<bool>();
    }
    return mask;
  }
  if (j.is_object() && j.contains("indices")) {
    for (const auto& v : j.at("indices")) {
      if (!v.is_number_integer()) fail(ErrorCode::parse, "mask indices must be integers");
      const auto k = v.get<long long>();
      if (k < 0 || static_cast<std::size_t>(k) >= n) fail(ErrorCode::parse, "mask index out of range");
      mask[static_cast<std::size_t>(k)] = true;
    }
    return mask;
  }
  fail(ErrorCode::parse, "mask must be a boolean array or {\"indices\": [...]}");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorCode::io, "write failed for " + path);
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream ss;
  ss.precision(17);
  ss << x;
  return ss.str();
}

}  // namespace needlekit
