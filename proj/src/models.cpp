#include "needlekit/models.hpp"

#include <cmath>
#include <limits>

#include "needlekit/error.hpp"

namespace needlekit {

namespace {
constexpr double kInfD = std::numeric_limits<double>::infinity();
}

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::log_linear: return "log_linear";
    case ModelKind::truncated_exp: return "truncated_exp";
    case ModelKind::tent: return "tent";
    case ModelKind::product_strip: return "product_strip";
    case ModelKind::gaussian_like_tent: return "gaussian_like_tent";
  }
  return "?";
}

ModelKind model_kind_from_name(const std::string& name) {
  for (auto k : {ModelKind::log_linear, ModelKind::truncated_exp, ModelKind::tent,
                 ModelKind::product_strip, ModelKind::gaussian_like_tent}) {
    if (name == model_kind_name(k)) return k;
  }
  fail(ErrorCode::invalid_argument, "unknown model kind: " + name);
}

ModelSpec log_linear_spec(double h) {
  ModelSpec s;
  s.kind = ModelKind::log_linear;
  s.h = h;
  return s;
}

ModelSpec truncated_exp_spec(double H, double D) {
  ModelSpec s;
  s.kind = ModelKind::truncated_exp;
  s.H = H;
  s.D = D;
  return s;
}

ModelSpec tent_spec(double a, double b) {
  ModelSpec s;
  s.kind = ModelKind::tent;
  s.a = a;
  s.b = b;
  return s;
}

ModelSpec gaussian_like_tent_spec() {
  ModelSpec s;
  s.kind = ModelKind::gaussian_like_tent;
  return s;
}

ModelSpec product_strip_spec(double h, std::size_t n_rows, std::size_t n_cols, double spacing) {
  ModelSpec s;
  s.kind = ModelKind::product_strip;
  s.h = h;
  s.n_rows = n_rows;
  s.n_cols = n_cols;
  s.spacing = spacing;
  return s;
}

PLConcave build_1d(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::log_linear:
      require(spec.h > 0.0, "log_linear needs h > 0");
      return PLConcave::create(-kInfD, kInfD, {0.0}, {0.0}, spec.h, spec.h);
    case ModelKind::truncated_exp:
      require(spec.D > 0.0, "truncated_exp needs D > 0");
      require(std::isfinite(spec.H), "truncated_exp needs a finite H");
      return PLConcave::create(0.0, spec.D, {0.0, spec.D}, {0.0, spec.H * spec.D});
    case ModelKind::tent:
      require(spec.a > 0.0 && spec.b > 0.0, "tent needs a > 0 and b > 0");
      return PLConcave::create(-kInfD, kInfD, {0.0}, {0.0}, spec.a, -spec.b);
    case ModelKind::gaussian_like_tent: {
      // -t^2/2 sampled at the integers in [-3, 3].
      std::vector<double> t, w;
      for (int k = -3; k <= 3; ++k) {
        t.push_back(k);
        w.push_back(-0.5 * k * k);
      }
      return PLConcave::create(-kInfD, kInfD, t, w, 3.5, -3.5);
    }
    case ModelKind::product_strip:
      break;
  }
  fail(ErrorCode::invalid_argument, "build_1d needs a one-dimensional model kind");
}

ModelTruth model_truth(const ModelSpec& spec) {
  ModelTruth t;
  switch (spec.kind) {
    case ModelKind::log_linear:
      t.h = spec.h;
      t.cheeger = spec.h;
      break;
    case ModelKind::truncated_exp:
    case ModelKind::tent:
    case ModelKind::gaussian_like_tent:
      t.finite_mass = true;
      break;
    case ModelKind::product_strip:
      t.h = spec.h;
      break;
  }
  return t;
}

StripModel build_strip(const ModelSpec& spec) {
  require(spec.kind == ModelKind::product_strip, "build_strip needs a product_strip model");
  require(spec.h > 0.0, "product_strip needs h > 0");
  require(spec.n_rows >= 2 && spec.n_cols >= 2, "product_strip needs at least 2 rows and 2 columns");
  require(spec.spacing > 0.0, "product_strip needs spacing > 0");
  const double extent = spec.spacing * static_cast<double>(spec.n_cols - 1);
  if (spec.h * extent > 700.0) {
    fail(ErrorCode::invalid_argument,
         "product_strip weights overflow (h * extent > 700); rescale h or spacing");
  }

  StripModel m;
  m.n_rows = spec.n_rows;
  m.n_cols = spec.n_cols;
  m.spacing = spec.spacing;
  m.h = spec.h;
  m.cut = spec.omega_cut.value_or(0.5 * extent);
  require(m.cut >= 0.0 && m.cut < extent, "omega_cut must lie inside the strip");

  std::vector<std::vector<double>> coords;
  std::vector<double> weights;
  m.rows.resize(spec.n_rows);
  for (std::size_t j = 0; j < spec.n_rows; ++j) {
    for (std::size_t i = 0; i < spec.n_cols; ++i) {
      const double x = static_cast<double>(i) * spec.spacing;
      m.rows[j].push_back(coords.size());
      coords.push_back({x, static_cast<double>(j)});
      weights.push_back(spec.spacing * std::exp(spec.h * x));
      const bool in = x <= m.cut;
      m.omega.push_back(in);
      if (in) m.omega_mass += weights.back();
    }
  }
  m.space = DiscreteSpace::from_coordinates(std::move(coords), std::move(weights));

  const double rows = static_cast<double>(spec.n_rows);
  m.omega_mass_closed = rows * std::expm1(spec.h * m.cut) / spec.h;
  m.e_discrete = std::log(spec.h * m.omega_mass / rows) / spec.h;

  // Centre on the middle row at the boundary column.
  const std::size_t col = static_cast<std::size_t>(std::floor(m.cut / spec.spacing));
  m.center = m.rows[spec.n_rows / 2][col];
  double far = 0.0;
  for (std::size_t p = 0; p < m.space.size(); ++p) far = std::max(far, m.space.distance(m.center, p));
  m.radius = far + 1.0;
  return m;
}

std::vector<bool> wedge_mask(const StripModel& strip, double tilt) {
  std::vector<bool> mask(strip.space.size());
  const double mid = 0.5 * static_cast<double>(strip.n_rows - 1);
  for (std::size_t p = 0; p < strip.space.size(); ++p) {
    const auto c = strip.space.coords(p);
    mask[p] = c[0] <= strip.cut + tilt * (c[1] - mid);
  }
  return mask;
}

}  // namespace needlekit
