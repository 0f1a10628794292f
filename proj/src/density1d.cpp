#include "needlekit/density1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "needlekit/error.hpp"
#include "needlekit/logspace.hpp"

namespace needlekit {

namespace {

constexpr double kLn2 = std::numbers::ln2;

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

struct HalfLineBest {
  double value = kInf;
  bool attained = false;
  double b = 0.0;
};

// Best Cheeger ratio over left half-lines (-inf, b] ∩ domain. The caller has
// checked that these have finite mass and that the right side has infinite
// mass, so the domain is unbounded on the right.
HalfLineBest best_left_half_line(const PLConcave& space) {
  constexpr double kFlat = 1e-12;
  HalfLineBest best;
  for (double t : space.breakpoints()) {
    if (!space.interior(t)) continue;
    const double r = std::exp(space.log_density(t) - space.log_mass(-kInf, t));
    if (r < best.value) best = {r, true, t};
  }
  const auto& tail = space.pieces().back();
  const double log_f = space.log_mass(-kInf, tail.lo);
  // s*F - e^W is constant on the tail; its sign fixes the monotonicity of the
  // ratio there, and the ratio tends to the tail slope s.
  const double s_over_r = log_f == -kInf ? 0.0 : tail.slope * std::exp(log_f - tail.anchor_value);
  if (s_over_r < 1.0 - kFlat) {
    const double limit = tail.slope;
    if (limit < best.value * (1.0 - kFlat)) best = {limit, false, 0.0};
  } else if (std::abs(s_over_r - 1.0) <= kFlat && tail.slope < best.value) {
    best = {tail.slope, true, tail.lo};
  }
  return best;
}

}  // namespace

double log_mass(const PLConcave& space, const IntervalSet& set) {
  double acc = -kInf;
  for (const auto& iv : set.clipped(space.domain_lo(), space.domain_hi())) {
    acc = log_add(acc, space.log_mass(iv.lo, iv.hi));
  }
  return acc;
}

std::optional<double> mass(const PLConcave& space, const IntervalSet& set) {
  const double lm = log_mass(space, set);
  if (lm == kInf) return std::nullopt;
  return std::exp(lm);
}

double log_minkowski_content(const PLConcave& space, const IntervalSet& set) {
  double acc = -kInf;
  for (const auto& iv : set.clipped(space.domain_lo(), space.domain_hi())) {
    if (space.interior(iv.lo)) acc = log_add(acc, space.log_density(iv.lo));
    if (space.interior(iv.hi)) acc = log_add(acc, space.log_density(iv.hi));
  }
  return acc;
}

double minkowski_content(const PLConcave& space, const IntervalSet& set) {
  return std::exp(log_minkowski_content(space, set));
}

double ball_log_mass(const PLConcave& space, double x0, double r) {
  return space.log_mass(x0 - r, x0 + r);
}

EntropyReport volume_entropy(const PLConcave& space, double x0,
                             std::optional<std::pair<double, double>> window, int samples) {
  require(space.contains(x0), "x0 must lie in the domain");
  require(samples >= 2, "need at least two window samples");
  EntropyReport rep;
  rep.h = std::max({space.right_tail_slope(), -space.left_tail_slope(), 0.0});
  if (window) {
    require(0.0 < window->first && window->first < window->second, "window must satisfy 0 < r1 < r2");
    rep.r1 = window->first;
    rep.r2 = window->second;
  } else {
    double spread = 0.0;
    for (double t : space.breakpoints()) spread = std::max(spread, std::abs(t - x0));
    rep.r1 = std::max(10.0, 2.0 * spread);
    rep.r2 = 2.0 * rep.r1;
  }
  std::vector<double> rs, ls;
  for (int k = 0; k < samples; ++k) {
    const double r = rep.r1 + (rep.r2 - rep.r1) * k / (samples - 1);
    rs.push_back(r);
    ls.push_back(ball_log_mass(space, x0, r));
  }
  rep.estimator_slope = lsq_slope(rs, ls);
  return rep;
}

CheckResult entropy_growth_inequality_check(const PLConcave& space, double x0, double r,
                                            double delta, double eps, double tol) {
  require(r > eps && eps > 0.0 && delta > 0.0, "need r > eps > 0 and delta > 0");
  require(space.contains(x0), "x0 must lie in the domain");
  const double lr = ball_log_mass(space, x0, r);
  const double le = ball_log_mass(space, x0, eps);
  const double lrd = ball_log_mass(space, x0, r + delta);
  if (!std::isfinite(lr) || !std::isfinite(le) || !std::isfinite(lrd)) {
    fail(ErrorCode::infinite_mass, "ball mass is not finite; choose finite radii inside the domain");
  }
  CheckResult out;
  out.lhs = lr;
  out.rhs = (delta + eps) / (r + delta) * le + (r - eps) / (r + delta) * lrd;
  out.holds = out.lhs >= out.rhs - tol * std::max(1.0, std::abs(out.rhs));
  return out;
}

double left_half_line_ratio(const PLConcave& space, double b) {
  require(space.contains(b), "b must lie in the domain");
  const double lf = space.log_mass(-kInf, b);
  if (lf == kInf) return kInf;
  if (!space.interior(b)) return b == space.domain_lo() ? kInf : 0.0;
  return std::exp(space.log_density(b) - lf);
}

CheegerResult cheeger_constant(const PLConcave& space) {
  if (space.finite_mass()) {
    fail(ErrorCode::finite_mass, "finite-mass space: use isoperimetric_profile");
  }
  const bool left_finite = space.domain_lo() > -kInf || space.left_slope() > 0.0;
  const bool right_finite = space.domain_hi() < kInf || space.right_slope() < 0.0;

  CheegerResult out;
  if (!left_finite && !right_finite) {
    // Both tails flat, so W is constant: long intervals drive the ratio to 0.
    out.mu = 0.0;
    out.attained = false;
    return out;
  }
  HalfLineBest left, right;
  if (left_finite) left = best_left_half_line(space);
  if (right_finite) {
    right = best_left_half_line(space.reflected());
    right.b = -right.b;
  }
  out.mu = std::min(left.value, right.value);
  IntervalSet minimizer;
  if (left.attained && left.value == out.mu) {
    minimizer = IntervalSet::left_half_line(left.b);
  } else if (right.attained && right.value == out.mu) {
    minimizer = IntervalSet::right_half_line(right.b);
  } else {
    return out;
  }
  out.attained = true;
  out.minimizer = minimizer.clipped(space.domain_lo(), space.domain_hi());
  return out;
}

double isoperimetric_profile(const PLConcave& space, double v, int interval_samples) {
  const double log_total = space.log_total_mass();
  if (log_total == kInf) fail(ErrorCode::infinite_mass, "isoperimetric profile needs a finite-mass space");
  require(v > 0.0 && std::log(v) < log_total, "volume must satisfy 0 < v < m(X)");
  const double lv = std::log(v);

  const double b = space.point_at_mass(space.domain_lo(), lv);
  double best = space.interior(b) ? std::exp(space.log_density(b)) : 0.0;
  const PLConcave mirror = space.reflected();
  const double a = -mirror.point_at_mass(mirror.domain_lo(), lv);
  if (space.interior(a)) best = std::min(best, std::exp(space.log_density(a)));

  // Single intervals [a, b] of mass v, parametrised by the mass left of a.
  const double log_rest = log_sub(log_total, lv);
  for (int k = 1; k < interval_samples; ++k) {
    const double left_mass = log_rest + std::log(static_cast<double>(k) / interval_samples);
    const double lo = space.point_at_mass(space.domain_lo(), left_mass);
    const double hi = space.point_at_mass(lo, lv);
    double value = 0.0;
    if (space.interior(lo)) value += std::exp(space.log_density(lo));
    if (space.interior(hi)) value += std::exp(space.log_density(hi));
    best = std::min(best, value);
  }
  return best;
}

double milman_profile(double diameter, double v) {
  require(diameter > 0.0, "diameter must be positive");
  require(v > 0.0 && v <= 0.5, "volume must lie in (0, 1/2]");
  // At v = 1/2 the objective exceeds 1 for every finite w.
  if (v == 0.5) return 1.0 / diameter;
  // In u = ln w: f(u) = (v + e^u) ln(1 + e^{-u}) and
  // f'(w) = ln(1 + 1/w) - (v + w) / (w (w + 1)).
  auto f = [v](double u) { return (v + std::exp(u)) * std::log1p(std::exp(-u)); };
  auto df = [v](double u) {
    const double w = std::exp(u);
    return std::log1p(1.0 / w) - (v + w) / (w * (w + 1.0));
  };
  double best = 1.0;  // w -> inf limit
  constexpr double kLo = -45.0, kHi = 45.0;
  constexpr int kGrid = 4000;
  double prev_u = kLo;
  double prev_d = df(prev_u);
  for (int k = 1; k <= kGrid; ++k) {
    const double u = kLo + (kHi - kLo) * k / kGrid;
    const double d = df(u);
    if (prev_d < 0.0 && d >= 0.0) {
      boost::uintmax_t iters = 200;
      auto root = boost::math::tools::toms748_solve(
          df, prev_u, u, prev_d, d, boost::math::tools::eps_tolerance<double>(52), iters);
      const double u_star = 0.5 * (root.first + root.second);
      best = std::min(best, f(u_star));
    }
    prev_u = u;
    prev_d = d;
  }
  return best / diameter;
}

CheckResult lemma_1dim_check(const PLConcave& space, const IntervalSet& omega, double h, double R) {
  if (!std::isfinite(space.domain_lo()) || !std::isfinite(space.domain_hi())) {
    fail(ErrorCode::precondition, "lemma_1dim_check: domain must be a bounded interval [0, D]");
  }
  const double D = space.domain_hi() - space.domain_lo();
  if (space.log_total_mass() < -kLn2) {
    fail(ErrorCode::precondition, "lemma_1dim_check: m([0,D]) >= 1/2 violated");
  }
  const double lv = log_mass(space, omega);
  if (!(h * R > 0.0)) fail(ErrorCode::precondition, "lemma_1dim_check: hR > 0 violated");
  if (!(-lv >= h * R)) fail(ErrorCode::precondition, "lemma_1dim_check: -ln m(Omega) >= hR violated");

  const double factor = (-kLn2 + h * R) / D;
  const double lc = log_minkowski_content(space, omega);
  CheckResult out;
  out.lhs = std::exp(lc);
  out.rhs = std::exp(lv) * factor;
  if (factor <= 0.0 || lv == -kInf) {
    out.holds = true;
  } else {
    const double log_rhs = lv + std::log(factor);
    out.holds = lc >= log_rhs - 1e-12 * std::max(1.0, std::abs(log_rhs));
  }
  return out;
}

QuantitativeRigidityReport evaluate_quantitative_rigidity(const PLConcave& space,
                                                          const IntervalSet& omega, double h,
                                                          double eps, double L, double R) {
  QuantitativeRigidityReport rep;
  rep.h = h;
  rep.eps = eps;
  rep.L = L;
  rep.R = R;
  auto& bad = rep.precondition_violations;
  const bool eps_ok = eps > 0.0 && eps < 1.0 / 128.0;
  if (!eps_ok) bad.emplace_back("eps in (0, 1/128)");
  if (!(h > 0.0)) bad.emplace_back("h > 0");
  if (!(L > 0.0)) bad.emplace_back("L > 0");
  const bool bounded = std::isfinite(space.domain_lo()) && std::isfinite(space.domain_hi());
  if (!bounded) bad.emplace_back("bounded domain [0, D]");
  const IntervalSet omega_in = omega.clipped(space.domain_lo(), space.domain_hi());
  if (omega_in.empty()) bad.emplace_back("Omega nonempty inside [0, D]");
  if (!eps_ok || !(h > 0.0) || !(L > 0.0) || !bounded || omega_in.empty()) return rep;

  const double lo = space.domain_lo();
  rep.D = space.domain_hi() - lo;
  if (space.log_total_mass() < -kLn2) bad.emplace_back("m([0,D]) >= 1/2");
  const double lv = log_mass(space, omega_in);
  if (!(lv <= -(1.0 - eps) * h * R)) bad.emplace_back("m(Omega) <= exp(-(1-eps) h R)");
  const double hbar = (-kLn2 + (1.0 - eps) * h * R) / rep.D;
  if (!(hbar > (1.0 - 2.0 * eps) * h)) bad.emplace_back("(-ln2 + (1-eps) h R)/D > (1-2eps) h");

  rep.b = omega_in.sup();
  const double b_rel = rep.b - lo;
  rep.width = -std::log(eps) / (28.0 * h);
  rep.window_lo = lo + std::min(b_rel, L) - rep.width;
  rep.window_hi = lo + rep.D / 10.0;
  rep.slope_lower_bound = (1.0 - 4.0 * eps) * h;
  rep.slope_upper_bound = (1.0 + 3.0 * std::sqrt(eps)) * h;

  const double wlo = std::max(rep.window_lo, space.domain_lo());
  const double whi = std::min(rep.window_hi, space.domain_hi());
  rep.window_empty = wlo > whi;
  if (!rep.window_empty) {
    std::tie(rep.slope_min, rep.slope_max) = space.slope_range(wlo, whi);
  }

  rep.log_content = log_minkowski_content(space, omega_in);
  rep.log_hypothesis_rhs = std::log1p(eps) + log_mass(space, omega_in.clipped(lo, lo + L)) + std::log(h);
  rep.hypothesis_holds = rep.log_content < rep.log_hypothesis_rhs;
  rep.width_ok = std::min(b_rel, L) >= rep.width;
  rep.slopes_ok = rep.window_empty ||
                  (rep.slope_min >= rep.slope_lower_bound && rep.slope_max <= rep.slope_upper_bound);
  rep.conclusion_holds = rep.width_ok && rep.slopes_ok;
  rep.verdict = !rep.hypothesis_holds || rep.conclusion_holds;
  return rep;
}

QuantitativeRigidityReport quantitative_rigidity_check(const PLConcave& space,
                                                       const IntervalSet& omega, double h,
                                                       double eps, double L, double R) {
  auto rep = evaluate_quantitative_rigidity(space, omega, h, eps, L, R);
  if (!rep.precondition_violations.empty()) {
    std::string msg = "quantitative_rigidity_check: violated preconditions:";
    for (const auto& v : rep.precondition_violations) msg += " [" + v + "]";
    fail(ErrorCode::precondition, msg);
  }
  return rep;
}

RigidityResult rigidity_1d(const PLConcave& space) {
  if (space.domain_lo() != -kInf || space.domain_hi() != kInf) {
    fail(ErrorCode::precondition, "rigidity_1d: domain must be the whole line");
  }
  if (!(space.right_slope() > 0.0)) {
    fail(ErrorCode::precondition, "rigidity_1d: right tail slope must be positive");
  }
  const auto c = cheeger_constant(space);
  RigidityResult out;
  out.rigid = c.attained;
  if (c.attained) out.b = c.minimizer->sup();
  const double h = space.right_slope();
  out.affine = std::all_of(space.pieces().begin(), space.pieces().end(), [h](const auto& p) {
    return std::abs(p.slope - h) <= 1e-12 * std::max(1.0, h);
  });
  return out;
}

NeighborhoodGrowthResult neighborhood_growth_check(const PLConcave& space,
                                                   const IntervalSet& omega, double sigma,
                                                   double tol) {
  require(sigma > 0.0, "sigma must be positive");
  const double h = volume_entropy(space, space.breakpoints().front()).h;
  const double lm = log_mass(space, omega);
  if (!(h > 0.0) || !std::isfinite(lm)) {
    fail(ErrorCode::precondition, "equality hypothesis fails: need h > 0 and 0 < m(Omega) < inf");
  }
  const double lc = log_minkowski_content(space, omega);
  if (std::abs(lc - lm - std::log(h)) > 1e-9) {
    fail(ErrorCode::precondition, "equality hypothesis fails: m+(Omega) != h m(Omega)");
  }
  const IntervalSet grown = omega.neighborhood(sigma).clipped(space.domain_lo(), space.domain_hi());
  const double lg = log_mass(space, grown);
  NeighborhoodGrowthResult out;
  out.mass_ratio = std::exp(lg - lm);
  out.expected_ratio = std::exp(sigma * h);
  out.content_ratio = std::exp(log_minkowski_content(space, grown) - lg);
  out.holds = std::abs(out.mass_ratio / out.expected_ratio - 1.0) <= tol &&
              std::abs(out.content_ratio / h - 1.0) <= tol;
  return out;
}

}  // namespace needlekit
