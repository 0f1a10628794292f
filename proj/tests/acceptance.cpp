#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>

#include "needlekit/density1d.hpp"
#include "needlekit/interpolate1d.hpp"
#include "needlekit/localize.hpp"
#include "needlekit/models.hpp"
#include "needlekit/random_instances.hpp"
#include "needlekit/suites.hpp"
#include "oracles.hpp"

using namespace needlekit;

namespace {

const double inf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

Outcome sharpness() {
  bool ok = true;
  double worst = 0.0;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> ub(-5.0, 5.0);
  for (double h : {0.5, 1.0, 2.0}) {
    auto s = build_1d(log_linear_spec(h));
    auto c = cheeger_constant(s);
    const double ent = volume_entropy(s, 0.0).h;
    worst = std::max({worst, std::abs(c.mu - h), std::abs(ent - h)});
    ok = ok && c.attained && c.minimizer && c.minimizer->size() == 1 &&
         c.minimizer->inf() == -inf && std::isfinite(c.minimizer->sup());
    for (int k = 0; k < 10; ++k) {
      auto half = IntervalSet::left_half_line(ub(rng));
      const double content = minkowski_content(s, half);
      const double m = *mass(s, half);
      ok = ok && close_rel(content, h * m, 1e-12);
    }
  }
  ok = ok && worst <= 1e-9;
  return {ok, fmt("max |mu - h|, |h_ent - h| = %.3g", worst)};
}

Outcome suite_clean(SuiteResult (*run)(const SuiteOptions&), std::size_t trials, double tol) {
  SuiteOptions opt;
  opt.seed = 20261017;
  opt.trials = trials;
  opt.tol = tol;
  auto r = run(opt);
  return {r.violations == 0 && r.trials == trials,
          fmt("%zu trials, %zu violations, worst %.3g", r.trials, r.violations, r.worst)};
}

Outcome lemma41() {
  auto suite = suite_clean(verify_lemma41, 1000, 1e-9);
  auto s = PLConcave::create(0, 10, {0.0, 10.0}, {0.0, -10.0});
  auto r = lemma_1dim_check(s, IntervalSet{{9, 10}}, 0.9, 10.0);
  const bool golden = close_rel(r.lhs, 1.2341e-4, 1e-4) && close_rel(r.rhs, 6.480e-5, 1e-3) && r.holds;
  return {suite.pass && golden,
          suite.detail + fmt("; example lhs %.5g >= rhs %.5g", r.lhs, r.rhs)};
}

Outcome lemma42() {
  bool ok = true;
  std::size_t n = 0, contra = 0;
  for (double eps : {1e-3, 1e-4}) {
    for (const auto& inst : lemma42_instances(eps)) {
      auto rep = evaluate_quantitative_rigidity(inst.space, inst.omega, inst.h, inst.eps, inst.L,
                                                inst.R);
      ++n;
      ok = ok && rep.precondition_violations.empty();
      if (inst.expect_hypothesis) {
        ok = ok && rep.hypothesis_holds && !rep.window_empty &&
             rep.slope_min >= (1 - 4 * eps) * inst.h &&
             rep.slope_max <= (1 + 3 * std::sqrt(eps)) * inst.h;
      } else {
        ++contra;
        ok = ok && !rep.hypothesis_holds;
      }
    }
  }
  return {ok && contra == 2, fmt("%zu instances, %zu contrapositive", n, contra)};
}

Outcome rigidity() {
  bool ok = true;
  for (double h : {0.5, 1.0, 3.0}) {
    auto r = rigidity_1d(build_1d(log_linear_spec(h)));
    ok = ok && r.rigid;
  }
  auto suite = suite_clean(verify_rigidity, 100, 1e-9);
  return {ok && suite.pass, "affine rigid; " + suite.detail};
}

Outcome growth_equality() {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> uh(0.2, 3.0), ub(-4.0, 4.0), us(0.01, 3.0);
  double worst = 0.0;
  bool ok = true;
  for (int k = 0; k < 20; ++k) {
    const double h = uh(rng), sigma = us(rng);
    auto s = build_1d(log_linear_spec(h));
    auto omega = IntervalSet::left_half_line(ub(rng));
    const double m0 = *mass(s, omega), m1 = *mass(s, omega.neighborhood(sigma));
    const double rel = std::abs(m1 / (m0 * std::exp(sigma * h)) - 1.0);
    worst = std::max(worst, rel);
    ok = ok && neighborhood_growth_check(s, omega, sigma).holds;
  }
  return {ok && worst <= 1e-12, fmt("20 pairs, max relative error %.3g", worst)};
}

Outcome convexity() {
  SuiteOptions opt;
  opt.seed = 20261017;
  opt.trials = 500;
  opt.tol = 1e-6;
  opt.quantiles = 10000;
  auto c = verify_convexity(opt);
  auto b = verify_brunn_minkowski(opt);
  auto convex = PLConcave::create_unchecked(-2, 2, {-2, 0, 2}, {4, 0, 4});
  auto neg = displacement_convexity_check(convex, Density1D::uniform_on(convex, IntervalSet{{-2, -1}}),
                                          Density1D::uniform_on(convex, IntervalSet{{1, 2}}));
  const bool ok = c.violations == 0 && b.violations == 0 && neg.max_violation > 1e-3;
  return {ok, fmt("convexity worst %.3g, BM worst %.3g, negative control %.3g", c.worst, b.worst,
                  neg.max_violation)};
}

Outcome localization_oracle() {
  double cost_err = 0.0, lip = 0.0, slack = 0.0;
  for (std::uint64_t trial = 0; trial < 500; ++trial) {
    auto rng = trial_rng(909, trial);
    auto inst = random_small_transport(rng, 8);
    auto sol = solve_l1(inst.space, inst.g);
    const double lp = oracle::transport_lp(inst.space, inst.g);
    cost_err = std::max(cost_err, std::abs(sol.total_cost - lp));
    auto chk = check_transport(inst.space, sol);
    lip = std::max(lip, chk.max_lipschitz_excess);
    slack = std::max(slack, chk.max_slackness_gap);
  }
  return {cost_err <= 1e-9 && lip <= 1e-9 && slack <= 1e-9,
          fmt("500 trials, cost error %.3g, Lipschitz excess %.3g, slackness %.3g", cost_err, lip,
              slack)};
}

Outcome splitting() {
  auto strip = build_strip(product_strip_spec(1.0, 10, 200, 0.05));
  auto loc = localize(strip.space, strip.omega, strip.center, strip.radius);
  const auto& needles = loc.needles.needles;
  std::vector<std::vector<std::size_t>> rows = strip.rows;
  for (auto& r : rows) std::sort(r.begin(), r.end());
  std::size_t exact = 0;
  double balance = 0.0, slope_dev = 0.0;
  for (const auto& nd : needles) {
    auto pts = nd.points;
    std::sort(pts.begin(), pts.end());
    if (std::find(rows.begin(), rows.end(), pts) != rows.end()) ++exact;
    if (!nd.boundary) balance = std::max(balance, std::abs(needle_diagnostics(nd).balance));
    slope_dev = std::max(slope_dev, std::abs(nd.slope_fit - strip.h) / strip.h);
  }
  auto verdict = splitting_detector(needles, 0.05, 1e-6);

  auto wedge = localize(strip.space, wedge_mask(strip, 0.05), strip.center, strip.radius);
  auto control = splitting_detector(wedge.needles.needles, 0.05, 1e-6);

  const bool ok = !needles.empty() && exact * 100 >= 95 * needles.size() && balance <= 1e-8 &&
                  slope_dev <= 0.05 && verdict.splits && !control.splits;
  return {ok, fmt("%zu/%zu exact rows, balance %.3g, slope deviation %.3g, splits=%d, wedge "
                  "splits=%d",
                  exact, needles.size(), balance, slope_dev, verdict.splits, control.splits)};
}

Outcome milman() {
  std::mt19937_64 rng(1111);
  std::uniform_real_distribution<double> ud(0.2, 10.0), uv(1e-3, 0.5);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double D = ud(rng), v = uv(rng);
    worst = std::max(worst, std::abs(milman_profile(D, v) - oracle::milman_grid(D, v)));
  }
  const double limit = milman_profile(1.0, 0.5);
  return {worst <= 1e-8 && limit == 1.0,
          fmt("100 pairs, max deviation %.3g, I(0.5, D=1) = %.17g", worst, limit)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "sharpness on log_linear", 1.0, sharpness},
      {2, "isoperimetric inequality", 30.0,
       [] { return suite_clean(verify_isoperimetric, 10000, 1e-9); }},
      {3, "lemma 4.1", 0.0, lemma41},
      {4, "lemma 4.2 almost-linearity", 10.0, lemma42},
      {5, "rigidity", 1.0, rigidity},
      {6, "neighborhood growth", 0.0, growth_equality},
      {7, "displacement convexity and Brunn-Minkowski", 60.0, convexity},
      {8, "ball growth inequality", 0.0, [] { return suite_clean(verify_growth, 1000, 1e-9); }},
      {9, "localization vs exhaustive LP", 0.0, localization_oracle},
      {10, "splitting on the product strip", 120.0, splitting},
      {11, "milman profile", 0.0, milman},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.budget <= 0.0 || secs < c.budget;
    const bool pass = out.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s criterion %d (%s): %s [%.2f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str(), secs, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
