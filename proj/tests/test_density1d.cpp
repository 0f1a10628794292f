#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "needlekit/density1d.hpp"
#include "needlekit/error.hpp"
#include "needlekit/random_instances.hpp"

using namespace needlekit;
using Catch::Approx;

namespace {
const double inf = std::numeric_limits<double>::infinity();

PLConcave affine(double h) { return PLConcave::create(-inf, inf, {0.0}, {0.0}, h, h); }
PLConcave flat(double lo, double hi) { return PLConcave::create(lo, hi, {lo}, {0.0}, 0.0, 0.0); }

double total(std::optional<double> m) { return m ? *m : inf; }
}  // namespace

TEST_CASE("mass examples") {
  auto w1 = affine(1.0);
  CHECK(total(mass(w1, IntervalSet::left_half_line(0))) == Approx(1.0).epsilon(1e-15));
  CHECK(total(mass(flat(0, 1), IntervalSet{{0, 1}})) == Approx(1.0).epsilon(1e-15));
  auto w2 = affine(2.0);
  CHECK(total(mass(w2, IntervalSet::left_half_line(std::log(2.0) / 2))) ==
        Approx(1.0).epsilon(1e-15));
  CHECK_FALSE(mass(w1, IntervalSet::right_half_line(0)).has_value());
  CHECK(log_mass(w1, IntervalSet::right_half_line(0)) == inf);
  CHECK(total(mass(w1, IntervalSet{})) == 0.0);
}

TEST_CASE("minkowski content examples") {
  CHECK(minkowski_content(affine(1.0), IntervalSet::left_half_line(0)) == Approx(1.0));
  CHECK(minkowski_content(flat(-1, 2), IntervalSet{{0, 1}}) == Approx(2.0));
  CHECK(minkowski_content(flat(0, 2), IntervalSet{{0, 1}}) == Approx(1.0));
}

TEST_CASE("minkowski content matches finite differences") {
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    auto rng = trial_rng(11, trial);
    auto space = random_space(rng);
    auto set = random_finite_set(space, rng);
    const double content = minkowski_content(space, set);
    const double m0 = total(mass(space, set));
    // Richardson extrapolation over the ladder eps, eps/2.
    double prev = inf, err = inf;
    for (double eps : {1e-3, 5e-4, 2.5e-4}) {
      const double q = (total(mass(space, set.neighborhood(eps))) - m0) / eps;
      if (std::isfinite(prev)) err = std::abs(2 * q - prev - content);
      prev = q;
    }
    INFO("trial " << trial);
    CHECK(err <= 1e-5 * std::max(1.0, content));
  }
}

TEST_CASE("volume entropy examples") {
  CHECK(volume_entropy(affine(2.0), 0.0).h == 2.0);
  auto tent = PLConcave::create(-inf, inf, {0.0}, {0.0}, 1.0, -1.0);
  CHECK(volume_entropy(tent, 0.0).h == 0.0);
  auto tails = PLConcave::create(-inf, inf, {0.0}, {0.0}, 5.0, 3.0);
  auto rep = volume_entropy(tails, 0.0);
  CHECK(rep.h == 3.0);
  CHECK(rep.estimator_slope == Approx(3.0).margin(0.05));
  CHECK(volume_entropy(flat(0, 1), 0.5).h == 0.0);
}

TEST_CASE("entropy growth inequality examples") {
  auto zero = PLConcave::create(-inf, inf, {0.0}, {0.0}, 0.0, 0.0);
  CHECK(entropy_growth_inequality_check(zero, 0.0, 3.0, 1.0, 0.5).holds);
  CHECK(entropy_growth_inequality_check(affine(1.0), 0.0, 10.0, 1.0, 0.1).holds);
  CHECK_THROWS_AS(entropy_growth_inequality_check(affine(1.0), 0.0, 0.05, 1.0, 0.1), Error);
}

TEST_CASE("cheeger constant examples") {
  auto c1 = cheeger_constant(affine(1.0));
  CHECK(c1.mu == Approx(1.0).epsilon(1e-12));
  CHECK(c1.attained);
  REQUIRE(c1.minimizer);
  CHECK(c1.minimizer->inf() == -inf);

  auto c2 = cheeger_constant(affine(2.0));
  CHECK(c2.mu == Approx(2.0).epsilon(1e-12));
  CHECK(c2.mu == Approx(volume_entropy(affine(2.0), 0).h).epsilon(1e-12));

  auto kink = PLConcave::create(-inf, inf, {0.0}, {0.0}, 3.0, 2.0);
  auto c3 = cheeger_constant(kink);
  CHECK(c3.mu == Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(c3.attained);
  // Cutoff scan: the half-line ratio decreases toward the tail slope.
  double last = inf;
  for (double b = 0.0; b <= 40.0; b += 4.0) {
    const double r = left_half_line_ratio(kink, b);
    CHECK(r > 2.0);
    CHECK(r <= last);
    last = r;
  }
  CHECK(last - 2.0 < 1e-9);

  auto finite = PLConcave::create(-inf, inf, {0.0}, {0.0}, 1.0, -1.0);
  CHECK_THROWS_AS(cheeger_constant(finite), Error);
}

TEST_CASE("cheeger constant equals volume entropy on random infinite-mass spaces") {
  for (std::uint64_t trial = 0; trial < 300; ++trial) {
    auto rng = trial_rng(5, trial);
    auto space = random_space(rng, SpaceShape::infinite_mass);
    const double h =
        volume_entropy(space, std::clamp(0.0, space.domain_lo(), space.domain_hi())).h;
    if (h == 0.0) continue;
    INFO("trial " << trial);
    CHECK(cheeger_constant(space).mu == Approx(h).epsilon(1e-9));
  }
}

TEST_CASE("bounded intervals never beat the best half-line") {
  for (std::uint64_t trial = 0; trial < 300; ++trial) {
    auto rng = trial_rng(6, trial);
    auto space = random_space(rng, SpaceShape::infinite_mass);
    const double mu = cheeger_constant(space).mu;
    auto set = random_bounded_set(space, rng);
    const double ratio = minkowski_content(space, set) / *mass(space, set);
    INFO("trial " << trial);
    CHECK(ratio >= mu * (1 - 1e-9));
  }
}

TEST_CASE("isoperimetric profile examples") {
  auto u = flat(0, 1);
  CHECK(isoperimetric_profile(u, 0.5) == Approx(1.0).epsilon(1e-12));
  CHECK(isoperimetric_profile(u, 0.25) == Approx(1.0).epsilon(1e-12));

  auto lin = PLConcave::create(0, 1, {0.0, 1.0}, {0.0, 1.0});
  const double v = 0.3;
  // Left placement [0, b]: e^b - 1 = v; right placement [c, 1]: e - e^c = v.
  const double left = 1 + v, right = std::exp(1.0) - v;
  CHECK(isoperimetric_profile(lin, v) == Approx(std::min(left, right)).epsilon(1e-12));
  CHECK_THROWS_AS(isoperimetric_profile(affine(1.0), 0.5), Error);
}

TEST_CASE("milman profile examples") {
  CHECK(milman_profile(1.0, 0.5) == 1.0);
  CHECK(milman_profile(1.0, 0.1) == Approx(0.45597785602729).epsilon(1e-10));
  CHECK(milman_profile(1.0, 1e-8) < 1e-6);
  CHECK(milman_profile(2.0, 0.1) == Approx(0.45597785602729 / 2).epsilon(1e-10));
  CHECK_THROWS_AS(milman_profile(1.0, 0.7), Error);
  CHECK_THROWS_AS(milman_profile(-1.0, 0.1), Error);
}

TEST_CASE("lemma 4.1 closed-form example") {
  auto s = PLConcave::create(0, 10, {0.0, 10.0}, {0.0, -10.0});
  auto r = lemma_1dim_check(s, IntervalSet{{9, 10}}, 0.9, 10.0);
  CHECK(r.lhs == Approx(std::exp(-9.0)).epsilon(1e-12));
  const double m_omega = std::exp(-9.0) - std::exp(-10.0);
  CHECK(r.rhs == Approx(m_omega * (9.0 - std::log(2.0)) / 10.0).epsilon(1e-12));
  CHECK(r.lhs == Approx(1.2341e-4).epsilon(1e-4));
  CHECK(r.rhs == Approx(6.480e-5).epsilon(1e-3));
  CHECK(r.holds);
}

TEST_CASE("lemma 4.1 uniform example and preconditions") {
  auto u = flat(0, 1);
  const double a = 1 - std::exp(-2.0);
  CHECK(lemma_1dim_check(u, IntervalSet{{a, 1}}, 1.9, 1.0).holds);
  CHECK_THROWS_AS(lemma_1dim_check(u, IntervalSet{{0.5, 1}}, 1.9, 1.0), Error);
  CHECK_THROWS_AS(lemma_1dim_check(affine(1.0), IntervalSet{{0, 1}}, 0.1, 1.0), Error);
}

TEST_CASE("quantitative rigidity on the exact model") {
  const double h = 1.0, D = 2e4, eps = 1e-3;
  auto s = PLConcave::create(0, D, {0.0, D}, {-h * D, 0.0});
  // Shift so the total mass is one.
  auto unit = s.shifted(-s.log_total_mass());
  auto rep = evaluate_quantitative_rigidity(unit, IntervalSet{{0, 20}}, h, eps, 20, 30);
  CHECK(rep.slope_min == Approx(h));
  CHECK(rep.slope_max == Approx(h));
  CHECK(rep.slopes_ok);
  CHECK(rep.verdict);
}

TEST_CASE("rigidity examples") {
  auto r1 = rigidity_1d(affine(1.0));
  CHECK(r1.rigid);
  CHECK(r1.affine);
  CHECK(rigidity_1d(affine(3.0)).rigid);
  auto kink = PLConcave::create(-inf, inf, {0.0, 1.0}, {0.0, 3.0}, 4.0, 1.0);
  CHECK_FALSE(rigidity_1d(kink).rigid);
}

TEST_CASE("neighborhood growth examples") {
  auto w1 = affine(1.0);
  auto g1 = neighborhood_growth_check(w1, IntervalSet::left_half_line(0), 1.0);
  CHECK(g1.holds);
  CHECK(g1.mass_ratio == Approx(std::exp(1.0)).epsilon(1e-12));
  auto g2 = neighborhood_growth_check(w1, IntervalSet::left_half_line(0), std::log(5.0));
  CHECK(g2.mass_ratio == Approx(5.0).epsilon(1e-12));
  auto g3 = neighborhood_growth_check(affine(2.0), IntervalSet::left_half_line(0), 0.5);
  CHECK(g3.mass_ratio == Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(neighborhood_growth_check(w1, IntervalSet{{0, 1}}, 1.0), Error);
}

TEST_CASE("scaling and translation invariance") {
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    auto rng = trial_rng(21, trial);
    auto space = random_space(rng);
    auto set = random_finite_set(space, rng);
    const double c = std::uniform_real_distribution<double>(-3, 3)(rng);
    const double tau = std::uniform_real_distribution<double>(-5, 5)(rng);
    auto shifted = space.shifted(c);
    CHECK(log_mass(shifted, set) == Approx(log_mass(space, set) + c).epsilon(1e-12));
    CHECK(log_minkowski_content(shifted, set) ==
          Approx(log_minkowski_content(space, set) + c).margin(1e-12));
    const double x0 = std::clamp(0.0, space.domain_lo(), space.domain_hi());
    CHECK(volume_entropy(shifted, x0).h == volume_entropy(space, x0).h);
    auto moved = space.translated(tau);
    CHECK(log_mass(moved, set.translated(tau)) == Approx(log_mass(space, set)).margin(1e-10));
    CHECK(log_minkowski_content(moved, set.translated(tau)) ==
          Approx(log_minkowski_content(space, set)).margin(1e-10));
  }
}
