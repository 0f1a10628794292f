#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "needlekit/density1d.hpp"
#include "needlekit/error.hpp"
#include "needlekit/interpolate1d.hpp"
#include "needlekit/random_instances.hpp"

using namespace needlekit;
using Catch::Approx;

namespace {
const double inf = std::numeric_limits<double>::infinity();

PLConcave lebesgue() { return PLConcave::create(-inf, inf, {0.0}, {0.0}, 0.0, 0.0); }
}  // namespace

TEST_CASE("density normalization and cdf") {
  auto leb = lebesgue();
  auto d = Density1D::normalized(leb, {0, 1, 2}, {1, 3});
  CHECK(d.rho()[0] == Approx(0.25));
  CHECK(d.rho()[1] == Approx(0.75));
  CHECK(d.cdf(1.0) == Approx(0.25));
  CHECK(d.quantile(0.625) == Approx(1.5));
  CHECK_THROWS_AS(Density1D::create(leb, {0, 1}, {2.0}), Error);
  CHECK_THROWS_AS(Density1D::normalized(leb, {0, 1}, {-1.0}), Error);
}

TEST_CASE("quantile map examples") {
  auto leb = lebesgue();
  auto a = Density1D::uniform_on(leb, IntervalSet{{0, 1}});
  auto b = Density1D::uniform_on(leb, IntervalSet{{1, 2}});
  auto c = Density1D::uniform_on(leb, IntervalSet{{0, 2}});
  auto id = quantile_map(a, a, 1000);
  for (std::size_t j = 0; j < id.x.size(); ++j) CHECK(id.y[j] == Approx(id.x[j]).margin(1e-14));
  auto shift = quantile_map(a, b, 1000);
  for (std::size_t j = 0; j < shift.x.size(); ++j) CHECK(shift.y[j] == Approx(shift.x[j] + 1));
  auto dil = quantile_map(a, c, 1000);
  for (std::size_t j = 0; j < dil.x.size(); ++j) CHECK(dil.y[j] == Approx(2 * dil.x[j]));
  CHECK(dil(0.3) == Approx(0.6));
}

TEST_CASE("quantile map is monotone and inverts") {
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    auto rng = trial_rng(8, trial);
    auto space = random_space(rng);
    auto mu0 = random_density(space, rng);
    auto mu1 = random_density(space, rng);
    auto map = quantile_map(mu0, mu1, 2000);
    CHECK(std::is_sorted(map.y.begin(), map.y.end()));
    auto back = map.inverse();
    double err = 0.0;
    for (std::size_t j = 0; j < map.x.size(); ++j) err = std::max(err, std::abs(back(map.y[j]) - map.x[j]));
    INFO("trial " << trial);
    CHECK(err <= 1e-9 * std::max(1.0, std::abs(map.x.back() - map.x.front())));
  }
}

TEST_CASE("entropy examples") {
  auto leb = lebesgue();
  CHECK(entropy(Density1D::uniform_on(leb, IntervalSet{{0, std::exp(1.0)}})) == Approx(-1.0));
  CHECK(entropy(Density1D::uniform_on(leb, IntervalSet{{3, 4}})) == Approx(0.0).margin(1e-15));
  auto half = Density1D::create(leb, {0, 0.5, 1}, {2.0, 0.0});
  CHECK(entropy(half) == Approx(std::log(2.0)));
}

TEST_CASE("displacement convexity examples") {
  auto leb = lebesgue();
  auto a = Density1D::uniform_on(leb, IntervalSet{{0, 1}});
  auto b = Density1D::uniform_on(leb, IntervalSet{{1, 2}});
  auto c = Density1D::uniform_on(leb, IntervalSet{{0, 2}});
  auto r1 = displacement_convexity_check(leb, a, b);
  CHECK(std::abs(r1.max_violation) <= 1e-12);
  auto r2 = displacement_convexity_check(leb, a, c);
  CHECK(r2.max_violation <= 1e-12);
  for (const auto& row : r2.rows) {
    CHECK(row.entropy == Approx(-std::log(1 + row.t)).margin(1e-9));
    CHECK(row.bound == Approx(-row.t * std::log(2.0)).margin(1e-9));
  }
  CHECK(r2.max_mass_error <= 1e-9);
}

TEST_CASE("interpolant conserves mass") {
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    auto rng = trial_rng(9, trial);
    auto space = random_space(rng);
    auto mu0 = random_density(space, rng);
    auto mu1 = random_density(space, rng);
    auto map = quantile_map(mu0, mu1, 4000);
    for (double t : {0.0, 0.3, 0.7, 1.0}) {
      CHECK(std::abs(interpolate(map, mu0, mu1, t).total_mass - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("convex reference is caught by the convexity check") {
  auto convex = PLConcave::create_unchecked(-2, 2, {-2, 0, 2}, {4, 0, 4});
  auto a = Density1D::uniform_on(convex, IntervalSet{{-2, -1}});
  auto b = Density1D::uniform_on(convex, IntervalSet{{1, 2}});
  auto rep = displacement_convexity_check(convex, a, b);
  CHECK(rep.max_violation > 1e-3);
}

TEST_CASE("intermediate set examples") {
  IntervalSet unit{{0, 1}};
  for (double t : {0.0, 0.3, 1.0}) CHECK(intermediate_set(unit, unit, t) == unit);
  auto z = intermediate_set(unit, IntervalSet{{2, 3}}, 0.5);
  CHECK(z == IntervalSet{{1, 2}});
  auto z2 = intermediate_set(IntervalSet{{0, 1}, {10, 11}}, unit, 0.5);
  CHECK(z2 == IntervalSet{{0, 1}, {5, 6}});
}

TEST_CASE("brunn minkowski examples") {
  auto leb = PLConcave::create(-inf, inf, {0.0}, {0.0}, 0.0, 0.0);
  auto r = brunn_minkowski_check(leb, IntervalSet{{0, 1}}, IntervalSet{{2, 4}}, {0.5});
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].lhs == Approx(std::log(1.5)));
  CHECK(r.rows[0].rhs == Approx(0.5 * std::log(2.0)));
  CHECK(r.holds);
  auto w = PLConcave::create(-inf, inf, {0.0}, {0.0}, 1.0, -2.0);
  IntervalSet s{{-1, 0.5}};
  auto eq = brunn_minkowski_check(w, s, s);
  for (const auto& row : eq.rows) CHECK(row.violation == Approx(0.0).margin(1e-14));
  auto ends = brunn_minkowski_check(w, IntervalSet{{-1, 0}}, IntervalSet{{1, 3}}, {0.0, 1.0});
  for (const auto& row : ends.rows) CHECK(row.violation == 0.0);
}
