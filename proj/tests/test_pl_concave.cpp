#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "needlekit/error.hpp"
#include "needlekit/pl_concave.hpp"

using namespace needlekit;
using Catch::Approx;

namespace {
const double inf = std::numeric_limits<double>::infinity();
}

TEST_CASE("concavity is validated") {
  CHECK_NOTHROW(PLConcave::create(-inf, inf, {0.0}, {0.0}, 1.0, -1.0));
  CHECK_THROWS_AS(PLConcave::create(-inf, inf, {0.0}, {0.0}, -1.0, 1.0), Error);
  CHECK_THROWS_AS(PLConcave::create(0, 3, {0, 1, 2}, {0, 1, 3}), Error);
  auto convex = PLConcave::create_unchecked(-2, 2, {-2, 0, 2}, {4, 0, 4});
  CHECK_FALSE(convex.is_concave());
}

TEST_CASE("layout errors") {
  CHECK_THROWS_AS(PLConcave::create(0, 1, {0.5, 0.2}, {0, 0}), Error);
  CHECK_THROWS_AS(PLConcave::create(0, 1, {0.0}, {0.0, 1.0}), Error);
  CHECK_THROWS_AS(PLConcave::create(1, 0, {0.5}, {0.0}), Error);
}

TEST_CASE("log density and tail slopes") {
  auto s = PLConcave::create(-inf, inf, {0.0, 1.0}, {0.0, 2.0}, 3.0, -1.0);
  CHECK(s.log_density(0.5) == Approx(1.0));
  CHECK(s.log_density(-1.0) == Approx(-3.0));
  CHECK(s.log_density(3.0) == Approx(0.0));
  CHECK(s.left_tail_slope() == 3.0);
  CHECK(s.right_tail_slope() == -1.0);
  CHECK(s.finite_mass());
}

TEST_CASE("log mass of a linear piece in closed form") {
  auto s = PLConcave::create(0, 10, {0.0, 10.0}, {0.0, -10.0});
  CHECK(std::exp(s.log_mass(0, 10)) == Approx(1 - std::exp(-10.0)).epsilon(1e-14));
  CHECK(std::exp(s.log_mass(9, 10)) == Approx(std::exp(-9.0) - std::exp(-10.0)).epsilon(1e-14));
  CHECK(s.log_mass(2, 2) == -inf);
}

TEST_CASE("log mass stays finite far out") {
  auto s = PLConcave::create(0, 1e5, {0.0, 1e5}, {-1e5, 0.0});
  const double lm = s.log_total_mass();
  CHECK(std::isfinite(lm));
  CHECK(lm == Approx(std::log1p(-std::exp(-1e5))).margin(1e-12));
}

TEST_CASE("point at mass inverts log mass") {
  auto s = PLConcave::create(-inf, inf, {0.0, 1.0}, {0.0, 0.5}, 1.0, -2.0);
  for (double target : {-3.0, -1.0, 0.0, 0.4}) {
    const double x = s.point_at_mass(-1.0, target);
    CHECK(s.log_mass(-1.0, x) == Approx(target).margin(1e-12));
  }
}

TEST_CASE("slope range reports one-sided slopes at breakpoints") {
  auto s = PLConcave::create(-inf, inf, {0.0}, {0.0}, 2.0, 1.0);
  auto [lo, hi] = s.slope_range(0.0, 0.0);
  CHECK(lo == 1.0);
  CHECK(hi == 2.0);
  auto [l2, h2] = s.slope_range(0.5, 3.0);
  CHECK(l2 == 1.0);
  CHECK(h2 == 1.0);
}

TEST_CASE("shift, translate and reflect") {
  auto s = PLConcave::create(-inf, 5, {0.0, 2.0}, {0.0, 1.0}, 2.0, -1.0);
  auto sh = s.shifted(3.0);
  CHECK(sh.log_mass(-1, 1) == Approx(s.log_mass(-1, 1) + 3.0));
  auto tr = s.translated(2.0);
  CHECK(tr.log_mass(1, 3) == Approx(s.log_mass(-1, 1)));
  auto rf = s.reflected();
  CHECK(rf.domain_lo() == -5.0);
  CHECK(rf.domain_hi() == inf);
  CHECK(rf.log_mass(-1, 1) == Approx(s.log_mass(-1, 1)));
  CHECK(rf.log_density(-1.5) == Approx(s.log_density(1.5)));
}
