#include <catch_amalgamated.hpp>

#include <limits>

#include "needlekit/error.hpp"
#include "needlekit/interpolate1d.hpp"
#include "needlekit/interval_set.hpp"

using namespace needlekit;
using Catch::Approx;

namespace {
const double inf = std::numeric_limits<double>::infinity();
}

TEST_CASE("construction merges and sorts") {
  IntervalSet s{{3, 4}, {0, 1}, {0.5, 2}, {5, 5}};
  REQUIRE(s.size() == 2);
  CHECK(s.intervals()[0] == Interval{0, 2});
  CHECK(s.intervals()[1] == Interval{3, 4});
  IntervalSet touching{{0, 1}, {1, 2}};
  REQUIRE(touching.size() == 1);
  CHECK(touching.intervals()[0] == Interval{0, 2});
}

TEST_CASE("half lines and bounds") {
  auto l = IntervalSet::left_half_line(2.0);
  CHECK(l.inf() == -inf);
  CHECK(l.sup() == 2.0);
  CHECK(l.contains(-1e300));
  CHECK_FALSE(l.contains(2.5));
  auto r = IntervalSet::right_half_line(-1.0);
  CHECK(r.inf() == -1.0);
  CHECK(r.sup() == inf);
}

TEST_CASE("neighborhood merges close intervals") {
  IntervalSet s{{0, 1}, {1.5, 2}};
  auto n = s.neighborhood(0.25);
  REQUIRE(n.size() == 1);
  CHECK(n.intervals()[0] == Interval{-0.25, 2.25});
  auto n2 = s.neighborhood(0.1);
  REQUIRE(n2.size() == 2);
  CHECK(n2.intervals()[1].lo == Approx(1.4));
}

TEST_CASE("clip, translate, reflect") {
  IntervalSet s{{-2, -1}, {1, 3}};
  auto c = s.clipped(-1.5, 2);
  REQUIRE(c.size() == 2);
  CHECK(c.intervals()[0] == Interval{-1.5, -1});
  CHECK(c.intervals()[1] == Interval{1, 2});
  auto t = s.translated(1.0);
  CHECK(t.intervals()[0] == Interval{-1, 0});
  auto r = s.reflected();
  CHECK(r.intervals()[0] == Interval{-3, -1});
  CHECK(r.intervals()[1] == Interval{1, 2});
}

TEST_CASE("invalid intervals are rejected") {
  CHECK_THROWS_AS(IntervalSet({{1, 0}}), Error);
  CHECK_THROWS_AS(IntervalSet({{0, std::numeric_limits<double>::quiet_NaN()}}), Error);
}

TEST_CASE("intermediate set is the Minkowski combination") {
  IntervalSet a{{0, 1}};
  IntervalSet b{{4, 6}};
  auto z = intermediate_set(a, b, 0.5);
  REQUIRE(z.size() == 1);
  CHECK(z.intervals()[0].lo == Approx(2.0));
  CHECK(z.intervals()[0].hi == Approx(3.5));
  CHECK(intermediate_set(a, b, 0.0) == a);
  CHECK(intermediate_set(a, b, 1.0) == b);
  IntervalSet two{{0, 1}, {10, 11}};
  auto z2 = intermediate_set(two, b, 0.5);
  CHECK(z2.size() == 2);
}
