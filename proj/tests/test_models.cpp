#include <catch_amalgamated.hpp>

#include <cmath>

#include "needlekit/density1d.hpp"
#include "needlekit/error.hpp"
#include "needlekit/models.hpp"

using namespace needlekit;
using Catch::Approx;

TEST_CASE("log linear model") {
  for (double h : {0.5, 1.0, 2.0}) {
    auto spec = log_linear_spec(h);
    auto s = build_1d(spec);
    auto truth = model_truth(spec);
    CHECK(truth.h == h);
    REQUIRE(truth.cheeger);
    CHECK(*truth.cheeger == h);
    CHECK(volume_entropy(s, 0).h == h);
    CHECK(cheeger_constant(s).mu == Approx(h).epsilon(1e-12));
  }
}

TEST_CASE("truncated exponential model") {
  auto spec = truncated_exp_spec(2.0, 3.0);
  auto s = build_1d(spec);
  CHECK(s.domain_lo() == 0.0);
  CHECK(s.domain_hi() == 3.0);
  CHECK(s.log_density(3.0) == Approx(6.0));
  CHECK(std::exp(s.log_total_mass()) == Approx(std::expm1(6.0) / 2.0));
  CHECK(model_truth(spec).finite_mass);
  CHECK(volume_entropy(s, 1.0).h == 0.0);
}

TEST_CASE("tent and gaussian-like models") {
  auto tent = build_1d(tent_spec(1.0, 2.0));
  CHECK(tent.finite_mass());
  CHECK(std::exp(tent.log_total_mass()) == Approx(1.0 + 0.5));
  auto gauss = build_1d(gaussian_like_tent_spec());
  CHECK(gauss.is_concave());
  CHECK(gauss.finite_mass());
  CHECK(gauss.log_density(1.0) == Approx(-0.5));
}

TEST_CASE("model names round trip") {
  for (auto kind : {ModelKind::log_linear, ModelKind::truncated_exp, ModelKind::tent,
                    ModelKind::product_strip, ModelKind::gaussian_like_tent}) {
    CHECK(model_kind_from_name(model_kind_name(kind)) == kind);
  }
  CHECK_THROWS_AS(model_kind_from_name("cone"), Error);
  CHECK_THROWS_AS(build_1d(product_strip_spec(1, 2, 2, 0.1)), Error);
}

TEST_CASE("product strip layout") {
  auto strip = build_strip(product_strip_spec(1.0, 3, 10, 0.1));
  CHECK(strip.space.size() == 30);
  CHECK(strip.rows.size() == 3);
  CHECK(strip.rows[1].size() == 10);
  const auto p = strip.rows[2][4];
  CHECK(strip.space.coords(p)[0] == Approx(0.4));
  CHECK(strip.space.coords(p)[1] == Approx(2.0));
  CHECK(strip.space.weight(p) == Approx(0.1 * std::exp(0.4)));
  std::size_t in = 0;
  for (bool b : strip.omega) in += b;
  CHECK(in == 15);
  for (std::size_t q = 0; q < strip.space.size(); ++q) {
    CHECK(strip.space.distance(strip.center, q) < strip.radius);
  }
  CHECK(strip.e_discrete == Approx(std::log(strip.h * strip.omega_mass / 3.0) / strip.h));
  CHECK_THROWS_AS(build_strip(product_strip_spec(1.0, 0, 10, 0.1)), Error);
}

TEST_CASE("wedge differs from the half strip") {
  auto strip = build_strip(product_strip_spec(1.0, 5, 40, 0.1));
  auto wedge = wedge_mask(strip, 0.2);
  CHECK(wedge_mask(strip, 0.0) == strip.omega);
  CHECK(wedge != strip.omega);
}
