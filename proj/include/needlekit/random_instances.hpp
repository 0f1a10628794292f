#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "needlekit/discrete_space.hpp"
#include "needlekit/interpolate1d.hpp"
#include "needlekit/interval_set.hpp"
#include "needlekit/localize.hpp"
#include "needlekit/pl_concave.hpp"

namespace needlekit {

/// Independent generator for trial `trial` of a run seeded with `seed`.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

enum class SpaceShape { any, infinite_mass, finite_mass, whole_line };

/// 1 to 4 breakpoints in [-4, 4], slopes in [-3, 3], random domain ends.
PLConcave random_space(std::mt19937_64& rng, SpaceShape shape = SpaceShape::any);

/// Nonempty finite-mass union of 1 to 3 intervals, sometimes a half-line
/// toward a side of finite mass.
IntervalSet random_finite_set(const PLConcave& space, std::mt19937_64& rng);

/// Nonempty bounded union of 1 to 3 intervals inside the domain.
IntervalSet random_bounded_set(const PLConcave& space, std::mt19937_64& rng);

/// Piecewise-constant density on a random bounded support.
Density1D random_density(const PLConcave& space, std::mt19937_64& rng);

struct Lemma41Instance {
  PLConcave space;
  IntervalSet omega;
  double h = 0.0;
  double R = 0.0;
};
/// Domain [0, D], m([0, D]) in [1/2, 4], 0 < hR <= -ln m(Ω).
Lemma41Instance random_lemma41_instance(std::mt19937_64& rng);

struct GrowthInstance {
  PLConcave space;
  double x0 = 0.0, r = 0.0, delta = 0.0, eps = 0.0;
};
GrowthInstance random_growth_instance(std::mt19937_64& rng);

/// Whole line, right tail slope h, at least one strict kink.
PLConcave random_concave_perturbation(double h, std::mt19937_64& rng);

struct SmallTransportInstance {
  DiscreteSpace space;
  BalancedFunction g;
};
/// 2 to max_points points in the unit square with a random Ω and ball.
SmallTransportInstance random_small_transport(std::mt19937_64& rng, std::size_t max_points = 8);

}  // namespace needlekit
