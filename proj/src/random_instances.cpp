#include "needlekit/random_instances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "needlekit/density1d.hpp"
#include "needlekit/error.hpp"

namespace needlekit {

namespace {

constexpr double kInfD = std::numeric_limits<double>::infinity();

double uniform(std::mt19937_64& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

int uniform_int(std::mt19937_64& rng, int a, int b) {
  return std::uniform_int_distribution<int>(a, b)(rng);
}

bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

// Sorted points in [a, b] with gaps of at least `gap`.
std::vector<double> spaced_points(std::mt19937_64& rng, int k, double a, double b, double gap) {
  while (true) {
    std::vector<double> t(static_cast<std::size_t>(k));
    for (auto& x : t) x = uniform(rng, a, b);
    std::sort(t.begin(), t.end());
    bool ok = true;
    for (std::size_t i = 1; i < t.size(); ++i) ok = ok && t[i] - t[i - 1] >= gap;
    if (ok) return t;
  }
}

// Descending slopes and the matching values of W at the breakpoints.
std::pair<std::vector<double>, std::vector<double>> concave_values(std::mt19937_64& rng,
                                                                   const std::vector<double>& t,
                                                                   double smin, double smax) {
  std::vector<double> s(t.size() + 1);
  for (auto& x : s) x = uniform(rng, smin, smax);
  std::sort(s.begin(), s.end(), std::greater<>());
  std::vector<double> w(t.size());
  w[0] = uniform(rng, -2.0, 2.0);
  for (std::size_t i = 1; i < t.size(); ++i) w[i] = w[i - 1] + s[i] * (t[i] - t[i - 1]);
  return {s, w};
}

bool left_finite(const PLConcave& s) { return s.domain_lo() > -kInfD || s.left_slope() > 0.0; }
bool right_finite(const PLConcave& s) { return s.domain_hi() < kInfD || s.right_slope() < 0.0; }

// Bounded window around the breakpoints, inside the domain.
std::pair<double, double> window(const PLConcave& s) {
  return {std::max(s.domain_lo(), s.breakpoints().front() - 4.0),
          std::min(s.domain_hi(), s.breakpoints().back() + 4.0)};
}

}  // namespace

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

PLConcave random_space(std::mt19937_64& rng, SpaceShape shape) {
  while (true) {
    const int k = uniform_int(rng, 1, 4);
    const auto t = spaced_points(rng, k, -4.0, 4.0, 0.05);
    const auto [s, w] = concave_values(rng, t, -3.0, 3.0);
    double lo = -kInfD, hi = kInfD;
    if (shape != SpaceShape::whole_line) {
      if (coin(rng, 0.3)) lo = t.front() - (coin(rng, 0.3) ? 0.0 : uniform(rng, 0.1, 3.0));
      if (coin(rng, 0.3)) hi = t.back() + (coin(rng, 0.3) ? 0.0 : uniform(rng, 0.1, 3.0));
    }
    if (!(lo < hi)) continue;
    auto space = PLConcave::create(lo, hi, t, w, s.front(), s.back());
    const bool finite = space.finite_mass();
    if (shape == SpaceShape::infinite_mass && finite) continue;
    if (shape == SpaceShape::finite_mass && !finite) continue;
    return space;
  }
}

IntervalSet random_bounded_set(const PLConcave& space, std::mt19937_64& rng) {
  const auto [a, b] = window(space);
  const int m = uniform_int(rng, 1, 3);
  const auto p = spaced_points(rng, 2 * m, a, b, 1e-3);
  std::vector<Interval> iv;
  for (int i = 0; i < m; ++i) iv.push_back({p[2 * i], p[2 * i + 1]});
  return IntervalSet(std::move(iv));
}

IntervalSet random_finite_set(const PLConcave& space, std::mt19937_64& rng) {
  auto iv = random_bounded_set(space, rng).intervals();
  if (left_finite(space) && coin(rng, 0.2)) iv.front().lo = space.domain_lo();
  if (right_finite(space) && coin(rng, 0.2)) iv.back().hi = space.domain_hi();
  return IntervalSet(std::move(iv));
}

Density1D random_density(const PLConcave& space, std::mt19937_64& rng) {
  const auto set = random_bounded_set(space, rng);
  std::vector<double> edges, rho;
  for (const auto& iv : set) {
    if (!edges.empty()) rho.push_back(0.0);
    const int cells = uniform_int(rng, 1, 3);
    auto inner = spaced_points(rng, cells - 1, iv.lo, iv.hi, 0.0);
    edges.push_back(iv.lo);
    for (double x : inner) {
      if (x > edges.back() && x < iv.hi) {
        edges.push_back(x);
        rho.push_back(uniform(rng, 0.1, 2.0));
      }
    }
    edges.push_back(iv.hi);
    rho.push_back(uniform(rng, 0.1, 2.0));
  }
  return Density1D::normalized(space, std::move(edges), std::move(rho));
}

Lemma41Instance random_lemma41_instance(std::mt19937_64& rng) {
  while (true) {
    const double D = uniform(rng, 1.0, 30.0);
    auto t = spaced_points(rng, uniform_int(rng, 0, 3), 0.0, D, 0.0);
    t.insert(t.begin(), 0.0);
    t.push_back(D);
    t.erase(std::unique(t.begin(), t.end()), t.end());
    auto [s, w] = concave_values(rng, t, -3.0, 3.0);
    auto space = PLConcave::create(0.0, D, t, w);
    space = space.shifted(uniform(rng, std::log(0.5), std::log(4.0)) - space.log_total_mass());

    const int m = uniform_int(rng, 1, 2);
    const auto p = spaced_points(rng, 2 * m, 0.0, D, 1e-3);
    std::vector<Interval> iv;
    for (int i = 0; i < m; ++i) iv.push_back({p[2 * i], p[2 * i + 1]});
    IntervalSet omega(std::move(iv));
    const double lv = log_mass(space, omega);
    if (!(-lv > 1e-6)) continue;
    Lemma41Instance out{space, omega, uniform(rng, 0.05, 2.0), 0.0};
    out.R = uniform(rng, 0.01, 1.0) * (-lv) / out.h;
    return out;
  }
}

GrowthInstance random_growth_instance(std::mt19937_64& rng) {
  GrowthInstance g{random_space(rng), 0.0, 0.0, 0.0, 0.0};
  const auto [a, b] = window(g.space);
  g.x0 = uniform(rng, a, b);
  g.eps = uniform(rng, 0.01, 1.0);
  g.r = g.eps + uniform(rng, 0.01, 5.0);
  g.delta = uniform(rng, 0.01, 5.0);
  return g;
}

PLConcave random_concave_perturbation(double h, std::mt19937_64& rng) {
  require(h > 0.0, "perturbation needs h > 0");
  const int k = uniform_int(rng, 1, 4);
  const auto t = spaced_points(rng, k, -4.0, 4.0, 0.05);
  std::vector<double> s(t.size() + 1);
  s.back() = h;
  for (std::size_t i = s.size() - 1; i-- > 0;) s[i] = s[i + 1] + uniform(rng, 0.01, 1.0);
  std::vector<double> w(t.size());
  w[0] = uniform(rng, -2.0, 2.0);
  for (std::size_t i = 1; i < t.size(); ++i) w[i] = w[i - 1] + s[i] * (t[i] - t[i - 1]);
  return PLConcave::create(-kInfD, kInfD, t, w, s.front(), s.back());
}

SmallTransportInstance random_small_transport(std::mt19937_64& rng, std::size_t max_points) {
  require(max_points >= 2, "need room for at least two points");
  while (true) {
    const auto n = static_cast<std::size_t>(uniform_int(rng, 2, static_cast<int>(max_points)));
    std::vector<std::vector<double>> coords(n);
    std::vector<double> w(n);
    std::vector<bool> omega(n);
    for (std::size_t i = 0; i < n; ++i) {
      coords[i] = {uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0)};
      w[i] = uniform(rng, 0.5, 2.0);
      omega[i] = coin(rng, 0.5);
    }
    auto space = DiscreteSpace::from_coordinates(std::move(coords), std::move(w));
    const auto center = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(n) - 1));
    const double radius = coin(rng, 0.5) ? kInfD : uniform(rng, 0.3, 1.5);
    try {
      auto g = balanced_function(space, omega, center, radius);
      return {std::move(space), std::move(g)};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::degenerate) throw;
    }
  }
}

}  // namespace needlekit
