#include "needlekit/interpolate1d.hpp"

#include <algorithm>
#include <cmath>

#include "needlekit/density1d.hpp"
#include "needlekit/error.hpp"
#include "needlekit/logspace.hpp"

namespace needlekit {

namespace {

bool same_reference(const PLConcave& a, const PLConcave& b) {
  return a.domain_lo() == b.domain_lo() && a.domain_hi() == b.domain_hi() &&
         a.breakpoints() == b.breakpoints() && a.values() == b.values() &&
         a.left_slope() == b.left_slope() && a.right_slope() == b.right_slope();
}

}  // namespace

Density1D::Density1D(PLConcave reference, std::vector<double> edges, std::vector<double> rho)
    : reference_(std::move(reference)), edges_(std::move(edges)), rho_(std::move(rho)) {
  require(edges_.size() >= 2, "a density needs at least one cell");
  require(rho_.size() + 1 == edges_.size(), "need one rho value per cell");
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    require(std::isfinite(edges_[i]), "partition edges must be finite");
    require(reference_.contains(edges_[i]), "partition edges must lie in the reference domain");
    if (i > 0) require(edges_[i - 1] < edges_[i], "partition edges must be strictly increasing");
  }
  for (double r : rho_) require(std::isfinite(r) && r >= 0.0, "rho must be finite and non-negative");
  cell_mass_.resize(rho_.size());
  cumulative_.assign(edges_.size(), 0.0);
  for (std::size_t i = 0; i < rho_.size(); ++i) {
    cell_mass_[i] = std::exp(reference_.log_mass(edges_[i], edges_[i + 1]));
    cumulative_[i + 1] = cumulative_[i] + rho_[i] * cell_mass_[i];
  }
  require(cumulative_.back() > 0.0, "empty support");
}

Density1D Density1D::create(PLConcave reference, std::vector<double> edges, std::vector<double> rho) {
  Density1D d(std::move(reference), std::move(edges), std::move(rho));
  require(std::abs(d.cumulative_.back() - 1.0) <= 1e-12, "density does not integrate to 1");
  return d;
}

Density1D Density1D::normalized(PLConcave reference, std::vector<double> edges,
                                std::vector<double> rho) {
  Density1D d(reference, edges, rho);
  const double total = d.cumulative_.back();
  for (auto& r : rho) r /= total;
  return Density1D(std::move(reference), std::move(edges), std::move(rho));
}

Density1D Density1D::uniform_on(PLConcave reference, const IntervalSet& set) {
  const IntervalSet s = set.clipped(reference.domain_lo(), reference.domain_hi());
  require(!s.empty(), "empty support");
  std::vector<double> edges;
  std::vector<double> rho;
  for (const auto& iv : s) {
    require(std::isfinite(iv.lo) && std::isfinite(iv.hi), "uniform_on needs a bounded set");
    if (!edges.empty()) rho.push_back(0.0);
    edges.push_back(iv.lo);
    edges.push_back(iv.hi);
    rho.push_back(1.0);
  }
  return normalized(std::move(reference), std::move(edges), std::move(rho));
}

double Density1D::cdf(double x) const {
  if (x <= edges_.front()) return 0.0;
  if (x >= edges_.back()) return 1.0;
  const auto i = static_cast<std::size_t>(
      std::upper_bound(edges_.begin(), edges_.end(), x) - edges_.begin() - 1);
  return cumulative_[i] + rho_[i] * std::exp(reference_.log_mass(edges_[i], x));
}

double Density1D::quantile(double u, std::size_t* cell) const {
  require(u > 0.0 && u < 1.0, "quantile level must lie in (0, 1)");
  auto i = static_cast<std::size_t>(
      std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin() - 1);
  i = std::min(i, rho_.size() - 1);
  while (rho_[i] == 0.0 && i + 1 < rho_.size()) ++i;
  if (cell) *cell = i;
  const double local = std::max(u - cumulative_[i], 0.0) / rho_[i];
  const double x = reference_.point_at_mass(edges_[i], std::log(local));
  return std::clamp(x, edges_[i], edges_[i + 1]);
}

double Density1D::lebesgue_density(double x, std::size_t cell) const {
  return rho_[cell] * std::exp(reference_.log_density(x));
}

double QuantileMap::operator()(double at) const {
  if (at <= x.front()) return y.front();
  if (at >= x.back()) return y.back();
  const auto k = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), at) - x.begin());
  const double x0 = x[k - 1], x1 = x[k];
  if (x1 == x0) return y[k];
  return y[k - 1] + (y[k] - y[k - 1]) * (at - x0) / (x1 - x0);
}

QuantileMap QuantileMap::inverse() const { return {u, y, x, cell1, cell0}; }

QuantileMap quantile_map(const Density1D& mu0, const Density1D& mu1, std::size_t n) {
  require(n >= 2, "quantile grid needs at least two points");
  QuantileMap map;
  map.u.resize(n);
  map.x.resize(n);
  map.y.resize(n);
  map.cell0.resize(n);
  map.cell1.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    map.u[j] = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
    map.x[j] = mu0.quantile(map.u[j], &map.cell0[j]);
    map.y[j] = mu1.quantile(map.u[j], &map.cell1[j]);
  }
  return map;
}

double entropy(const Density1D& mu) {
  double acc = 0.0;
  for (std::size_t i = 0; i < mu.cells(); ++i) {
    const double r = mu.rho()[i];
    if (r > 0.0) acc += r * std::log(r) * mu.cell_mass(i);
  }
  return acc;
}

GeodesicSample interpolate(const QuantileMap& map, const Density1D& mu0, const Density1D& mu1,
                           double t) {
  require(t >= 0.0 && t <= 1.0, "t must lie in [0, 1]");
  const std::size_t n = map.u.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  const PLConcave& ref = mu0.reference();
  GeodesicSample s;
  s.t = t;
  s.position.resize(n);
  s.density.resize(n);
  double ent = 0.0, total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double z = (1.0 - t) * map.x[j] + t * map.y[j];
    // Terms with zero weight are skipped so that t = 0, 1 never touch the
    // other endpoint's density.
    double dz = 0.0;
    if (t < 1.0) dz += (1.0 - t) / mu0.lebesgue_density(map.x[j], map.cell0[j]);
    if (t > 0.0) dz += t / mu1.lebesgue_density(map.y[j], map.cell1[j]);
    s.position[j] = z;
    s.density[j] = 1.0 / dz;
    ent += -std::log(dz) - ref.log_density(z);
    total += s.density[j] * dz;
  }
  s.entropy = ent * inv_n;
  s.total_mass = total * inv_n;
  return s;
}

std::vector<double> default_t_grid() {
  std::vector<double> g;
  for (int k = 0; k <= 10; ++k) g.push_back(k / 10.0);
  return g;
}

ConvexityReport displacement_convexity_check(const PLConcave& space, const Density1D& mu0,
                                             const Density1D& mu1,
                                             const std::vector<double>& t_grid, std::size_t n) {
  require(same_reference(space, mu0.reference()) && same_reference(space, mu1.reference()),
          "densities must be defined against the given reference space");
  const QuantileMap map = quantile_map(mu0, mu1, n);
  const double e0 = interpolate(map, mu0, mu1, 0.0).entropy;
  const double e1 = interpolate(map, mu0, mu1, 1.0).entropy;
  ConvexityReport rep;
  rep.max_violation = -kInf;
  for (double t : t_grid) {
    const GeodesicSample s = interpolate(map, mu0, mu1, t);
    const double bound = (1.0 - t) * e0 + t * e1;
    rep.rows.push_back({t, s.entropy, bound, s.entropy - bound});
    rep.max_violation = std::max(rep.max_violation, s.entropy - bound);
    rep.max_mass_error = std::max(rep.max_mass_error, std::abs(s.total_mass - 1.0));
  }
  return rep;
}

IntervalSet intermediate_set(const IntervalSet& omega, const IntervalSet& b, double t) {
  require(t >= 0.0 && t <= 1.0, "t must lie in [0, 1]");
  if (omega.empty() || b.empty()) return {};
  if (t == 0.0) return omega;
  if (t == 1.0) return b;
  std::vector<Interval> out;
  out.reserve(omega.size() * b.size());
  for (const auto& x : omega) {
    for (const auto& y : b) out.push_back({(1.0 - t) * x.lo + t * y.lo, (1.0 - t) * x.hi + t * y.hi});
  }
  return IntervalSet(std::move(out));
}

BrunnMinkowskiReport brunn_minkowski_check(const PLConcave& space, const IntervalSet& omega,
                                           const IntervalSet& b, const std::vector<double>& t_grid,
                                           double tol) {
  const double lo = log_mass(space, omega);
  const double lb = log_mass(space, b);
  require(std::isfinite(lo) && std::isfinite(lb), "both sets need finite positive mass");
  BrunnMinkowskiReport rep;
  rep.max_violation = -kInf;
  rep.holds = true;
  for (double t : t_grid) {
    const IntervalSet z = intermediate_set(omega, b, t).clipped(space.domain_lo(), space.domain_hi());
    const double lhs = log_mass(space, z);
    const double rhs = t * lb + (1.0 - t) * lo;
    rep.rows.push_back({t, lhs, rhs, rhs - lhs});
    rep.max_violation = std::max(rep.max_violation, rhs - lhs);
    if (rhs - lhs > tol * std::max(1.0, std::abs(rhs))) rep.holds = false;
  }
  return rep;
}

}  // namespace needlekit
