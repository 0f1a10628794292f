#pragma once

#include <cstddef>
#include <vector>

#include "needlekit/interval_set.hpp"
#include "needlekit/pl_concave.hpp"

namespace needlekit {

/// Probability measure rho·m on the line, rho piecewise constant on a finite
/// partition, m = e^W dt the reference measure.
class Density1D {
 public:
  /// Requires ∫ rho dm = 1 within 1e-12.
  static Density1D create(PLConcave reference, std::vector<double> edges, std::vector<double> rho);
  /// Rescales rho to unit mass.
  static Density1D normalized(PLConcave reference, std::vector<double> edges, std::vector<double> rho);
  /// Normalised restriction of m to a finite-mass set.
  static Density1D uniform_on(PLConcave reference, const IntervalSet& set);

  const PLConcave& reference() const { return reference_; }
  const std::vector<double>& edges() const { return edges_; }
  const std::vector<double>& rho() const { return rho_; }
  std::size_t cells() const { return rho_.size(); }
  double cell_mass(std::size_t i) const { return cell_mass_[i]; }  ///< m(cell i)

  double cdf(double x) const;
  /// Generalised inverse of the CDF at u in (0, 1); the cell holding the
  /// quantile is written to *cell when requested.
  double quantile(double u, std::size_t* cell = nullptr) const;
  /// Lebesgue density rho_i e^{W(x)} at x, using the rho of the given cell.
  double lebesgue_density(double x, std::size_t cell) const;

 private:
  Density1D(PLConcave reference, std::vector<double> edges, std::vector<double> rho);

  PLConcave reference_;
  std::vector<double> edges_;
  std::vector<double> rho_;
  std::vector<double> cell_mass_;
  std::vector<double> cumulative_;  // probability left of each edge
};

/// Monotone rearrangement T = G^{-1} ∘ F sampled at quantile midpoints
/// u_j = (j + 1/2)/N.
struct QuantileMap {
  std::vector<double> u;
  std::vector<double> x;  ///< F^{-1}(u_j)
  std::vector<double> y;  ///< G^{-1}(u_j) = T(x_j)
  std::vector<std::size_t> cell0;
  std::vector<std::size_t> cell1;

  /// T(x) by linear interpolation between grid nodes, clamped outside.
  double operator()(double at) const;
  QuantileMap inverse() const;
};

QuantileMap quantile_map(const Density1D& mu0, const Density1D& mu1, std::size_t n = 10000);

/// ∫ rho ln rho dm, closed form per cell.
double entropy(const Density1D& mu);

/// Displacement interpolant mu_t = ((1-t) Id + t T)_# mu0 on the quantile grid.
struct GeodesicSample {
  double t = 0.0;
  std::vector<double> position;  ///< z_j
  std::vector<double> density;   ///< Lebesgue density of mu_t at z_j
  double entropy = 0.0;          ///< relative to the reference, midpoint rule in u
  double total_mass = 0.0;       ///< Σ density_j |dz/du|_j / N
};

/// In quantile coordinates dz/du = (1-t)/p0(x) + t/p1(y), so
/// Ent(mu_t) = ∫_0^1 [-ln dz/du - W(z(u))] du needs no derivative of the
/// (possibly discontinuous) densities.
GeodesicSample interpolate(const QuantileMap& map, const Density1D& mu0, const Density1D& mu1,
                           double t);

std::vector<double> default_t_grid();

struct ConvexityRow {
  double t;
  double entropy;
  double bound;      ///< (1-t) Ent(mu0) + t Ent(mu1)
  double violation;  ///< entropy - bound
};

struct ConvexityReport {
  std::vector<ConvexityRow> rows;
  double max_violation = 0.0;
  double max_mass_error = 0.0;
};

/// Entropies at t = 0 and 1 use the same quadrature as interior times.
ConvexityReport displacement_convexity_check(const PLConcave& space, const Density1D& mu0,
                                             const Density1D& mu1,
                                             const std::vector<double>& t_grid = default_t_grid(),
                                             std::size_t n = 10000);

/// Z_t = {(1-t)x + t y : x in omega, y in b}.
IntervalSet intermediate_set(const IntervalSet& omega, const IntervalSet& b, double t);

struct BrunnMinkowskiRow {
  double t;
  double lhs;        ///< ln m(Z_t)
  double rhs;        ///< t ln m(B) + (1-t) ln m(Omega)
  double violation;  ///< rhs - lhs
};

struct BrunnMinkowskiReport {
  std::vector<BrunnMinkowskiRow> rows;
  double max_violation = 0.0;
  bool holds = false;
};

BrunnMinkowskiReport brunn_minkowski_check(const PLConcave& space, const IntervalSet& omega,
                                           const IntervalSet& b,
                                           const std::vector<double>& t_grid = default_t_grid(),
                                           double tol = 1e-9);

}  // namespace needlekit
