#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "needlekit/discrete_space.hpp"

namespace needlekit {

/// g = 1 on Ω ∩ B, -m(Ω ∩ B)/m(B \ Ω) on B \ Ω, 0 elsewhere, where B is the
/// open ball of radius `radius` about `center`.
struct BalancedFunction {
  std::vector<double> g;
  std::vector<bool> omega;
  std::vector<bool> ball;
  std::size_t center = 0;
  double radius = 0.0;
};

BalancedFunction balanced_function(const DiscreteSpace& space, const std::vector<bool>& omega,
                                   std::size_t center, double radius);

struct Flow {
  std::size_t src;
  std::size_t dst;
  double mass;
};

struct TransportSolution {
  std::vector<Flow> flow;
  std::vector<double> phi;  ///< Kantorovich potential, phi(center) = 0
  double total_cost = 0.0;
  BalancedFunction input;
};

/// Optimal coupling of g+ w and g- w for the cost d by the network simplex on
/// the complete bipartite source/sink graph. The dual values on the sinks are
/// extended to every point by phi(x) = min_y (phi(y) + d(x, y)).
TransportSolution solve_l1(const DiscreteSpace& space, const BalancedFunction& g);

struct TransportCheck {
  double max_lipschitz_excess = 0.0;  ///< max over pairs of phi(x) - phi(y) - d(x, y)
  double max_slackness_gap = 0.0;     ///< max over flow pairs of |phi(x) - phi(y) - d(x, y)|
  double max_marginal_error = 0.0;
};
TransportCheck check_transport(const DiscreteSpace& space, const TransportSolution& sol);

struct Needle {
  std::vector<std::size_t> points;  ///< phi strictly decreasing
  std::vector<double> arclength;    ///< phi(first) - phi(point)
  std::vector<double> phi;
  std::vector<double> mass;
  std::vector<double> g;
  std::vector<bool> in_omega;
  std::vector<double> direction;  ///< unit vector first -> last, embedded spaces only
  std::vector<double> omega_exit; ///< midpoint of the first Ω -> complement step, if any
  bool boundary = false;          ///< comes within one chain gap of the ball boundary
  double slope_fit = 0.0;
  std::optional<double> concavity_defect;
};

struct NeedleReport {
  std::vector<Needle> needles;
  std::vector<std::size_t> branch_points;
};

/// Flow pairs sharing a point are chained when the three points are
/// metrically aligned, |d(x, z) - d(x, y) - d(y, z)| <= collinear_tol d(x, z).
/// Points where two non-aligned chains meet are branch points and belong to
/// no needle.
NeedleReport extract_needles(const DiscreteSpace& space, const TransportSolution& sol,
                             double collinear_tol = 1e-6);

struct Disintegration {
  std::vector<std::vector<double>> conditional;  ///< per needle, aligned with points
  std::vector<std::size_t> residual;
  double needle_mass = 0.0;
  double residual_mass = 0.0;
  double total_mass = 0.0;
  double partition_error = 0.0;  ///< |needle + residual - total| / total
  double residual_g_max = 0.0;   ///< max |g| on the residual set
};

/// Throws ErrorCode::internal if two needles share a point.
Disintegration disintegrate(const DiscreteSpace& space, const std::vector<Needle>& needles,
                            std::span<const double> g = {});

struct NeedleDiagnostics {
  double balance = 0.0;  ///< Σ g m_q
  std::optional<double> concavity_defect;
  double slope_fit = 0.0;
  std::vector<double> log_density;
};

/// Densities are mass over the Voronoi cell length along the chain; the end
/// cells use the adjacent gap.
NeedleDiagnostics needle_diagnostics(const Needle& needle);

struct SplitVerdict {
  bool splits = false;
  double h_est = 0.0;
  bool slopes_agree = false;
  bool directions_parallel = false;
  bool boundaries_agree = false;
  double max_slope_deviation = 0.0;  ///< relative to max(|h_est|, 1)
  double max_direction_defect = 0.0; ///< max 1 - cos over needle pairs
  double boundary_spread = 0.0;
  double position_tol = 0.0;
};

/// Boundary positions are the projections of the first Ω -> complement
/// transition of each needle onto the mean needle direction. The default
/// position tolerance is the median chain gap.
SplitVerdict splitting_detector(const std::vector<Needle>& needles, double h_tol, double dir_tol,
                                std::optional<double> position_tol = std::nullopt);

struct Localization {
  BalancedFunction g;
  TransportSolution transport;
  NeedleReport needles;
  Disintegration disintegration;
};

Localization localize(const DiscreteSpace& space, const std::vector<bool>& omega,
                      std::size_t center, double radius);

struct LadderRow {
  double r1;
  double r2;
  double max_phi_change;  ///< on points within core_radius of the center
};

/// Potentials for an increasing sequence of radii compared on a fixed core.
std::vector<LadderRow> potential_ladder(const DiscreteSpace& space, const std::vector<bool>& omega,
                                        std::size_t center, const std::vector<double>& radii,
                                        double core_radius);

}  // namespace needlekit
