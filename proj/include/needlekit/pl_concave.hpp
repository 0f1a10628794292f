#pragma once

#include <utility>
#include <vector>

#include "needlekit/interval_set.hpp"

namespace needlekit {

/// One-dimensional weighted line (domain, e^{W(t)} dt) with W continuous,
/// piecewise linear and concave.
///
/// W is given by its values at strictly increasing breakpoints. A finite
/// domain end either coincides with the outermost breakpoint or is reached by
/// continuing with the end slope on that side; an infinite end always needs
/// its end slope. All integrals are evaluated in closed form, in log space so
/// that very long domains (|W| in the thousands) stay representable.
class PLConcave {
 public:
  /// Linear piece W(t) = anchor_value + slope * (t - anchor) on [lo, hi].
  /// The anchor is always a finite endpoint of the piece.
  struct Piece {
    double lo;
    double hi;
    double anchor;
    double anchor_value;
    double slope;

    double value_at(double t) const { return anchor_value + slope * (t - anchor); }
    /// ln of the integral of e^W over [a, b] (a subset of the piece);
    /// +inf for a divergent tail, -inf when a >= b.
    double log_integral(double a, double b) const;
  };

  /// Validates concavity; throws invalid_argument otherwise.
  static PLConcave create(double domain_lo, double domain_hi, std::vector<double> breakpoints,
                          std::vector<double> values, double left_slope = 0.0,
                          double right_slope = 0.0);
  /// Same layout checks but no concavity requirement; for negative controls.
  static PLConcave create_unchecked(double domain_lo, double domain_hi,
                                    std::vector<double> breakpoints, std::vector<double> values,
                                    double left_slope = 0.0, double right_slope = 0.0);

  double domain_lo() const { return lo_; }
  double domain_hi() const { return hi_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  double left_slope() const { return left_slope_; }
  double right_slope() const { return right_slope_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  bool is_concave() const;
  bool contains(double t) const { return lo_ <= t && t <= hi_; }
  bool interior(double t) const { return lo_ < t && t < hi_; }

  /// W(t) for t in the domain closure.
  double log_density(double t) const;
  /// Slopes of the tails that reach infinity; 0 for a bounded side.
  double left_tail_slope() const;
  double right_tail_slope() const;

  /// ln of the mass of [a, b] ∩ domain; +inf if divergent, -inf if empty.
  double log_mass(double a, double b) const;
  double log_total_mass() const { return log_mass(lo_, hi_); }
  bool finite_mass() const;

  /// Smallest x >= a with ln m([a, x]) = log_target. Requires the target to be
  /// at most the mass to the right of a.
  double point_at_mass(double a, double log_target) const;

  /// Min and max of the one-sided slopes of W over [a, b] ∩ domain; at a
  /// breakpoint both adjacent slopes count.
  std::pair<double, double> slope_range(double a, double b) const;

  PLConcave shifted(double c) const;       // W + c
  PLConcave translated(double tau) const;  // t -> t + tau
  PLConcave reflected() const;             // t -> -t

 private:
  PLConcave() = default;
  void build_pieces();

  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  double left_slope_ = 0.0;
  double right_slope_ = 0.0;
  std::vector<Piece> pieces_;
};

}  // namespace needlekit
