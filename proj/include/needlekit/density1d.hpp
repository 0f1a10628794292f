#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "needlekit/interval_set.hpp"
#include "needlekit/pl_concave.hpp"

namespace needlekit {

// ---------------------------------------------------------------------------
// Masses and boundary measure
// ---------------------------------------------------------------------------

/// Mass of set ∩ domain. Empty optional marks infinite mass.
std::optional<double> mass(const PLConcave& space, const IntervalSet& set);
/// ln of the mass; +inf when infinite, -inf when zero.
double log_mass(const PLConcave& space, const IntervalSet& set);

/// Minkowski content m+(set): sum of e^{W(p)} over the finite endpoints p of
/// set ∩ domain that lie in the open domain. This is the right derivative of
/// eps -> m(set^eps) at 0, which exists for continuous densities.
double minkowski_content(const PLConcave& space, const IntervalSet& set);
double log_minkowski_content(const PLConcave& space, const IntervalSet& set);

// ---------------------------------------------------------------------------
// Volume entropy
// ---------------------------------------------------------------------------

struct EntropyReport {
  double h = 0.0;                ///< exact tail-slope value
  double estimator_slope = 0.0;  ///< least-squares slope of ln m(B_r) over the window
  double r1 = 0.0;
  double r2 = 0.0;
};

/// ln m(B_r(x0)) with B_r the open ball of radius r.
double ball_log_mass(const PLConcave& space, double x0, double r);

/// h = max(s+, -s-, 0) from the unbounded tails. The default window starts at
/// twice the distance from x0 to the farthest breakpoint (at least 10).
EntropyReport volume_entropy(const PLConcave& space, double x0,
                             std::optional<std::pair<double, double>> window = std::nullopt,
                             int samples = 32);

struct CheckResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// ln m(B_r) >= (δ+ε)/(r+δ) ln m(B_ε) + (r-ε)/(r+δ) ln m(B_{r+δ}), all balls
/// centred at x0. lhs/rhs are reported in log form.
CheckResult entropy_growth_inequality_check(const PLConcave& space, double x0, double r,
                                            double delta, double eps, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Cheeger constant and profiles
// ---------------------------------------------------------------------------

struct CheegerResult {
  double mu = 0.0;
  bool attained = false;
  std::optional<IntervalSet> minimizer;  ///< set when attained
};

/// Infimum of m+(Ω)/m(Ω) over finite-mass sets of an infinite-mass space.
///
/// Only half-lines need to be scanned. On a linear piece of W with slope s the
/// quantity s·F(b) - e^{W(b)}, F(b) = m((-inf, b]), has zero derivative, so
/// the ratio e^W/F is monotone on every piece and the infimum sits at a
/// breakpoint or in a tail limit (where the ratio tends to the tail slope).
CheegerResult cheeger_constant(const PLConcave& space);

/// Cheeger ratio of the left half-line (-inf, b] ∩ domain; +inf if it has
/// infinite mass.
double left_half_line_ratio(const PLConcave& space, double b);

/// inf of m+(Ω) over Ω with m(Ω) = v, for 0 < v < m(X) < inf. Both half-line
/// placements are evaluated in closed form and single intervals are scanned.
double isoperimetric_profile(const PLConcave& space, double v, int interval_samples = 256);

/// (1/D) inf_{w>0} (v+w) ln(1 + 1/w), including the w -> inf limit value 1.
double milman_profile(double diameter, double v);

// ---------------------------------------------------------------------------
// One-dimensional lemmas
// ---------------------------------------------------------------------------

/// m+(Ω) >= m(Ω)(-ln 2 + hR)/D on a bounded domain of length D with
/// m(domain) >= 1/2 and -ln m(Ω) >= hR > 0. Precondition failures throw
/// ErrorCode::precondition.
CheckResult lemma_1dim_check(const PLConcave& space, const IntervalSet& omega, double h, double R);

struct QuantitativeRigidityReport {
  double h = 0.0, eps = 0.0, L = 0.0, R = 0.0, D = 0.0;
  double b = 0.0;             ///< sup Ω
  double width = 0.0;         ///< l(ε) = -ln ε / (28 h)
  double window_lo = 0.0;     ///< min{b, L} - l(ε), in domain coordinates
  double window_hi = 0.0;     ///< D/10, in domain coordinates
  bool window_empty = false;
  double slope_min = 0.0;     ///< one-sided slopes of W on the window
  double slope_max = 0.0;
  double slope_lower_bound = 0.0;  ///< (1-4ε)h
  double slope_upper_bound = 0.0;  ///< (1+3√ε)h
  double log_content = 0.0;        ///< ln m+(Ω)
  double log_hypothesis_rhs = 0.0; ///< ln((1+ε) m(Ω ∩ [0,L]) h)
  bool hypothesis_holds = false;
  bool width_ok = false;           ///< min{b, L} >= l(ε)
  bool slopes_ok = false;
  bool conclusion_holds = false;
  bool verdict = false;            ///< !hypothesis || conclusion
  std::vector<std::string> precondition_violations;
};

/// Evaluates every piece of the almost-linearity statement without throwing;
/// violated preconditions are listed by name.
QuantitativeRigidityReport evaluate_quantitative_rigidity(const PLConcave& space,
                                                          const IntervalSet& omega, double h,
                                                          double eps, double L, double R);
/// As above but throws ErrorCode::precondition naming each violation.
QuantitativeRigidityReport quantitative_rigidity_check(const PLConcave& space,
                                                       const IntervalSet& omega, double h,
                                                       double eps, double L, double R);

struct RigidityResult {
  bool rigid = false;
  double b = 0.0;         ///< right end of the attaining half-line when rigid
  bool affine = false;    ///< W has a single slope on the whole line
};

/// Rigidity of the sharp Cheeger inequality on (R, e^W dt) with right tail
/// slope h > 0: rigid iff the Cheeger constant is attained.
RigidityResult rigidity_1d(const PLConcave& space);

struct NeighborhoodGrowthResult {
  double mass_ratio = 0.0;      ///< m(Ω^σ)/m(Ω)
  double expected_ratio = 0.0;  ///< e^{σh}
  double content_ratio = 0.0;   ///< m+(Ω^σ)/m(Ω^σ)
  bool holds = false;
};

/// For Ω attaining m+(Ω) = h m(Ω) (h the volume entropy), checks
/// m(Ω^σ) = m(Ω) e^{σh} and m+(Ω^σ) = h m(Ω^σ).
NeighborhoodGrowthResult neighborhood_growth_check(const PLConcave& space,
                                                   const IntervalSet& omega, double sigma,
                                                   double tol = 1e-12);

}  // namespace needlekit
