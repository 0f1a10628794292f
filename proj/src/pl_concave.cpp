#include "needlekit/pl_concave.hpp"

#include <algorithm>
#include <cmath>

#include "needlekit/error.hpp"
#include "needlekit/logspace.hpp"

namespace needlekit {

namespace {

// ln(1 + e^z) without overflow.
double softplus(double z) { return z > 30.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

bool slopes_nonincreasing(const std::vector<double>& slopes) {
  for (std::size_t i = 1; i < slopes.size(); ++i) {
    const double tol = 1e-12 * std::max({1.0, std::abs(slopes[i]), std::abs(slopes[i - 1])});
    if (slopes[i] > slopes[i - 1] + tol) return false;
  }
  return true;
}

}  // namespace

double PLConcave::Piece::log_integral(double a, double b) const {
  if (!(a < b)) return -kInf;
  if (slope == 0.0) {
    if (std::isinf(a) || std::isinf(b)) return kInf;
    return anchor_value + std::log(b - a);
  }
  if (slope > 0.0) {
    if (b == kInf) return kInf;
    const double wb = value_at(b);
    if (a == -kInf) return wb - std::log(slope);
    return wb + log1mexp(slope * (b - a)) - std::log(slope);
  }
  if (a == -kInf) return kInf;
  const double wa = value_at(a);
  if (b == kInf) return wa - std::log(-slope);
  return wa + log1mexp(-slope * (b - a)) - std::log(-slope);
}

PLConcave PLConcave::create(double domain_lo, double domain_hi, std::vector<double> breakpoints,
                            std::vector<double> values, double left_slope, double right_slope) {
  PLConcave space = create_unchecked(domain_lo, domain_hi, std::move(breakpoints),
                                     std::move(values), left_slope, right_slope);
  require(space.is_concave(), "log-density is not concave (piece slopes must be non-increasing)");
  return space;
}

PLConcave PLConcave::create_unchecked(double domain_lo, double domain_hi,
                                      std::vector<double> breakpoints, std::vector<double> values,
                                      double left_slope, double right_slope) {
  require(!breakpoints.empty(), "at least one breakpoint is required");
  require(breakpoints.size() == values.size(), "breakpoints and values differ in length");
  require(!std::isnan(domain_lo) && !std::isnan(domain_hi), "domain endpoint is NaN");
  require(domain_lo < domain_hi, "domain must satisfy lo < hi");
  require(domain_lo != kInf && domain_hi != -kInf, "domain orientation is invalid");
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    require(std::isfinite(breakpoints[i]) && std::isfinite(values[i]),
            "breakpoints and values must be finite");
    if (i > 0) require(breakpoints[i - 1] < breakpoints[i], "breakpoints must be strictly increasing");
  }
  require(domain_lo <= breakpoints.front() && breakpoints.back() <= domain_hi,
          "breakpoints must lie inside the domain");
  require(std::isfinite(left_slope) && std::isfinite(right_slope), "end slopes must be finite");

  PLConcave space;
  space.lo_ = domain_lo;
  space.hi_ = domain_hi;
  space.breakpoints_ = std::move(breakpoints);
  space.values_ = std::move(values);
  space.left_slope_ = left_slope;
  space.right_slope_ = right_slope;
  space.build_pieces();
  return space;
}

void PLConcave::build_pieces() {
  pieces_.clear();
  const auto& t = breakpoints_;
  const auto& w = values_;
  if (lo_ < t.front()) pieces_.push_back({lo_, t.front(), t.front(), w.front(), left_slope_});
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    pieces_.push_back({t[i], t[i + 1], t[i], w[i], (w[i + 1] - w[i]) / (t[i + 1] - t[i])});
  }
  if (t.back() < hi_) pieces_.push_back({t.back(), hi_, t.back(), w.back(), right_slope_});
  // A single breakpoint sitting on both domain ends cannot happen since lo < hi.
}

bool PLConcave::is_concave() const {
  std::vector<double> slopes;
  slopes.reserve(pieces_.size());
  for (const auto& p : pieces_) slopes.push_back(p.slope);
  return slopes_nonincreasing(slopes);
}

double PLConcave::log_density(double t) const {
  require(contains(t), "point outside the domain");
  auto it = std::lower_bound(pieces_.begin(), pieces_.end(), t,
                             [](const Piece& p, double x) { return p.hi < x; });
  if (it == pieces_.end()) --it;
  return it->value_at(t);
}

double PLConcave::left_tail_slope() const { return lo_ == -kInf ? left_slope_ : 0.0; }

double PLConcave::right_tail_slope() const { return hi_ == kInf ? right_slope_ : 0.0; }

double PLConcave::log_mass(double a, double b) const {
  a = std::max(a, lo_);
  b = std::min(b, hi_);
  if (!(a < b)) return -kInf;
  double acc = -kInf;
  for (const auto& p : pieces_) {
    const double u = std::max(a, p.lo);
    const double v = std::min(b, p.hi);
    if (u < v) acc = log_add(acc, p.log_integral(u, v));
  }
  return acc;
}

bool PLConcave::finite_mass() const { return log_total_mass() < kInf; }

double PLConcave::point_at_mass(double a, double log_target) const {
  a = std::max(a, lo_);
  if (log_target == -kInf) return a;
  double acc = -kInf;
  for (const auto& p : pieces_) {
    if (p.hi <= a) continue;
    const double u = std::max(a, p.lo);
    const double total = log_add(acc, p.log_integral(u, p.hi));
    if (total < log_target) {
      acc = total;
      continue;
    }
    const double r = log_sub(log_target, acc);
    double x;
    if (p.slope == 0.0) {
      x = u + std::exp(r - p.value_at(u));
    } else if (u == -kInf) {
      x = p.anchor + (r + std::log(p.slope) - p.anchor_value) / p.slope;
    } else if (p.slope > 0.0) {
      x = u + softplus(r - p.value_at(u) + std::log(p.slope)) / p.slope;
    } else {
      const double z = r - p.value_at(u) + std::log(-p.slope);
      x = z >= 0.0 ? p.hi : u + std::log(-std::expm1(z)) / p.slope;
    }
    return std::clamp(x, u, p.hi);
  }
  // Rounding may leave the target a hair above the remaining mass.
  require(log_target <= acc + 1e-9 * std::max(1.0, std::abs(acc)),
          "requested mass exceeds the mass to the right of the start point");
  return hi_;
}

std::pair<double, double> PLConcave::slope_range(double a, double b) const {
  a = std::max(a, lo_);
  b = std::min(b, hi_);
  require(a <= b, "slope_range on an empty window");
  double smin = kInf;
  double smax = -kInf;
  for (const auto& p : pieces_) {
    if (std::max(p.lo, a) <= std::min(p.hi, b)) {
      smin = std::min(smin, p.slope);
      smax = std::max(smax, p.slope);
    }
  }
  return {smin, smax};
}

PLConcave PLConcave::shifted(double c) const {
  auto w = values_;
  for (auto& x : w) x += c;
  return create_unchecked(lo_, hi_, breakpoints_, std::move(w), left_slope_, right_slope_);
}

PLConcave PLConcave::translated(double tau) const {
  auto t = breakpoints_;
  for (auto& x : t) x += tau;
  return create_unchecked(lo_ + tau, hi_ + tau, std::move(t), values_, left_slope_, right_slope_);
}

PLConcave PLConcave::reflected() const {
  std::vector<double> t(breakpoints_.rbegin(), breakpoints_.rend());
  for (auto& x : t) x = -x;
  std::vector<double> w(values_.rbegin(), values_.rend());
  return create_unchecked(-hi_, -lo_, std::move(t), std::move(w), -right_slope_, -left_slope_);
}

}  // namespace needlekit
