#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace needlekit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ln(e^a + e^b), exact for infinite arguments.
inline double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  if (a == kInf || b == kInf) return kInf;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

inline double log_sum(std::span<const double> terms) {
  double hi = -kInf;
  for (double t : terms) hi = std::max(hi, t);
  if (hi == -kInf || hi == kInf) return hi;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - hi);
  return hi + std::log(acc);
}

// ln(e^a - e^b) for a >= b.
inline double log_sub(double a, double b) {
  if (b == -kInf) return a;
  if (b >= a) return -kInf;
  return a + std::log(-std::expm1(b - a));
}

// ln(1 - e^{-x}) for x > 0.
inline double log1mexp(double x) {
  return std::log(-std::expm1(-x));
}

}  // namespace needlekit
