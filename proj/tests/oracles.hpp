#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "needlekit/discrete_space.hpp"
#include "needlekit/localize.hpp"

namespace oracle {

// Minimum transport cost by enumerating basic solutions of
// sum_j x_ij = supply_i, sum_i x_ij = demand_j, x >= 0.
inline double transport_lp(const std::vector<double>& supply, const std::vector<double>& demand,
                           const std::vector<double>& cost) {
  const int S = static_cast<int>(supply.size()), T = static_cast<int>(demand.size());
  const int vars = S * T, rows = S + T;
  const int k = std::min(vars, rows - 1);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, vars);
  Eigen::VectorXd b(rows);
  for (int i = 0; i < S; ++i) b(i) = supply[i];
  for (int j = 0; j < T; ++j) b(S + j) = demand[j];
  for (int i = 0; i < S; ++i) {
    for (int j = 0; j < T; ++j) {
      A(i, i * T + j) = 1.0;
      A(S + j, i * T + j) = 1.0;
    }
  }
  const double scale = b.cwiseAbs().maxCoeff();
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    Eigen::MatrixXd sub(rows, k);
    for (int c = 0; c < k; ++c) sub.col(c) = A.col(pick[c]);
    Eigen::VectorXd x = sub.colPivHouseholderQr().solve(b);
    const bool exact = (sub * x - b).cwiseAbs().maxCoeff() <= 1e-12 * scale;
    if (exact && x.minCoeff() >= -1e-12 * scale) {
      double c = 0.0;
      for (int v = 0; v < k; ++v) c += std::max(x(v), 0.0) * cost[pick[v]];
      best = std::min(best, c);
    }
    int pos = k - 1;
    while (pos >= 0 && pick[pos] == vars - k + pos) --pos;
    if (pos < 0) break;
    ++pick[pos];
    for (int q = pos + 1; q < k; ++q) pick[q] = pick[q - 1] + 1;
  }
  return best;
}

// Same problem posed from a balanced function, demand rescaled to the supply.
inline double transport_lp(const needlekit::DiscreteSpace& space,
                           const needlekit::BalancedFunction& g) {
  std::vector<std::size_t> src, dst;
  std::vector<double> supply, demand;
  for (std::size_t p = 0; p < space.size(); ++p) {
    const double v = g.g[p] * space.weight(p);
    if (v > 0) {
      src.push_back(p);
      supply.push_back(v);
    } else if (v < 0) {
      dst.push_back(p);
      demand.push_back(-v);
    }
  }
  if (src.empty()) return 0.0;
  double ts = 0.0, td = 0.0;
  for (double v : supply) ts += v;
  for (double v : demand) td += v;
  for (double& v : demand) v *= ts / td;
  std::vector<double> cost;
  for (std::size_t i : src) {
    for (std::size_t j : dst) cost.push_back(space.distance(i, j));
  }
  return transport_lp(supply, demand, cost);
}

inline double milman_objective(double v, double w) { return (v + w) * std::log1p(1.0 / w); }

// Grid minimum of (1/D)(v+w)ln(1+1/w) over n log-spaced w, together with the
// w -> inf limit 1.
inline double milman_grid(double D, double v, std::size_t n = 1000000) {
  const double lo = std::log(1e-10), hi = std::log(1e10);
  double best = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = std::exp(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1));
    best = std::min(best, milman_objective(v, w));
  }
  return best / D;
}

}  // namespace oracle
