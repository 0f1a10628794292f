#include "needlekit/discrete_space.hpp"

#include <cmath>
#include <numeric>

#include "needlekit/error.hpp"

namespace needlekit {

namespace {

void check_weights(const std::vector<double>& w) {
  require(!w.empty(), "a discrete space needs at least one point");
  for (double x : w) require(std::isfinite(x) && x > 0.0, "weights must be positive and finite");
}

}  // namespace

DiscreteSpace DiscreteSpace::from_coordinates(std::vector<std::vector<double>> coords,
                                              std::vector<double> weights) {
  check_weights(weights);
  require(coords.size() == weights.size(), "need one coordinate row per weight");
  DiscreteSpace s;
  s.dim_ = coords.front().size();
  require(s.dim_ > 0, "coordinates must have positive dimension");
  s.coords_.reserve(coords.size() * s.dim_);
  for (const auto& row : coords) {
    require(row.size() == s.dim_, "coordinate rows differ in dimension");
    for (double x : row) {
      require(std::isfinite(x), "coordinates must be finite");
      s.coords_.push_back(x);
    }
  }
  s.weights_ = std::move(weights);
  return s;
}

DiscreteSpace DiscreteSpace::from_distances(std::vector<std::vector<double>> dist,
                                            std::vector<double> weights, double tol) {
  check_weights(weights);
  const std::size_t n = weights.size();
  require(dist.size() == n, "distance matrix must be n x n");
  DiscreteSpace s;
  s.dist_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    require(dist[i].size() == n, "distance matrix must be n x n");
    for (std::size_t j = 0; j < n; ++j) s.dist_[i * n + j] = dist[i][j];
  }
  for (std::size_t i = 0; i < n; ++i) {
    require(s.dist_[i * n + i] == 0.0, "distance matrix must have a zero diagonal");
    for (std::size_t j = 0; j < n; ++j) {
      const double dij = s.dist_[i * n + j];
      require(std::isfinite(dij), "distances must be finite");
      require(dij == s.dist_[j * n + i], "distance matrix must be symmetric");
      if (i != j) require(dij > 0.0, "distinct points must have positive distance");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dij = s.dist_[i * n + j];
      for (std::size_t k = 0; k < n; ++k) {
        const double via = s.dist_[i * n + k] + s.dist_[k * n + j];
        require(dij <= via + tol * std::max(1.0, via), "distance matrix violates the triangle inequality");
      }
    }
  }
  s.weights_ = std::move(weights);
  return s;
}

double DiscreteSpace::total_mass() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

double DiscreteSpace::distance(std::size_t i, std::size_t j) const {
  if (dim_ == 0) return dist_[i * size() + j];
  const double* a = coords_.data() + i * dim_;
  const double* b = coords_.data() + j * dim_;
  double acc = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) acc += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(acc);
}

DiscreteSpace DiscreteSpace::rescaled(double c) const {
  require(c > 0.0 && std::isfinite(c), "scale factor must be positive");
  DiscreteSpace s = *this;
  for (auto& x : s.coords_) x *= c;
  for (auto& x : s.dist_) x *= c;
  return s;
}

}  // namespace needlekit
