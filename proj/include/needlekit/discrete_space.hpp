#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace needlekit {

/// Finite weighted metric space: points either embedded in R^d (Euclidean
/// metric) or given by an explicit distance matrix.
class DiscreteSpace {
 public:
  DiscreteSpace() = default;  ///< empty space
  static DiscreteSpace from_coordinates(std::vector<std::vector<double>> coords,
                                        std::vector<double> weights);
  /// Checks symmetry, zero diagonal, positivity and the triangle inequality
  /// up to a relative tolerance.
  static DiscreteSpace from_distances(std::vector<std::vector<double>> dist,
                                      std::vector<double> weights, double tol = 1e-9);

  std::size_t size() const { return weights_.size(); }
  bool embedded() const { return dim_ > 0; }
  std::size_t dimension() const { return dim_; }
  std::span<const double> coords(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  double total_mass() const;
  double distance(std::size_t i, std::size_t j) const;

  /// Same points and weights with every distance multiplied by c > 0.
  DiscreteSpace rescaled(double c) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;  // row-major n x dim
  std::vector<double> dist_;    // n x n when not embedded
  std::vector<double> weights_;
};

}  // namespace needlekit
