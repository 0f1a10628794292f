#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "needlekit/discrete_space.hpp"
#include "needlekit/pl_concave.hpp"

namespace needlekit {

enum class ModelKind { log_linear, truncated_exp, tent, product_strip, gaussian_like_tent };

struct ModelSpec {
  ModelKind kind = ModelKind::log_linear;
  double h = 1.0;        ///< log_linear, product_strip
  double H = 1.0;        ///< truncated_exp
  double D = 10.0;       ///< truncated_exp
  double a = 1.0;        ///< tent left slope
  double b = 1.0;        ///< tent right slope (W decreases with slope -b)
  std::size_t n_rows = 10;
  std::size_t n_cols = 200;
  double spacing = 0.05;
  std::optional<double> omega_cut;  ///< product_strip: Ω = {x <= cut}; default mid-strip
};

const char* model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);

ModelSpec log_linear_spec(double h);
ModelSpec truncated_exp_spec(double H, double D);
ModelSpec tent_spec(double a, double b);
ModelSpec gaussian_like_tent_spec();
ModelSpec product_strip_spec(double h, std::size_t n_rows, std::size_t n_cols, double spacing);

/// Known values of the 1-D models.
struct ModelTruth {
  double h = 0.0;
  std::optional<double> cheeger;  ///< infinite-mass models only
  bool finite_mass = false;
};

PLConcave build_1d(const ModelSpec& spec);
ModelTruth model_truth(const ModelSpec& spec);

struct StripModel {
  DiscreteSpace space;
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  double spacing = 0.0;
  double h = 0.0;
  std::vector<std::vector<std::size_t>> rows;  ///< ground-truth needles, ordered by column
  std::vector<bool> omega;                     ///< half strip x <= cut
  double cut = 0.0;
  double omega_mass = 0.0;           ///< discrete m(Ω)
  double omega_mass_closed = 0.0;    ///< n_rows (e^{h cut} - 1) / h
  double e_discrete = 0.0;           ///< n_rows e^{h e} = h m(Ω)
  std::size_t center = 0;
  double radius = 0.0;               ///< ball covering the whole strip
};

/// Points (i spacing, j) with weight spacing e^{h i spacing}, i < n_cols, j < n_rows.
StripModel build_strip(const ModelSpec& spec);

/// Tilted control set: x <= cut + tilt (j - (n_rows - 1)/2).
std::vector<bool> wedge_mask(const StripModel& strip, double tilt);

}  // namespace needlekit
