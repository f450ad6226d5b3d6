#pragma once

#include <cstdint>
#include <vector>

#include "sdc/numeric.hpp"

namespace sdc::preprocess {

// Per-feature Max-Min statistics fitted on training data. Applying maps x
// affinely onto [new_min, new_max]; values outside the training range
// extrapolate. Constant features are flagged and map to new_min.
struct MinMaxModel {
  std::vector<double> min_value;
  std::vector<double> max_value;
  std::vector<std::uint8_t> degenerate;  // max == min
  double new_min = 0.0;
  double new_max = 1.0;

  std::size_t size() const { return min_value.size(); }
};

MinMaxModel fit_minmax(const numeric::Matrix& x, double new_min = 0.0, double new_max = 1.0);
numeric::Matrix apply_minmax(const MinMaxModel& model, const numeric::Matrix& x);

struct IqrFeature {
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double lower_fence = 0.0;
  double upper_fence = 0.0;
  std::size_t flagged = 0;
};

// Tukey-fence outlier masks per feature. Quantiles use linear interpolation
// of order statistics at p*(n-1). The mask is reporting output only; rows
// are never removed.
struct IqrReport {
  std::vector<IqrFeature> per_feature;      // size n_cols
  std::vector<std::uint8_t> mask;           // row-major n_rows x n_cols
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;

  bool flagged(std::size_t row, std::size_t col) const { return mask[row * n_cols + col] != 0; }
};

IqrReport iqr_flags(const numeric::Matrix& x);  // needs >= 4 rows

struct PcaModel {
  std::vector<double> mean;
  std::vector<double> eigenvalues;        // descending
  numeric::Matrix components;             // row i = eigenvector i
  std::vector<double> explained_ratio;    // sums to 1

  std::size_t dim() const { return mean.size(); }
};

// Covariance PCA: data centered by the mean, sample covariance (n-1),
// eigendecomposition sorted by descending eigenvalue. Reduction happens only
// when a caller projects with d < dim; the model itself always keeps the
// full basis and the explained-variance ratios.
PcaModel fit_pca(const numeric::Matrix& x);  // needs >= 2 rows
numeric::Matrix project_pca(const PcaModel& model, const numeric::Matrix& x, std::size_t d);
numeric::Matrix reconstruct_pca(const PcaModel& model, const numeric::Matrix& projected);

}  // namespace sdc::preprocess
