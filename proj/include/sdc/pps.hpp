#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdc/numeric.hpp"

namespace sdc::preprocess {

enum class PpsMetric { MeanAbsoluteError, WeightedFScore };

struct PpsCell {
  double score = 0.0;  // in [0, 1]
  PpsMetric metric = PpsMetric::MeanAbsoluteError;
  bool degenerate_target = false;  // constant target; score fixed to 0
};

struct PpsReport {
  std::vector<std::string> names;
  std::vector<PpsCell> cells;  // row-major names.size() x names.size(); row = predictor

  const PpsCell& at(std::size_t predictor, std::size_t target) const {
    return cells[predictor * names.size() + target];
  }
};

struct PpsOptions {
  int cv_folds = 4;
  std::uint64_t seed = 42;
  int max_depth = 4;
  int min_leaf = 3;
};

// Cross-validated single-feature decision-tree predictive power for every
// (predictor, target) pair. Numeric targets score
// max(0, 1 - MAE_model / MAE_baseline) against the training-median
// predictor; categorical targets score the weighted F lift over the
// majority-class baseline. Diagonal cells are 1 by definition.
PpsReport pps_matrix(const numeric::Matrix& x, const std::vector<std::string>& names,
                     const std::vector<std::uint8_t>& categorical, const PpsOptions& options);

}  // namespace sdc::preprocess
