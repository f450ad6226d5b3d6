#pragma once

#include <cstdint>
#include <vector>

#include "sdc/classifier.hpp"
#include "sdc/metrics.hpp"
#include "sdc/numeric.hpp"

namespace sdc::eval {

// Seeded assignment of every row index to exactly one test fold. Stratified
// plans shuffle and deal round-robin within each class so per-fold class
// counts differ from balance by at most one sample per class.
struct FoldPlan {
  int k = 0;
  std::vector<int> fold_of;  // size n
  bool stratified = false;

  static FoldPlan make(std::size_t n, int k, std::uint64_t seed);
  static FoldPlan make_stratified(const std::vector<int>& labels, int n_classes, int k,
                                  std::uint64_t seed);
};

struct PreprocessConfig {
  bool normalize = true;  // Max-Min fitted on the training folds only
  double range_min = 0.0;
  double range_max = 1.0;
};

struct MetricVector {
  double accuracy = 0.0;
  double roc_auc = 0.0;
  double recall = 0.0;     // unweighted macro
  double precision = 0.0;  // unweighted macro
  double f_score = 0.0;    // unweighted macro
  double cks = 0.0;
  double mcc = 0.0;
  double wall_time_sec = 0.0;
};

struct FoldMetrics {
  MetricVector metrics;
  bool skipped = false;  // training split held a single class
};

struct CvResult {
  MetricVector metrics;       // on the pooled out-of-fold predictions
  ConfusionMatrix pooled;
  std::vector<FoldMetrics> per_fold;
  std::vector<int> oof_predictions;        // -1 where not evaluated
  numeric::Matrix oof_scores;              // n x n_classes
  std::vector<std::uint8_t> evaluated;     // per row
  bool any_fold_skipped = false;
  bool scores_available = true;
};

// Per fold: fit normalization on the training split, apply to both splits,
// train, predict the test split. Metrics come from the pooled out-of-fold
// confusion matrix; ROC is the macro one-vs-rest AUC over pooled out-of-fold
// scores. Results do not depend on the worker count.
CvResult cross_validate(const numeric::Matrix& x, const std::vector<int>& labels,
                        int n_classes, models::ModelKind kind,
                        const models::ModelHyperparams& params, const FoldPlan& plan,
                        const PreprocessConfig& preprocess, int workers = 1);

}  // namespace sdc::eval
