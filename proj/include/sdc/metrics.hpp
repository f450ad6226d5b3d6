#pragma once

#include <cstdint>
#include <vector>

#include "sdc/numeric.hpp"

namespace sdc::eval {

// Square count matrix: rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(int n_classes)
      : n_(n_classes), counts_(static_cast<std::size_t>(n_classes) * n_classes, 0) {}

  static ConfusionMatrix from_labels(const std::vector<int>& truth,
                                     const std::vector<int>& predicted, int n_classes);

  int n_classes() const { return n_; }
  std::int64_t at(int true_class, int predicted_class) const {
    return counts_[static_cast<std::size_t>(true_class) * n_ + predicted_class];
  }
  void add(int true_class, int predicted_class, std::int64_t count = 1);
  std::int64_t total() const;
  std::int64_t trace() const;
  std::int64_t row_sum(int true_class) const;
  std::int64_t col_sum(int predicted_class) const;

 private:
  int n_ = 0;
  std::vector<std::int64_t> counts_;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  bool precision_undefined = false;  // 0/0, reported as 0
  bool recall_undefined = false;
};

struct BasicMetrics {
  double accuracy = 0.0;
  std::vector<ClassMetrics> per_class;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f_score = 0.0;
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_f_score = 0.0;
};

// Accuracy plus one-vs-rest precision/recall/F per class with macro (and
// support-weighted) averages. Undefined 0/0 ratios are reported as 0 and
// flagged on the class entry.
BasicMetrics basic_metrics(const ConfusionMatrix& cm);

// (p_o - p_e) / (1 - p_e). The degenerate p_e = 1 case is defined as 1 for
// perfect agreement and 0 otherwise, with *degenerate set when provided.
double cohen_kappa(const ConfusionMatrix& cm, bool* degenerate = nullptr);

// Binary Matthews coefficient with the zero-factor convention, and the
// multi-category generalization that reduces to it exactly for 2 classes.
double matthews_binary(const ConfusionMatrix& cm);
double matthews(const ConfusionMatrix& cm);

// Rank-sum AUC for one class against the rest; midranks make score ties
// count half, matching the trapezoid over the ROC steps.
double auc_binary(const std::vector<int>& truth01, const std::vector<double>& scores);

struct RocResult {
  double macro_auc = 0.0;                // over classes present in the truth
  std::vector<double> per_class;         // 0 for skipped classes
  std::vector<std::uint8_t> skipped;     // class absent from truth
};

RocResult roc_auc_ovr(const std::vector<int>& truth, const numeric::Matrix& scores);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;
};

// Stepwise ROC points from (0,0) to (1,1), one step per distinct score.
std::vector<RocPoint> roc_curve(const std::vector<int>& truth01,
                                const std::vector<double>& scores);

struct ClassErrorRow {
  int true_class = 0;
  std::int64_t support = 0;
  std::vector<std::int64_t> predicted_into;
};

// Per-true-class stacked counts (the plot-ready class prediction error data).
std::vector<ClassErrorRow> class_prediction_error(const ConfusionMatrix& cm);

}  // namespace sdc::eval
