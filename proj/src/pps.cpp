#include "sdc/pps.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "sdc/baselines.hpp"
#include "sdc/cross_validate.hpp"
#include "sdc/errors.hpp"

namespace sdc::preprocess {

namespace {

// Depth-limited regression stump tree on one predictor; squared-error splits,
// mean leaves.
class RegressionTree {
 public:
  RegressionTree(const std::vector<double>& x, const std::vector<double>& y, int max_depth,
                 int min_leaf) {
    std::vector<std::size_t> order(x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> xs(x.size()), ys(x.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      xs[i] = x[order[i]];
      ys[i] = y[order[i]];
    }
    build(xs, ys, 0, xs.size(), 0, max_depth, static_cast<std::size_t>(min_leaf));
  }

  double predict(double x) const {
    std::size_t i = 0;
    for (;;) {
      const Node& node = nodes_[i];
      if (node.left < 0) return node.value;
      i = static_cast<std::size_t>(x <= node.threshold ? node.left : node.right);
    }
  }

 private:
  struct Node {
    double threshold = 0.0;
    double value = 0.0;
    int left = -1;
    int right = -1;
  };

  // Builds over the sorted slice [lo, hi); returns the node index.
  int build(const std::vector<double>& xs, const std::vector<double>& ys, std::size_t lo,
            std::size_t hi, int depth, int max_depth, std::size_t min_leaf) {
    const int index = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    const std::size_t n = hi - lo;

    double sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) sum += ys[i];
    nodes_[index].value = sum / static_cast<double>(n);

    if (depth >= max_depth || n < 2 * min_leaf) return index;

    // Prefix sums of y and y^2 give O(1) squared-error per candidate split.
    double best_sse = -1.0;
    std::size_t best_cut = 0;
    double left_sum = 0.0, left_sq = 0.0;
    double total_sq = 0.0;
    for (std::size_t i = lo; i < hi; ++i) total_sq += ys[i] * ys[i];

    for (std::size_t i = lo; i + 1 < hi; ++i) {
      left_sum += ys[i];
      left_sq += ys[i] * ys[i];
      if (xs[i] == xs[i + 1]) continue;
      const std::size_t left_n = i + 1 - lo;
      const std::size_t right_n = hi - i - 1;
      if (left_n < min_leaf || right_n < min_leaf) continue;
      const double right_sum = sum - left_sum;
      const double right_sq = total_sq - left_sq;
      const double sse = (left_sq - left_sum * left_sum / static_cast<double>(left_n)) +
                         (right_sq - right_sum * right_sum / static_cast<double>(right_n));
      if (best_sse < 0.0 || sse < best_sse) {
        best_sse = sse;
        best_cut = i;
      }
    }
    if (best_sse < 0.0) return index;

    const double parent_sse = total_sq - sum * sum / static_cast<double>(n);
    if (parent_sse - best_sse <= 1e-12 * std::max(1.0, parent_sse)) return index;

    nodes_[index].threshold = xs[best_cut] + 0.5 * (xs[best_cut + 1] - xs[best_cut]);
    const int left = build(xs, ys, lo, best_cut + 1, depth + 1, max_depth, min_leaf);
    const int right = build(xs, ys, best_cut + 1, hi, depth + 1, max_depth, min_leaf);
    nodes_[index].left = left;
    nodes_[index].right = right;
    return index;
  }

  std::vector<Node> nodes_;
};

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return numeric::quantile_sorted(values, 0.5);
}

PpsCell numeric_cell(const std::vector<double>& predictor, const std::vector<double>& target,
                     const eval::FoldPlan& plan, const PpsOptions& options) {
  PpsCell cell;
  cell.metric = PpsMetric::MeanAbsoluteError;

  double model_abs = 0.0, baseline_abs = 0.0;
  std::size_t count = 0;
  for (int fold = 0; fold < plan.k; ++fold) {
    std::vector<double> train_x, train_y;
    std::vector<std::size_t> test_rows;
    for (std::size_t i = 0; i < predictor.size(); ++i) {
      if (plan.fold_of[i] == fold) {
        test_rows.push_back(i);
      } else {
        train_x.push_back(predictor[i]);
        train_y.push_back(target[i]);
      }
    }
    if (test_rows.empty() || train_y.empty()) continue;
    const RegressionTree tree(train_x, train_y, options.max_depth, options.min_leaf);
    const double median = median_of(train_y);
    for (std::size_t i : test_rows) {
      model_abs += std::abs(tree.predict(predictor[i]) - target[i]);
      baseline_abs += std::abs(median - target[i]);
      ++count;
    }
  }
  if (count == 0 || baseline_abs <= 0.0) {
    cell.degenerate_target = true;
    cell.score = 0.0;
    return cell;
  }
  cell.score = std::max(0.0, 1.0 - model_abs / baseline_abs);
  return cell;
}

PpsCell categorical_cell(const std::vector<double>& predictor, const std::vector<double>& target,
                         const eval::FoldPlan& plan, const PpsOptions& options) {
  PpsCell cell;
  cell.metric = PpsMetric::WeightedFScore;

  // Compact the target values into class ids.
  std::map<double, int> class_of;
  for (double t : target) class_of.emplace(t, 0);
  int next = 0;
  for (auto& [value, id] : class_of) {
    (void)value;
    id = next++;
  }
  const int n_classes = next;
  if (n_classes < 2) {
    cell.degenerate_target = true;
    cell.score = 0.0;
    return cell;
  }

  std::vector<int> labels(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) labels[i] = class_of[target[i]];

  std::vector<int> pooled_truth, pooled_model, pooled_naive;
  for (int fold = 0; fold < plan.k; ++fold) {
    numeric::Matrix train_x(0, 1);
    std::vector<double> train_vals;
    std::vector<int> train_y;
    std::vector<std::size_t> test_rows;
    for (std::size_t i = 0; i < predictor.size(); ++i) {
      if (plan.fold_of[i] == fold) {
        test_rows.push_back(i);
      } else {
        train_vals.push_back(predictor[i]);
        train_y.push_back(labels[i]);
      }
    }
    if (test_rows.empty() || train_y.empty()) continue;
    std::set<int> seen(train_y.begin(), train_y.end());
    if (seen.size() < 2) continue;

    train_x = numeric::Matrix(train_vals.size(), 1);
    for (std::size_t i = 0; i < train_vals.size(); ++i) train_x.at(i, 0) = train_vals[i];
    const models::CartClassifier tree = models::CartClassifier::train(
        train_x, train_y, n_classes, options.max_depth, options.min_leaf);

    std::vector<std::size_t> counts(n_classes, 0);
    for (int y : train_y) counts[y]++;
    int majority = 0;
    for (int c = 1; c < n_classes; ++c)
      if (counts[c] > counts[majority]) majority = c;

    for (std::size_t i : test_rows) {
      const double value = predictor[i];
      pooled_truth.push_back(labels[i]);
      pooled_model.push_back(tree.predict(std::span<const double>(&value, 1)));
      pooled_naive.push_back(majority);
    }
  }
  if (pooled_truth.empty()) {
    cell.degenerate_target = true;
    cell.score = 0.0;
    return cell;
  }

  const auto weighted_f = [&](const std::vector<int>& predicted) {
    const eval::ConfusionMatrix cm =
        eval::ConfusionMatrix::from_labels(pooled_truth, predicted, n_classes);
    return eval::basic_metrics(cm).weighted_f_score;
  };
  const double f_model = weighted_f(pooled_model);
  const double f_naive = weighted_f(pooled_naive);
  if (f_naive >= 1.0) {
    cell.degenerate_target = true;
    cell.score = 0.0;
    return cell;
  }
  cell.score = std::max(0.0, (f_model - f_naive) / (1.0 - f_naive));
  return cell;
}

}  // namespace

PpsReport pps_matrix(const numeric::Matrix& x, const std::vector<std::string>& names,
                     const std::vector<std::uint8_t>& categorical, const PpsOptions& options) {
  if (x.n_rows < 30) throw InvalidArgument("pps_matrix: need at least 30 rows");
  if (options.cv_folds < 2) throw InvalidArgument("pps_matrix: cv_folds must be >= 2");
  if (names.size() != x.n_cols || categorical.size() != x.n_cols)
    throw InvalidArgument("pps_matrix: names/flags do not match the column count");

  const eval::FoldPlan plan = eval::FoldPlan::make(x.n_rows, options.cv_folds, options.seed);

  PpsReport report;
  report.names = names;
  report.cells.resize(names.size() * names.size());

  std::vector<double> predictor(x.n_rows), target(x.n_rows);
  for (std::size_t t = 0; t < x.n_cols; ++t) {
    for (std::size_t i = 0; i < x.n_rows; ++i) target[i] = x.at(i, t);
    for (std::size_t p = 0; p < x.n_cols; ++p) {
      PpsCell& cell = report.cells[p * names.size() + t];
      if (p == t) {
        cell.score = 1.0;
        cell.metric = categorical[t] ? PpsMetric::WeightedFScore : PpsMetric::MeanAbsoluteError;
        continue;
      }
      for (std::size_t i = 0; i < x.n_rows; ++i) predictor[i] = x.at(i, p);
      cell = categorical[t] ? categorical_cell(predictor, target, plan, options)
                            : numeric_cell(predictor, target, plan, options);
    }
  }
  return report;
}

}  // namespace sdc::preprocess
