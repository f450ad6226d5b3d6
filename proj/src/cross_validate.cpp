#include "sdc/cross_validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "sdc/errors.hpp"
#include "sdc/preprocess.hpp"

namespace sdc::eval {

namespace {

void check_fold_args(std::size_t n, int k) {
  if (k < 2) throw InvalidArgument("kfold: k must be >= 2");
  if (static_cast<std::size_t>(k) > n)
    throw InvalidArgument("kfold: k exceeds the number of rows");
}

MetricVector metrics_from(const ConfusionMatrix& cm, double roc, double seconds) {
  const BasicMetrics basics = basic_metrics(cm);
  MetricVector m;
  m.accuracy = basics.accuracy;
  m.roc_auc = roc;
  m.recall = basics.macro_recall;
  m.precision = basics.macro_precision;
  m.f_score = basics.macro_f_score;
  m.cks = cohen_kappa(cm);
  m.mcc = matthews(cm);
  m.wall_time_sec = seconds;
  return m;
}

}  // namespace

FoldPlan FoldPlan::make(std::size_t n, int k, std::uint64_t seed) {
  check_fold_args(n, k);
  numeric::Rng rng(numeric::mix_seed(seed, 0x666f6c64ull));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);

  FoldPlan plan;
  plan.k = k;
  plan.stratified = false;
  plan.fold_of.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    plan.fold_of[order[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
  return plan;
}

FoldPlan FoldPlan::make_stratified(const std::vector<int>& labels, int n_classes, int k,
                                   std::uint64_t seed) {
  check_fold_args(labels.size(), k);
  numeric::Rng rng(numeric::mix_seed(seed, 0x666f6c64ull));

  FoldPlan plan;
  plan.k = k;
  plan.stratified = true;
  plan.fold_of.assign(labels.size(), 0);

  std::size_t dealt = 0;
  for (int c = 0; c < n_classes; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == c) members.push_back(i);
    rng.shuffle(members);
    for (std::size_t j = 0; j < members.size(); ++j)
      plan.fold_of[members[j]] =
          static_cast<int>((dealt + j) % static_cast<std::size_t>(k));
    dealt += members.size();
  }
  return plan;
}

CvResult cross_validate(const numeric::Matrix& x, const std::vector<int>& labels,
                        int n_classes, models::ModelKind kind,
                        const models::ModelHyperparams& params, const FoldPlan& plan,
                        const PreprocessConfig& preprocess, int workers) {
  const std::size_t n = x.n_rows;
  if (labels.size() != n) throw InvalidArgument("cross_validate: row/label mismatch");
  if (plan.fold_of.size() != n)
    throw InvalidArgument("cross_validate: fold plan does not cover the table");

  CvResult result;
  result.pooled = ConfusionMatrix(n_classes);
  result.per_fold.resize(plan.k);
  result.oof_predictions.assign(n, -1);
  result.oof_scores = numeric::Matrix(n, n_classes, 0.0);
  result.evaluated.assign(n, 0);

  struct FoldOutput {
    std::vector<std::size_t> test_rows;
    std::vector<int> predictions;
    numeric::Matrix scores;
    double seconds = 0.0;
    bool skipped = false;
    bool has_scores = true;
  };
  std::vector<FoldOutput> outputs(plan.k);

  numeric::parallel_for(plan.k, workers, [&](std::size_t fold) {
    FoldOutput& out = outputs[fold];
    std::vector<std::size_t> train_rows;
    for (std::size_t i = 0; i < n; ++i) {
      if (plan.fold_of[i] == static_cast<int>(fold))
        out.test_rows.push_back(i);
      else
        train_rows.push_back(i);
    }
    if (out.test_rows.empty()) {
      out.skipped = true;
      return;
    }
    std::set<int> train_classes;
    for (std::size_t i : train_rows) train_classes.insert(labels[i]);
    if (train_classes.size() < 2) {
      out.skipped = true;  // single-class training split
      return;
    }

    numeric::Matrix train_x(train_rows.size(), x.n_cols);
    std::vector<int> train_y(train_rows.size());
    for (std::size_t r = 0; r < train_rows.size(); ++r) {
      std::copy(x.row(train_rows[r]).begin(), x.row(train_rows[r]).end(),
                train_x.row(r).begin());
      train_y[r] = labels[train_rows[r]];
    }
    numeric::Matrix test_x(out.test_rows.size(), x.n_cols);
    for (std::size_t r = 0; r < out.test_rows.size(); ++r)
      std::copy(x.row(out.test_rows[r]).begin(), x.row(out.test_rows[r]).end(),
                test_x.row(r).begin());

    if (preprocess.normalize) {
      const preprocess::MinMaxModel norm =
          preprocess::fit_minmax(train_x, preprocess.range_min, preprocess.range_max);
      train_x = preprocess::apply_minmax(norm, train_x);
      test_x = preprocess::apply_minmax(norm, test_x);
    }

    models::ModelHyperparams fold_params = params;
    fold_params.seed = numeric::mix_seed(
        params.seed, numeric::fnv1a(models::model_id(kind)) ^ (0xcf1dull + fold));

    const auto start = std::chrono::steady_clock::now();
    const auto model = models::train_model(kind, train_x, train_y, n_classes, fold_params);
    out.predictions.resize(out.test_rows.size());
    out.scores = numeric::Matrix(out.test_rows.size(), n_classes, 0.0);
    out.has_scores = model->has_scores();
    for (std::size_t r = 0; r < out.test_rows.size(); ++r) {
      out.predictions[r] = model->predict(test_x.row(r));
      if (out.has_scores) {
        const std::vector<double> s = model->scores(test_x.row(r));
        std::copy(s.begin(), s.end(), out.scores.row(r).begin());
      }
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                      .count();
  });

  // Fixed-order reduction keeps the result independent of scheduling.
  double total_seconds = 0.0;
  for (int fold = 0; fold < plan.k; ++fold) {
    const FoldOutput& out = outputs[fold];
    FoldMetrics& fm = result.per_fold[fold];
    if (out.skipped) {
      fm.skipped = true;
      result.any_fold_skipped = true;
      continue;
    }
    result.scores_available = result.scores_available && out.has_scores;
    total_seconds += out.seconds;

    std::vector<int> fold_truth(out.test_rows.size());
    for (std::size_t r = 0; r < out.test_rows.size(); ++r) {
      const std::size_t row = out.test_rows[r];
      fold_truth[r] = labels[row];
      result.oof_predictions[row] = out.predictions[r];
      result.evaluated[row] = 1;
      std::copy(out.scores.row(r).begin(), out.scores.row(r).end(),
                result.oof_scores.row(row).begin());
      result.pooled.add(labels[row], out.predictions[r]);
    }

    const ConfusionMatrix fold_cm =
        ConfusionMatrix::from_labels(fold_truth, out.predictions, n_classes);
    double fold_roc = 0.0;
    if (out.has_scores) {
      const RocResult roc = roc_auc_ovr(fold_truth, out.scores);
      fold_roc = roc.macro_auc;
    }
    fm.metrics = metrics_from(fold_cm, fold_roc, out.seconds);
  }

  if (result.pooled.total() == 0)
    throw TrainingError("cross_validate: every fold was skipped");

  std::vector<int> pooled_truth;
  std::vector<int> pooled_pred;
  pooled_truth.reserve(n);
  numeric::Matrix pooled_scores(
      static_cast<std::size_t>(
          std::count(result.evaluated.begin(), result.evaluated.end(), 1)),
      n_classes);
  std::size_t r = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!result.evaluated[i]) continue;
    pooled_truth.push_back(labels[i]);
    pooled_pred.push_back(result.oof_predictions[i]);
    std::copy(result.oof_scores.row(i).begin(), result.oof_scores.row(i).end(),
              pooled_scores.row(r).begin());
    ++r;
  }

  double pooled_roc = 0.0;
  if (result.scores_available) {
    const RocResult roc = roc_auc_ovr(pooled_truth, pooled_scores);
    pooled_roc = roc.macro_auc;
  }
  result.metrics = metrics_from(result.pooled, pooled_roc, total_seconds);
  return result;
}

}  // namespace sdc::eval
