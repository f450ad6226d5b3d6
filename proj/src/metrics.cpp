#include "sdc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdc/errors.hpp"

namespace sdc::eval {

ConfusionMatrix ConfusionMatrix::from_labels(const std::vector<int>& truth,
                                             const std::vector<int>& predicted,
                                             int n_classes) {
  if (truth.size() != predicted.size())
    throw InvalidArgument("confusion: label sequences differ in length");
  if (truth.empty()) throw InvalidArgument("confusion: empty inputs");
  ConfusionMatrix cm(n_classes);
  for (std::size_t i = 0; i < truth.size(); ++i) cm.add(truth[i], predicted[i]);
  return cm;
}

void ConfusionMatrix::add(int true_class, int predicted_class, std::int64_t count) {
  if (true_class < 0 || true_class >= n_ || predicted_class < 0 || predicted_class >= n_)
    throw InvalidArgument("confusion: label outside the class index");
  counts_[static_cast<std::size_t>(true_class) * n_ + predicted_class] += count;
}

std::int64_t ConfusionMatrix::total() const {
  std::int64_t t = 0;
  for (std::int64_t c : counts_) t += c;
  return t;
}

std::int64_t ConfusionMatrix::trace() const {
  std::int64_t t = 0;
  for (int i = 0; i < n_; ++i) t += at(i, i);
  return t;
}

std::int64_t ConfusionMatrix::row_sum(int true_class) const {
  std::int64_t t = 0;
  for (int j = 0; j < n_; ++j) t += at(true_class, j);
  return t;
}

std::int64_t ConfusionMatrix::col_sum(int predicted_class) const {
  std::int64_t t = 0;
  for (int i = 0; i < n_; ++i) t += at(i, predicted_class);
  return t;
}

BasicMetrics basic_metrics(const ConfusionMatrix& cm) {
  const std::int64_t total = cm.total();
  if (total == 0) throw InvalidArgument("basic_metrics: all-zero confusion matrix");

  BasicMetrics m;
  m.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
  m.per_class.resize(cm.n_classes());

  for (int c = 0; c < cm.n_classes(); ++c) {
    ClassMetrics& cl = m.per_class[c];
    const std::int64_t tp = cm.at(c, c);
    const std::int64_t fp = cm.col_sum(c) - tp;
    const std::int64_t fn = cm.row_sum(c) - tp;
    if (tp + fp == 0) {
      cl.precision = 0.0;
      cl.precision_undefined = true;
    } else {
      cl.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    }
    if (tp + fn == 0) {
      cl.recall = 0.0;
      cl.recall_undefined = true;
    } else {
      cl.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    }
    const double denom = 2.0 * static_cast<double>(tp) + static_cast<double>(fp + fn);
    cl.f_score = denom > 0.0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;
  }

  const double n = static_cast<double>(cm.n_classes());
  for (int c = 0; c < cm.n_classes(); ++c) {
    const ClassMetrics& cl = m.per_class[c];
    m.macro_precision += cl.precision / n;
    m.macro_recall += cl.recall / n;
    m.macro_f_score += cl.f_score / n;
    const double w = static_cast<double>(cm.row_sum(c)) / static_cast<double>(total);
    m.weighted_precision += w * cl.precision;
    m.weighted_recall += w * cl.recall;
    m.weighted_f_score += w * cl.f_score;
  }
  return m;
}

double cohen_kappa(const ConfusionMatrix& cm, bool* degenerate) {
  const std::int64_t total = cm.total();
  if (total == 0) throw InvalidArgument("cohen_kappa: all-zero confusion matrix");
  if (degenerate) *degenerate = false;

  const double n = static_cast<double>(total);
  const double p_o = static_cast<double>(cm.trace()) / n;
  double p_e = 0.0;
  for (int c = 0; c < cm.n_classes(); ++c)
    p_e += static_cast<double>(cm.row_sum(c)) * static_cast<double>(cm.col_sum(c)) / (n * n);

  if (p_e >= 1.0) {
    if (degenerate) *degenerate = true;
    return p_o >= 1.0 ? 1.0 : 0.0;
  }
  return (p_o - p_e) / (1.0 - p_e);
}

double matthews_binary(const ConfusionMatrix& cm) {
  if (cm.n_classes() != 2) throw InvalidArgument("matthews_binary: needs a 2x2 matrix");
  if (cm.total() == 0) throw InvalidArgument("matthews_binary: all-zero confusion matrix");
  // Class 1 is the positive class: TP = f11, TN = f00.
  const double tp = static_cast<double>(cm.at(1, 1));
  const double tn = static_cast<double>(cm.at(0, 0));
  const double fp = static_cast<double>(cm.at(0, 1));
  const double fn = static_cast<double>(cm.at(1, 0));
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denom <= 0.0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(denom);
}

double matthews(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw InvalidArgument("matthews: all-zero confusion matrix");
  if (cm.n_classes() == 2) return matthews_binary(cm);

  const double s = static_cast<double>(cm.total());
  const double c = static_cast<double>(cm.trace());
  double dot_pt = 0.0, p2 = 0.0, t2 = 0.0;
  for (int k = 0; k < cm.n_classes(); ++k) {
    const double pk = static_cast<double>(cm.col_sum(k));
    const double tk = static_cast<double>(cm.row_sum(k));
    dot_pt += pk * tk;
    p2 += pk * pk;
    t2 += tk * tk;
  }
  const double denom = std::sqrt(s * s - p2) * std::sqrt(s * s - t2);
  if (denom <= 0.0) return 0.0;
  return (c * s - dot_pt) / denom;
}

double auc_binary(const std::vector<int>& truth01, const std::vector<double>& scores) {
  if (truth01.size() != scores.size())
    throw InvalidArgument("auc: truth/score length mismatch");
  const std::size_t n = truth01.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double rank_sum_pos = 0.0;
  std::size_t n_pos = 0, n_neg = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k) {
      if (truth01[order[k]] == 1) {
        rank_sum_pos += midrank;
        ++n_pos;
      } else {
        ++n_neg;
      }
    }
    i = j;
  }
  if (n_pos == 0 || n_neg == 0)
    throw InvalidArgument("auc: needs both positive and negative examples");
  const double np = static_cast<double>(n_pos);
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * static_cast<double>(n_neg));
}

RocResult roc_auc_ovr(const std::vector<int>& truth, const numeric::Matrix& scores) {
  if (truth.size() != scores.n_rows)
    throw InvalidArgument("roc_auc: truth/score row mismatch");
  const int n_classes = static_cast<int>(scores.n_cols);

  RocResult result;
  result.per_class.assign(n_classes, 0.0);
  result.skipped.assign(n_classes, 0);

  std::vector<int> truth01(truth.size());
  std::vector<double> class_scores(truth.size());
  int counted = 0;
  for (int c = 0; c < n_classes; ++c) {
    std::size_t pos = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      truth01[i] = truth[i] == c ? 1 : 0;
      class_scores[i] = scores.at(i, c);
      pos += truth01[i];
    }
    if (pos == 0 || pos == truth.size()) {
      result.skipped[c] = 1;  // class absent from the truth (or the rest is)
      continue;
    }
    result.per_class[c] = auc_binary(truth01, class_scores);
    result.macro_auc += result.per_class[c];
    ++counted;
  }
  result.macro_auc = counted > 0 ? result.macro_auc / counted : 0.0;
  return result;
}

std::vector<RocPoint> roc_curve(const std::vector<int>& truth01,
                                const std::vector<double>& scores) {
  if (truth01.size() != scores.size())
    throw InvalidArgument("roc_curve: truth/score length mismatch");
  std::size_t n_pos = 0, n_neg = 0;
  for (int t : truth01) (t == 1 ? n_pos : n_neg)++;
  if (n_pos == 0 || n_neg == 0)
    throw InvalidArgument("roc_curve: needs both positive and negative examples");

  std::vector<std::size_t> order(truth01.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::vector<RocPoint> points;
  points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      (truth01[order[i]] == 1 ? tp : fp)++;
      ++i;
    }
    points.push_back({static_cast<double>(fp) / static_cast<double>(n_neg),
                      static_cast<double>(tp) / static_cast<double>(n_pos), s});
  }
  return points;
}

std::vector<ClassErrorRow> class_prediction_error(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw InvalidArgument("class_prediction_error: all-zero matrix");
  std::vector<ClassErrorRow> rows(cm.n_classes());
  for (int c = 0; c < cm.n_classes(); ++c) {
    rows[c].true_class = c;
    rows[c].support = cm.row_sum(c);
    rows[c].predicted_into.resize(cm.n_classes());
    for (int j = 0; j < cm.n_classes(); ++j) rows[c].predicted_into[j] = cm.at(c, j);
  }
  return rows;
}

}  // namespace sdc::eval
