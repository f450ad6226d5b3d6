#include "sdc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

#include "sdc/errors.hpp"

namespace sdc::models {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835607;

void check_training_input(const numeric::Matrix& x, const std::vector<int>& labels,
                          int n_classes) {
  if (x.n_rows != labels.size())
    throw InvalidArgument("baseline_train: row/label count mismatch");
  if (x.n_rows == 0) throw InvalidArgument("baseline_train: empty training set");
  if (n_classes < 2) throw InvalidArgument("baseline_train: need >= 2 classes");
  for (int c : labels)
    if (c < 0 || c >= n_classes) throw InvalidArgument("baseline_train: label out of range");
}

int argmax_lowest(const std::vector<double>& v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

std::vector<double> softmax(const std::vector<double>& log_values) {
  std::vector<double> out(log_values.size(), 0.0);
  double max_log = -std::numeric_limits<double>::infinity();
  for (double v : log_values) max_log = std::max(max_log, v);
  if (!std::isfinite(max_log)) return out;
  double sum = 0.0;
  for (std::size_t i = 0; i < log_values.size(); ++i) {
    out[i] = std::isfinite(log_values[i]) ? std::exp(log_values[i] - max_log) : 0.0;
    sum += out[i];
  }
  if (sum > 0.0)
    for (double& v : out) v /= sum;
  return out;
}

void write_matrix(std::ostream& out, const numeric::Matrix& m) {
  out << m.n_rows << ' ' << m.n_cols << '\n';
  for (std::size_t i = 0; i < m.n_rows; ++i) {
    for (std::size_t j = 0; j < m.n_cols; ++j) {
      if (j) out << ' ';
      out << numeric::format_g17(m.at(i, j));
    }
    out << '\n';
  }
}

numeric::Matrix read_matrix(std::istream& in) {
  std::size_t r = 0, c = 0;
  in >> r >> c;
  numeric::Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) in >> m.at(i, j);
  if (!in) throw ParseError("model file: truncated matrix block");
  return m;
}

void expect_token(std::istream& in, const char* expected) {
  std::string tok;
  in >> tok;
  if (tok != expected)
    throw ParseError(std::string("model file: expected '") + expected + "', found '" +
                     tok + "'");
}

// Symmetric inverse through the eigendecomposition, with the ridge fallback
// for singular input. Returns the precision matrix and log-determinant of
// the (possibly regularized) covariance.
struct InverseResult {
  numeric::Matrix precision;
  double log_det = 0.0;
  bool regularized = false;
};

InverseResult invert_covariance(numeric::Matrix cov) {
  const std::size_t d = cov.n_rows;
  InverseResult result;

  for (int attempt = 0; attempt < 2; ++attempt) {
    const numeric::SymmetricEigen eig = numeric::eigen_symmetric(cov);
    const double max_ev = eig.values.empty() ? 0.0 : std::max(eig.values.front(), 0.0);
    const double floor = std::max(max_ev * 1e-10, 1e-300);
    const bool singular = eig.values.empty() || eig.values.back() <= floor;
    if (singular && attempt == 0) {
      double trace = 0.0;
      for (std::size_t i = 0; i < d; ++i) trace += cov.at(i, i);
      const double ridge = 1e-6 * std::max(trace, 1e-12) / static_cast<double>(d);
      for (std::size_t i = 0; i < d; ++i) cov.at(i, i) += ridge;
      result.regularized = true;
      continue;
    }
    if (singular)
      throw NumericError("covariance is singular even after regularization");

    result.precision = numeric::Matrix(d, d, 0.0);
    result.log_det = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      result.log_det += std::log(eig.values[k]);
      const double inv = 1.0 / eig.values[k];
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          result.precision.at(i, j) += inv * eig.vectors.at(k, i) * eig.vectors.at(k, j);
    }
    return result;
  }
  throw NumericError("unreachable");
}

double quadratic_form(const numeric::Matrix& m, std::span<const double> v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < m.n_rows; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m.n_cols; ++j) row += m.at(i, j) * v[j];
    acc += v[i] * row;
  }
  return acc;
}

}  // namespace

// ---------------------------------------------------------------------------
// k-nearest neighbors

KnnClassifier KnnClassifier::train(const numeric::Matrix& x, const std::vector<int>& labels,
                                   int n_classes, int k) {
  check_training_input(x, labels, n_classes);
  if (k < 1) throw InvalidArgument("knn: k must be >= 1");
  KnnClassifier model;
  model.train_x_ = x;
  model.train_y_ = labels;
  model.k_ = k;
  model.n_classes_ = n_classes;
  return model;
}

std::vector<double> KnnClassifier::scores(std::span<const double> x) const {
  if (x.size() != train_x_.n_cols) throw InvalidArgument("knn: dimension mismatch");
  const std::size_t n = train_x_.n_rows;
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(k_), n);

  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d2 = 0.0;
    const auto row = train_x_.row(i);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double d = row[j] - x[j];
      d2 += d * d;
    }
    dist[i] = {d2, i};
  }
  std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1),
                   dist.end());
  std::sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k));

  std::vector<double> votes(n_classes_, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    votes[train_y_[dist[i].second]] += 1.0 / static_cast<double>(k);
  return votes;
}

int KnnClassifier::predict(std::span<const double> x) const {
  return argmax_lowest(scores(x));
}

void KnnClassifier::save(std::ostream& out) const {
  out << "knn\nclasses " << n_classes_ << " k " << k_ << '\n';
  write_matrix(out, train_x_);
  for (std::size_t i = 0; i < train_y_.size(); ++i)
    out << train_y_[i] << (i + 1 == train_y_.size() ? '\n' : ' ');
}

KnnClassifier KnnClassifier::load(std::istream& in) {
  KnnClassifier model;
  expect_token(in, "classes");
  in >> model.n_classes_;
  expect_token(in, "k");
  in >> model.k_;
  model.train_x_ = read_matrix(in);
  model.train_y_.resize(model.train_x_.n_rows);
  for (auto& y : model.train_y_) in >> y;
  if (!in) throw ParseError("model file: truncated knn section");
  return model;
}

// ---------------------------------------------------------------------------
// Gaussian naive Bayes

GaussianNbClassifier GaussianNbClassifier::train(const numeric::Matrix& x,
                                                 const std::vector<int>& labels,
                                                 int n_classes, double variance_floor) {
  check_training_input(x, labels, n_classes);
  if (!(variance_floor > 0.0)) throw InvalidArgument("gaussian-nb: variance floor must be > 0");

  GaussianNbClassifier model;
  model.n_classes_ = n_classes;
  const std::size_t d = x.n_cols;
  model.means_ = numeric::Matrix(n_classes, d, 0.0);
  model.variances_ = numeric::Matrix(n_classes, d, 0.0);
  model.counts_.assign(n_classes, 0);
  model.log_prior_.assign(n_classes, -std::numeric_limits<double>::infinity());

  for (std::size_t i = 0; i < x.n_rows; ++i) {
    const int c = labels[i];
    model.counts_[c]++;
    for (std::size_t j = 0; j < d; ++j) model.means_.at(c, j) += x.at(i, j);
  }
  for (int c = 0; c < n_classes; ++c) {
    if (model.counts_[c] == 0) continue;
    for (std::size_t j = 0; j < d; ++j)
      model.means_.at(c, j) /= static_cast<double>(model.counts_[c]);
    model.log_prior_[c] = std::log(static_cast<double>(model.counts_[c]) /
                                   static_cast<double>(x.n_rows));
  }
  for (std::size_t i = 0; i < x.n_rows; ++i) {
    const int c = labels[i];
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = x.at(i, j) - model.means_.at(c, j);
      model.variances_.at(c, j) += diff * diff;
    }
  }
  for (int c = 0; c < n_classes; ++c) {
    if (model.counts_[c] == 0) continue;
    for (std::size_t j = 0; j < d; ++j) {
      double v = model.variances_.at(c, j) / static_cast<double>(model.counts_[c]);
      model.variances_.at(c, j) = std::max(v, variance_floor);
    }
  }
  return model;
}

std::vector<double> GaussianNbClassifier::log_joint(std::span<const double> x) const {
  if (x.size() != means_.n_cols) throw InvalidArgument("gaussian-nb: dimension mismatch");
  std::vector<double> out(n_classes_, -std::numeric_limits<double>::infinity());
  for (int c = 0; c < n_classes_; ++c) {
    if (counts_[c] == 0) continue;
    double log_like = log_prior_[c];
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double var = variances_.at(c, j);
      const double diff = x[j] - means_.at(c, j);
      log_like += -0.5 * (kLogTwoPi + std::log(var)) - diff * diff / (2.0 * var);
    }
    out[c] = log_like;
  }
  return out;
}

int GaussianNbClassifier::predict(std::span<const double> x) const {
  return argmax_lowest(log_joint(x));
}

std::vector<double> GaussianNbClassifier::scores(std::span<const double> x) const {
  return softmax(log_joint(x));
}

void GaussianNbClassifier::save(std::ostream& out) const {
  out << "gaussian-nb\nclasses " << n_classes_ << '\n';
  write_matrix(out, means_);
  write_matrix(out, variances_);
  for (int c = 0; c < n_classes_; ++c)
    out << counts_[c] << (c + 1 == n_classes_ ? '\n' : ' ');
  for (int c = 0; c < n_classes_; ++c)
    out << numeric::format_g17(log_prior_[c]) << (c + 1 == n_classes_ ? '\n' : ' ');
}

GaussianNbClassifier GaussianNbClassifier::load(std::istream& in) {
  GaussianNbClassifier model;
  expect_token(in, "classes");
  in >> model.n_classes_;
  model.means_ = read_matrix(in);
  model.variances_ = read_matrix(in);
  model.counts_.resize(model.n_classes_);
  model.log_prior_.resize(model.n_classes_);
  for (auto& c : model.counts_) in >> c;
  for (auto& p : model.log_prior_) in >> p;
  if (!in) throw ParseError("model file: truncated gaussian-nb section");
  return model;
}

// ---------------------------------------------------------------------------
// CART

namespace {

double gini(const std::vector<std::size_t>& counts, std::size_t total) {
  if (total == 0) return 0.0;
  double impurity = 1.0;
  for (std::size_t c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    impurity -= p * p;
  }
  return impurity;
}

}  // namespace

CartClassifier CartClassifier::train(const numeric::Matrix& x, const std::vector<int>& labels,
                                     int n_classes, int max_depth, int min_leaf) {
  check_training_input(x, labels, n_classes);
  if (max_depth < 1) throw InvalidArgument("cart: max depth must be >= 1");
  if (min_leaf < 1) throw InvalidArgument("cart: min leaf must be >= 1");

  CartClassifier model;
  model.n_classes_ = n_classes;

  struct Job {
    std::vector<std::size_t> rows;
    int depth;
    int node_index;
  };

  auto make_node = [&](const std::vector<std::size_t>& rows) {
    Node node;
    std::vector<std::size_t> counts(n_classes, 0);
    for (std::size_t r : rows) counts[labels[r]]++;
    node.distribution.resize(n_classes);
    for (int c = 0; c < n_classes; ++c)
      node.distribution[c] =
          static_cast<double>(counts[c]) / static_cast<double>(rows.size());
    node.majority = 0;
    for (int c = 1; c < n_classes; ++c)
      if (counts[c] > counts[node.majority]) node.majority = c;
    return node;
  };

  std::vector<Job> stack;
  {
    std::vector<std::size_t> all(x.n_rows);
    std::iota(all.begin(), all.end(), 0);
    model.nodes_.push_back(make_node(all));
    stack.push_back({std::move(all), 0, 0});
  }

  while (!stack.empty()) {
    Job job = std::move(stack.back());
    stack.pop_back();
    const std::size_t n = job.rows.size();

    std::vector<std::size_t> total_counts(n_classes, 0);
    for (std::size_t r : job.rows) total_counts[labels[r]]++;
    const double parent_gini = gini(total_counts, n);
    const bool pure = parent_gini == 0.0;
    if (pure || job.depth >= max_depth || n < 2 * static_cast<std::size_t>(min_leaf))
      continue;

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_gain = 1e-12;  // require a real improvement

    std::vector<std::pair<double, int>> order(n);
    for (std::size_t f = 0; f < x.n_cols; ++f) {
      for (std::size_t i = 0; i < n; ++i)
        order[i] = {x.at(job.rows[i], f), labels[job.rows[i]]};
      std::sort(order.begin(), order.end());

      std::vector<std::size_t> left_counts(n_classes, 0);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left_counts[order[i].second]++;
        if (order[i].first == order[i + 1].first) continue;
        const std::size_t left_n = i + 1;
        const std::size_t right_n = n - left_n;
        if (left_n < static_cast<std::size_t>(min_leaf) ||
            right_n < static_cast<std::size_t>(min_leaf))
          continue;
        std::vector<std::size_t> right_counts(n_classes);
        for (int c = 0; c < n_classes; ++c)
          right_counts[c] = total_counts[c] - left_counts[c];
        const double child =
            (static_cast<double>(left_n) * gini(left_counts, left_n) +
             static_cast<double>(right_n) * gini(right_counts, right_n)) /
            static_cast<double>(n);
        const double gain = parent_gini - child;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          best_threshold = order[i].first + 0.5 * (order[i + 1].first - order[i].first);
        }
      }
    }

    if (best_feature < 0) continue;

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : job.rows) {
      if (x.at(r, best_feature) <= best_threshold)
        left_rows.push_back(r);
      else
        right_rows.push_back(r);
    }
    if (left_rows.empty() || right_rows.empty()) continue;

    // push_back may reallocate nodes_, so write through indices only.
    const int left_index = static_cast<int>(model.nodes_.size());
    model.nodes_.push_back(make_node(left_rows));
    const int right_index = static_cast<int>(model.nodes_.size());
    model.nodes_.push_back(make_node(right_rows));
    model.nodes_[job.node_index].feature = best_feature;
    model.nodes_[job.node_index].threshold = best_threshold;
    model.nodes_[job.node_index].left = left_index;
    model.nodes_[job.node_index].right = right_index;

    stack.push_back({std::move(left_rows), job.depth + 1, left_index});
    stack.push_back({std::move(right_rows), job.depth + 1, right_index});
  }
  return model;
}

const CartClassifier::Node& CartClassifier::leaf_for(std::span<const double> x) const {
  if (nodes_.empty()) throw InvalidArgument("cart: model not fitted");
  std::size_t i = 0;
  for (;;) {
    const Node& node = nodes_[i];
    if (node.feature < 0) return node;
    if (static_cast<std::size_t>(node.feature) >= x.size())
      throw InvalidArgument("cart: dimension mismatch");
    i = static_cast<std::size_t>(x[node.feature] <= node.threshold ? node.left : node.right);
  }
}

int CartClassifier::predict(std::span<const double> x) const { return leaf_for(x).majority; }

std::vector<double> CartClassifier::scores(std::span<const double> x) const {
  return leaf_for(x).distribution;
}

int CartClassifier::depth() const {
  // Depth of the tree measured in splits along the deepest path.
  std::vector<std::pair<std::size_t, int>> stack{{0, 0}};
  int depth = 0;
  while (!stack.empty()) {
    const auto [i, d] = stack.back();
    stack.pop_back();
    const Node& node = nodes_[i];
    if (node.feature < 0) {
      depth = std::max(depth, d);
      continue;
    }
    stack.push_back({static_cast<std::size_t>(node.left), d + 1});
    stack.push_back({static_cast<std::size_t>(node.right), d + 1});
  }
  return depth;
}

void CartClassifier::save(std::ostream& out) const {
  out << "cart\nclasses " << n_classes_ << " nodes " << nodes_.size() << '\n';
  for (const Node& node : nodes_) {
    out << node.feature << ' ' << numeric::format_g17(node.threshold) << ' ' << node.left
        << ' ' << node.right << ' ' << node.majority;
    for (double p : node.distribution) out << ' ' << numeric::format_g17(p);
    out << '\n';
  }
}

CartClassifier CartClassifier::load(std::istream& in) {
  CartClassifier model;
  expect_token(in, "classes");
  in >> model.n_classes_;
  expect_token(in, "nodes");
  std::size_t count = 0;
  in >> count;
  model.nodes_.resize(count);
  for (Node& node : model.nodes_) {
    in >> node.feature >> node.threshold >> node.left >> node.right >> node.majority;
    node.distribution.resize(model.n_classes_);
    for (double& p : node.distribution) in >> p;
  }
  if (!in) throw ParseError("model file: truncated cart section");
  return model;
}

// ---------------------------------------------------------------------------
// Linear discriminant analysis

LdaClassifier LdaClassifier::train(const numeric::Matrix& x, const std::vector<int>& labels,
                                   int n_classes) {
  check_training_input(x, labels, n_classes);
  const std::size_t d = x.n_cols;

  LdaClassifier model;
  model.n_classes_ = n_classes;
  model.means_ = numeric::Matrix(n_classes, d, 0.0);
  model.counts_.assign(n_classes, 0);
  model.log_prior_.assign(n_classes, -std::numeric_limits<double>::infinity());

  for (std::size_t i = 0; i < x.n_rows; ++i) {
    model.counts_[labels[i]]++;
    for (std::size_t j = 0; j < d; ++j) model.means_.at(labels[i], j) += x.at(i, j);
  }
  int present = 0;
  for (int c = 0; c < n_classes; ++c) {
    if (model.counts_[c] == 0) continue;
    ++present;
    for (std::size_t j = 0; j < d; ++j)
      model.means_.at(c, j) /= static_cast<double>(model.counts_[c]);
    model.log_prior_[c] = std::log(static_cast<double>(model.counts_[c]) /
                                   static_cast<double>(x.n_rows));
  }
  if (present < 2) throw InvalidArgument("lda: need at least 2 classes present");

  numeric::Matrix pooled(d, d, 0.0);
  for (std::size_t i = 0; i < x.n_rows; ++i) {
    const int c = labels[i];
    for (std::size_t a = 0; a < d; ++a) {
      const double da = x.at(i, a) - model.means_.at(c, a);
      for (std::size_t b = a; b < d; ++b)
        pooled.at(a, b) += da * (x.at(i, b) - model.means_.at(c, b));
    }
  }
  const double denom = std::max<double>(1.0, static_cast<double>(x.n_rows) - present);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) {
      pooled.at(a, b) /= denom;
      pooled.at(b, a) = pooled.at(a, b);
    }

  InverseResult inv = invert_covariance(std::move(pooled));
  model.precision_ = std::move(inv.precision);
  model.regularized_ = inv.regularized;
  return model;
}

std::vector<double> LdaClassifier::discriminants(std::span<const double> x) const {
  if (x.size() != means_.n_cols) throw InvalidArgument("lda: dimension mismatch");
  std::vector<double> out(n_classes_, -std::numeric_limits<double>::infinity());
  const std::size_t d = means_.n_cols;
  for (int c = 0; c < n_classes_; ++c) {
    if (counts_[c] == 0) continue;
    double wx = 0.0, wm = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < d; ++j) row += precision_.at(i, j) * means_.at(c, j);
      wx += row * x[i];
      wm += row * means_.at(c, i);
    }
    out[c] = wx - 0.5 * wm + log_prior_[c];
  }
  return out;
}

int LdaClassifier::predict(std::span<const double> x) const {
  return argmax_lowest(discriminants(x));
}

std::vector<double> LdaClassifier::scores(std::span<const double> x) const {
  return softmax(discriminants(x));
}

std::vector<std::string> LdaClassifier::notes() const {
  if (regularized_) return {"pooled covariance was singular; ridge 1e-6*trace/dim applied"};
  return {};
}

void LdaClassifier::save(std::ostream& out) const {
  out << "lda\nclasses " << n_classes_ << " regularized " << (regularized_ ? 1 : 0) << '\n';
  write_matrix(out, means_);
  write_matrix(out, precision_);
  for (int c = 0; c < n_classes_; ++c)
    out << counts_[c] << (c + 1 == n_classes_ ? '\n' : ' ');
  for (int c = 0; c < n_classes_; ++c)
    out << numeric::format_g17(log_prior_[c]) << (c + 1 == n_classes_ ? '\n' : ' ');
}

LdaClassifier LdaClassifier::load(std::istream& in) {
  LdaClassifier model;
  expect_token(in, "classes");
  in >> model.n_classes_;
  expect_token(in, "regularized");
  int reg = 0;
  in >> reg;
  model.regularized_ = reg != 0;
  model.means_ = read_matrix(in);
  model.precision_ = read_matrix(in);
  model.counts_.resize(model.n_classes_);
  model.log_prior_.resize(model.n_classes_);
  for (auto& c : model.counts_) in >> c;
  for (auto& p : model.log_prior_) in >> p;
  if (!in) throw ParseError("model file: truncated lda section");
  return model;
}

// ---------------------------------------------------------------------------
// Quadratic discriminant analysis

QdaClassifier QdaClassifier::train(const numeric::Matrix& x, const std::vector<int>& labels,
                                   int n_classes) {
  check_training_input(x, labels, n_classes);
  const std::size_t d = x.n_cols;

  QdaClassifier model;
  model.n_classes_ = n_classes;
  model.means_ = numeric::Matrix(n_classes, d, 0.0);
  model.counts_.assign(n_classes, 0);
  model.log_prior_.assign(n_classes, -std::numeric_limits<double>::infinity());
  model.precision_.resize(n_classes);
  model.log_det_.assign(n_classes, 0.0);

  for (std::size_t i = 0; i < x.n_rows; ++i) {
    model.counts_[labels[i]]++;
    for (std::size_t j = 0; j < d; ++j) model.means_.at(labels[i], j) += x.at(i, j);
  }
  int present = 0;
  for (int c = 0; c < n_classes; ++c) {
    if (model.counts_[c] == 0) continue;
    ++present;
    for (std::size_t j = 0; j < d; ++j)
      model.means_.at(c, j) /= static_cast<double>(model.counts_[c]);
    model.log_prior_[c] = std::log(static_cast<double>(model.counts_[c]) /
                                   static_cast<double>(x.n_rows));
  }
  if (present < 2) throw InvalidArgument("qda: need at least 2 classes present");

  for (int c = 0; c < n_classes; ++c) {
    if (model.counts_[c] == 0) continue;
    numeric::Matrix cov(d, d, 0.0);
    for (std::size_t i = 0; i < x.n_rows; ++i) {
      if (labels[i] != c) continue;
      for (std::size_t a = 0; a < d; ++a) {
        const double da = x.at(i, a) - model.means_.at(c, a);
        for (std::size_t b = a; b < d; ++b)
          cov.at(a, b) += da * (x.at(i, b) - model.means_.at(c, b));
      }
    }
    const double denom = std::max<double>(1.0, static_cast<double>(model.counts_[c]) - 1.0);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a; b < d; ++b) {
        cov.at(a, b) /= denom;
        cov.at(b, a) = cov.at(a, b);
      }
    InverseResult inv = invert_covariance(std::move(cov));
    model.precision_[c] = std::move(inv.precision);
    model.log_det_[c] = inv.log_det;
    model.regularized_ = model.regularized_ || inv.regularized;
  }
  return model;
}

std::vector<double> QdaClassifier::discriminants(std::span<const double> x) const {
  if (x.size() != means_.n_cols) throw InvalidArgument("qda: dimension mismatch");
  std::vector<double> out(n_classes_, -std::numeric_limits<double>::infinity());
  std::vector<double> centered(means_.n_cols);
  for (int c = 0; c < n_classes_; ++c) {
    if (counts_[c] == 0) continue;
    for (std::size_t j = 0; j < means_.n_cols; ++j) centered[j] = x[j] - means_.at(c, j);
    out[c] = -0.5 * log_det_[c] - 0.5 * quadratic_form(precision_[c], centered) +
             log_prior_[c];
  }
  return out;
}

int QdaClassifier::predict(std::span<const double> x) const {
  return argmax_lowest(discriminants(x));
}

std::vector<double> QdaClassifier::scores(std::span<const double> x) const {
  return softmax(discriminants(x));
}

std::vector<std::string> QdaClassifier::notes() const {
  if (regularized_)
    return {"a class covariance was singular; ridge 1e-6*trace/dim applied"};
  return {};
}

void QdaClassifier::save(std::ostream& out) const {
  out << "qda\nclasses " << n_classes_ << " regularized " << (regularized_ ? 1 : 0) << '\n';
  write_matrix(out, means_);
  for (int c = 0; c < n_classes_; ++c) {
    if (counts_[c] == 0) {
      out << "absent\n";
      continue;
    }
    out << "present\n";
    write_matrix(out, precision_[c]);
    out << numeric::format_g17(log_det_[c]) << '\n';
  }
  for (int c = 0; c < n_classes_; ++c)
    out << counts_[c] << (c + 1 == n_classes_ ? '\n' : ' ');
  for (int c = 0; c < n_classes_; ++c)
    out << numeric::format_g17(log_prior_[c]) << (c + 1 == n_classes_ ? '\n' : ' ');
}

QdaClassifier QdaClassifier::load(std::istream& in) {
  QdaClassifier model;
  expect_token(in, "classes");
  in >> model.n_classes_;
  expect_token(in, "regularized");
  int reg = 0;
  in >> reg;
  model.regularized_ = reg != 0;
  model.means_ = read_matrix(in);
  model.precision_.resize(model.n_classes_);
  model.log_det_.assign(model.n_classes_, 0.0);
  for (int c = 0; c < model.n_classes_; ++c) {
    std::string state;
    in >> state;
    if (state == "absent") continue;
    if (state != "present") throw ParseError("model file: malformed qda class block");
    model.precision_[c] = read_matrix(in);
    in >> model.log_det_[c];
  }
  model.counts_.resize(model.n_classes_);
  model.log_prior_.resize(model.n_classes_);
  for (auto& c : model.counts_) in >> c;
  for (auto& p : model.log_prior_) in >> p;
  if (!in) throw ParseError("model file: truncated qda section");
  return model;
}

}  // namespace sdc::models
