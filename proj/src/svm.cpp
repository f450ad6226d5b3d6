#include "sdc/svm.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "sdc/errors.hpp"

namespace sdc::models {

namespace {

// Full Gram matrices are kept up to this many rows (288 MB at the limit);
// beyond it kernels are evaluated on demand.
constexpr std::size_t kGramCacheLimit = 6000;

// SMO working state. Pair selection follows Platt (1998): examine KKT
// violators, pick the partner maximizing |E1 - E2|, then fall back to scans
// over the non-bound set and the full set from seeded start positions.
class SmoSolver {
 public:
  SmoSolver(const numeric::Matrix& x, const std::vector<int>& t, const KernelSpec& kernel,
            const SvmTrainOptions& opt)
      : x_(x),
        t_(t),
        kernel_(kernel),
        c_(opt.c),
        tol_(opt.tol),
        eps_(1e-10 * std::max(1.0, opt.c)),
        rng_(numeric::mix_seed(opt.seed, 0x736d6full)) {
    n_ = x.n_rows;
    alpha_.assign(n_, 0.0);
    bias_ = 0.0;
    errors_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) errors_[i] = -static_cast<double>(t_[i]);
    if (n_ <= kGramCacheLimit) {
      gram_.resize(n_ * n_);
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i; j < n_; ++j) {
          const double k = kernel_eval(kernel_, x_.row(i), x_.row(j));
          gram_[i * n_ + j] = k;
          gram_[j * n_ + i] = k;
        }
    }
  }

  void run(int max_passes) {
    int passes = 0;
    bool examine_all = true;
    int changed = 0;
    while (changed > 0 || examine_all) {
      if (++passes > max_passes)
        throw TrainingError("SVM training did not converge after " +
                            std::to_string(max_passes) +
                            " passes; max KKT violation = " +
                            numeric::format_g17(max_kkt_violation()));
      changed = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (!examine_all && !is_free(alpha_[i])) continue;
        changed += examine_example(i);
      }
      if (examine_all)
        examine_all = false;
      else if (changed == 0)
        examine_all = true;
    }
  }

  const std::vector<double>& alpha() const { return alpha_; }

  // Bias per the averaged-free-vector rule; falls back to the midpoint of
  // the feasible KKT interval when every multiplier sits on a bound.
  double recover_bias() const {
    double sum = 0.0;
    std::size_t free_count = 0;
    std::vector<double> g(n_);
    for (std::size_t i = 0; i < n_; ++i) g[i] = raw_decision(i);
    for (std::size_t i = 0; i < n_; ++i) {
      if (is_free(alpha_[i])) {
        sum += static_cast<double>(t_[i]) - g[i];
        ++free_count;
      }
    }
    if (free_count > 0) return sum / static_cast<double>(free_count);

    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_; ++i) {
      const double bound = static_cast<double>(t_[i]) - g[i];
      const bool at_zero = alpha_[i] <= eps_;
      if ((at_zero && t_[i] > 0) || (!at_zero && t_[i] < 0))
        lo = std::max(lo, bound);
      else
        hi = std::min(hi, bound);
    }
    if (!std::isfinite(lo)) return hi;
    if (!std::isfinite(hi)) return lo;
    return 0.5 * (lo + hi);
  }

  double max_kkt_violation() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double r = static_cast<double>(t_[i]) * (raw_decision(i) + bias_) - 1.0;
      double v = 0.0;
      if (alpha_[i] <= eps_)
        v = std::max(0.0, -r);
      else if (alpha_[i] >= c_ - eps_)
        v = std::max(0.0, r);
      else
        v = std::abs(r);
      worst = std::max(worst, v);
    }
    return worst;
  }

 private:
  double kval(std::size_t i, std::size_t j) const {
    if (!gram_.empty()) return gram_[i * n_ + j];
    return kernel_eval(kernel_, x_.row(i), x_.row(j));
  }

  // sum_j a_j t_j K(i, j), without bias.
  double raw_decision(std::size_t i) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < n_; ++j)
      if (alpha_[j] > 0.0) acc += alpha_[j] * static_cast<double>(t_[j]) * kval(i, j);
    return acc;
  }

  bool is_free(double a) const { return a > eps_ && a < c_ - eps_; }

  int examine_example(std::size_t i2) {
    const double y2 = static_cast<double>(t_[i2]);
    const double e2 = errors_[i2];
    const double r2 = e2 * y2;
    const bool violates =
        (r2 < -tol_ && alpha_[i2] < c_) || (r2 > tol_ && alpha_[i2] > 0.0);
    if (!violates) return 0;

    // Heuristic 1: largest |E1 - E2| among free multipliers.
    std::size_t best = n_;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (i == i2 || !is_free(alpha_[i])) continue;
      const double gap = std::abs(errors_[i] - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best < n_ && take_step(best, i2)) return 1;

    // Heuristic 2: scan the free set from a seeded start.
    const std::size_t start1 = static_cast<std::size_t>(rng_.below(n_));
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t i1 = (start1 + k) % n_;
      if (i1 == i2 || !is_free(alpha_[i1])) continue;
      if (take_step(i1, i2)) return 1;
    }
    // Heuristic 3: scan everything from a seeded start.
    const std::size_t start2 = static_cast<std::size_t>(rng_.below(n_));
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t i1 = (start2 + k) % n_;
      if (i1 == i2) continue;
      if (take_step(i1, i2)) return 1;
    }
    return 0;
  }

  bool take_step(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double a1 = alpha_[i1];
    const double a2 = alpha_[i2];
    const double y1 = static_cast<double>(t_[i1]);
    const double y2 = static_cast<double>(t_[i2]);
    const double s = y1 * y2;
    const double e1 = errors_[i1];
    const double e2 = errors_[i2];

    double lo, hi;
    if (t_[i1] == t_[i2]) {
      lo = std::max(0.0, a1 + a2 - c_);
      hi = std::min(c_, a1 + a2);
    } else {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(c_, c_ + a2 - a1);
    }
    if (lo >= hi) return false;

    const double k11 = kval(i1, i1);
    const double k12 = kval(i1, i2);
    const double k22 = kval(i2, i2);
    const double eta = 2.0 * k12 - k11 - k22;

    double a2_new;
    if (eta < 0.0) {
      a2_new = a2 - y2 * (e1 - e2) / eta;
      a2_new = std::clamp(a2_new, lo, hi);
    } else {
      // Flat direction: evaluate the objective at both segment ends.
      const double f1 = y1 * (e1 + bias_) - a1 * k11 - s * a2 * k12;
      const double f2 = y2 * (e2 + bias_) - s * a1 * k12 - a2 * k22;
      const double l1 = a1 + s * (a2 - lo);
      const double h1 = a1 + s * (a2 - hi);
      const double obj_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 +
                            0.5 * lo * lo * k22 + s * lo * l1 * k12;
      const double obj_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 +
                            0.5 * hi * hi * k22 + s * hi * h1 * k12;
      if (obj_lo < obj_hi - 1e-12)
        a2_new = lo;
      else if (obj_hi < obj_lo - 1e-12)
        a2_new = hi;
      else
        return false;
    }

    if (a2_new < eps_) a2_new = 0.0;
    else if (a2_new > c_ - eps_) a2_new = c_;
    if (std::abs(a2_new - a2) < 1e-12 * (a2_new + a2 + 1e-12)) return false;

    // a1 compensates exactly, preserving sum a_k t_k.
    const double a1_new = a1 + s * (a2 - a2_new);

    const double b_old = bias_;
    const double b1 = e1 + y1 * (a1_new - a1) * k11 + y2 * (a2_new - a2) * k12 + bias_;
    const double b2 = e2 + y1 * (a1_new - a1) * k12 + y2 * (a2_new - a2) * k22 + bias_;
    const bool free1 = a1_new > eps_ && a1_new < c_ - eps_;
    const bool free2 = a2_new > eps_ && a2_new < c_ - eps_;
    if (free1)
      bias_ = b1;
    else if (free2)
      bias_ = b2;
    else
      bias_ = 0.5 * (b1 + b2);

    const double d1 = y1 * (a1_new - a1);
    const double d2 = y2 * (a2_new - a2);
    for (std::size_t i = 0; i < n_; ++i)
      errors_[i] += d1 * kval(i1, i) + d2 * kval(i2, i) + b_old - bias_;

    alpha_[i1] = a1_new;
    alpha_[i2] = a2_new;

    // The incremental error cache drifts; refresh it periodically.
    if (++steps_since_refresh_ >= std::max<std::size_t>(1000, n_)) {
      steps_since_refresh_ = 0;
      for (std::size_t i = 0; i < n_; ++i)
        errors_[i] = raw_decision(i) + bias_ - static_cast<double>(t_[i]);
    }
    return true;
  }

  const numeric::Matrix& x_;
  const std::vector<int>& t_;
  KernelSpec kernel_;
  double c_;
  double tol_;
  double eps_;
  numeric::Rng rng_;
  std::size_t n_ = 0;
  std::vector<double> alpha_;
  std::vector<double> errors_;
  std::vector<double> gram_;
  double bias_ = 0.0;
  std::size_t steps_since_refresh_ = 0;
};

void expect_token(std::istream& in, const char* expected) {
  std::string tok;
  in >> tok;
  if (tok != expected)
    throw ParseError(std::string("model file: expected '") + expected + "', found '" +
                     tok + "'");
}

}  // namespace

BinarySvm BinarySvm::train(const numeric::Matrix& x, const std::vector<int>& labels,
                           const KernelSpec& kernel, const SvmTrainOptions& options) {
  validate_kernel(kernel);
  if (x.n_rows != labels.size())
    throw InvalidArgument("svm_train: row/label count mismatch");
  if (x.n_rows < 2) throw InvalidArgument("svm_train: need at least 2 rows");
  if (!(options.c > 0.0)) throw InvalidArgument("svm_train: c must be positive");
  bool has_pos = false, has_neg = false;
  for (int t : labels) {
    if (t == +1) has_pos = true;
    else if (t == -1) has_neg = true;
    else throw InvalidArgument("svm_train: labels must be +1 or -1");
  }
  if (!has_pos || !has_neg)
    throw InvalidArgument("svm_train: both labels must be present");

  SmoSolver solver(x, labels, kernel, options);
  solver.run(options.max_passes);

  BinarySvm model;
  model.kernel_ = kernel;
  model.c_ = options.c;
  model.tol_ = options.tol;
  model.bias_ = solver.recover_bias();

  const auto& alpha = solver.alpha();
  std::size_t nsv = 0;
  for (double a : alpha)
    if (a > 0.0) ++nsv;
  model.sv_ = numeric::Matrix(nsv, x.n_cols);
  model.alpha_.reserve(nsv);
  model.labels_.reserve(nsv);
  std::size_t k = 0;
  for (std::size_t i = 0; i < x.n_rows; ++i) {
    if (alpha[i] <= 0.0) continue;
    std::copy(x.row(i).begin(), x.row(i).end(), model.sv_.row(k).begin());
    model.alpha_.push_back(alpha[i]);
    model.labels_.push_back(labels[i]);
    ++k;
  }
  return model;
}

double BinarySvm::decision(std::span<const double> x) const {
  if (x.size() != sv_.n_cols && sv_.n_rows > 0)
    throw InvalidArgument("svm_decision: dimension mismatch");
  double acc = bias_;
  for (std::size_t k = 0; k < sv_.n_rows; ++k)
    acc += alpha_[k] * static_cast<double>(labels_[k]) * kernel_eval(kernel_, sv_.row(k), x);
  return acc;
}

int BinarySvm::predict(std::span<const double> x) const {
  return decision(x) >= 0.0 ? +1 : -1;
}

void BinarySvm::save(std::ostream& out) const {
  out << "binary_svm\n";
  out << "kernel " << kernel_family_name(kernel_.family) << ' '
      << numeric::format_g17(kernel_.tau) << ' ' << kernel_.degree << ' '
      << numeric::format_g17(kernel_.sigma) << ' ' << numeric::format_g17(kernel_.gamma)
      << '\n';
  out << "c " << numeric::format_g17(c_) << " tol " << numeric::format_g17(tol_) << '\n';
  out << "bias " << numeric::format_g17(bias_) << '\n';
  out << "nsv " << sv_.n_rows << " dim " << sv_.n_cols << '\n';
  for (std::size_t k = 0; k < sv_.n_rows; ++k) {
    out << numeric::format_g17(alpha_[k]) << ' ' << labels_[k];
    for (double v : sv_.row(k)) out << ' ' << numeric::format_g17(v);
    out << '\n';
  }
}

BinarySvm BinarySvm::load(std::istream& in) {
  expect_token(in, "binary_svm");
  BinarySvm model;
  expect_token(in, "kernel");
  std::string family;
  in >> family >> model.kernel_.tau >> model.kernel_.degree >> model.kernel_.sigma >>
      model.kernel_.gamma;
  model.kernel_.family = kernel_family_from_name(family);
  expect_token(in, "c");
  in >> model.c_;
  expect_token(in, "tol");
  in >> model.tol_;
  expect_token(in, "bias");
  in >> model.bias_;
  expect_token(in, "nsv");
  std::size_t nsv = 0, dim = 0;
  in >> nsv;
  expect_token(in, "dim");
  in >> dim;
  if (!in) throw ParseError("model file: malformed binary_svm header");
  model.sv_ = numeric::Matrix(nsv, dim);
  model.alpha_.resize(nsv);
  model.labels_.resize(nsv);
  for (std::size_t k = 0; k < nsv; ++k) {
    in >> model.alpha_[k] >> model.labels_[k];
    for (std::size_t j = 0; j < dim; ++j) in >> model.sv_.at(k, j);
  }
  if (!in) throw ParseError("model file: truncated binary_svm section");
  return model;
}

MulticlassSvm MulticlassSvm::train(const numeric::Matrix& x, const std::vector<int>& labels,
                                   int n_classes, const KernelSpec& kernel,
                                   const SvmTrainOptions& options) {
  if (x.n_rows != labels.size())
    throw InvalidArgument("svm_train_multiclass: row/label count mismatch");
  if (n_classes < 2) throw InvalidArgument("svm_train_multiclass: need >= 2 classes");

  std::vector<std::size_t> counts(n_classes, 0);
  for (int c : labels) {
    if (c < 0 || c >= n_classes)
      throw InvalidArgument("svm_train_multiclass: label out of range");
    counts[static_cast<std::size_t>(c)]++;
  }
  int present = 0;
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c] > 0) ++present;
  if (present < 2)
    throw InvalidArgument("svm_train_multiclass: need at least 2 classes present");

  MulticlassSvm model;
  model.n_classes_ = n_classes;
  for (int lo = 0; lo < n_classes; ++lo) {
    for (int hi = lo + 1; hi < n_classes; ++hi) {
      if (counts[lo] == 0 || counts[hi] == 0) continue;
      numeric::Matrix subset(counts[lo] + counts[hi], x.n_cols);
      std::vector<int> sub_labels(subset.n_rows);
      std::size_t r = 0;
      for (std::size_t i = 0; i < x.n_rows; ++i) {
        if (labels[i] != lo && labels[i] != hi) continue;
        std::copy(x.row(i).begin(), x.row(i).end(), subset.row(r).begin());
        sub_labels[r] = labels[i] == hi ? +1 : -1;  // positive side is the higher class
        ++r;
      }
      SvmTrainOptions pair_options = options;
      pair_options.seed = numeric::mix_seed(options.seed,
                                            0x70616972ull + 131 * lo + 977 * hi);
      model.machines_.push_back(
          {lo, hi, BinarySvm::train(subset, sub_labels, kernel, pair_options)});
    }
  }
  return model;
}

std::vector<MulticlassSvm::PairwiseVote> MulticlassSvm::pairwise_decisions(
    std::span<const double> x) const {
  std::vector<PairwiseVote> out;
  out.reserve(machines_.size());
  for (const auto& p : machines_)
    out.push_back({p.class_lo, p.class_hi, p.machine.decision(x)});
  return out;
}

int MulticlassSvm::vote(const std::vector<PairwiseVote>& decisions, int n_classes) {
  std::vector<int> votes(n_classes, 0);
  std::vector<double> margin(n_classes, 0.0);
  for (const auto& d : decisions) {
    const int winner = d.decision >= 0.0 ? d.class_hi : d.class_lo;
    votes[winner] += 1;
    margin[winner] += std::abs(d.decision);
  }
  int best = 0;
  for (int c = 1; c < n_classes; ++c) {
    if (votes[c] > votes[best] ||
        (votes[c] == votes[best] && margin[c] > margin[best]))
      best = c;  // lowest index kept on full ties
  }
  return best;
}

int MulticlassSvm::predict(std::span<const double> x) const {
  return vote(pairwise_decisions(x), n_classes_);
}

std::vector<double> MulticlassSvm::scores(std::span<const double> x) const {
  std::vector<double> score(n_classes_, 0.0);
  for (const auto& d : pairwise_decisions(x)) {
    score[d.class_hi] += d.decision;
    score[d.class_lo] -= d.decision;
  }
  return score;
}

void MulticlassSvm::save(std::ostream& out) const {
  out << "multiclass_svm\n";
  out << "classes " << n_classes_ << '\n';
  out << "machines " << machines_.size() << '\n';
  for (const auto& p : machines_) {
    out << "pair " << p.class_lo << ' ' << p.class_hi << '\n';
    p.machine.save(out);
  }
}

MulticlassSvm MulticlassSvm::load(std::istream& in) {
  expect_token(in, "multiclass_svm");
  MulticlassSvm model;
  expect_token(in, "classes");
  in >> model.n_classes_;
  expect_token(in, "machines");
  std::size_t m = 0;
  in >> m;
  if (!in) throw ParseError("model file: malformed multiclass_svm header");
  for (std::size_t i = 0; i < m; ++i) {
    expect_token(in, "pair");
    Pair p{0, 0, BinarySvm()};
    in >> p.class_lo >> p.class_hi;
    p.machine = BinarySvm::load(in);
    model.machines_.push_back(std::move(p));
  }
  return model;
}

}  // namespace sdc::models
