#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sdc/kernels.hpp"
#include "sdc/numeric.hpp"

namespace sdc::models {

struct SvmTrainOptions {
  double c = 1.0;          // box constraint, > 0
  double tol = 1e-3;       // KKT tolerance
  int max_passes = 10000;  // outer SMO sweeps before giving up
  std::uint64_t seed = 42; // start positions of the SMO scan heuristics
};

// Soft-margin binary SVM trained by sequential minimal optimization
// (Platt-style pair selection with an error cache). Stores only the support
// vectors; the decision function is sum_k a_k t_k K(x_k, x) + b.
class BinarySvm {
 public:
  static BinarySvm train(const numeric::Matrix& x, const std::vector<int>& labels,
                         const KernelSpec& kernel, const SvmTrainOptions& options);

  double decision(std::span<const double> x) const;
  int predict(std::span<const double> x) const;  // sign; exact 0 goes to +1

  const numeric::Matrix& support_vectors() const { return sv_; }
  const std::vector<double>& multipliers() const { return alpha_; }
  const std::vector<int>& sv_labels() const { return labels_; }
  double bias() const { return bias_; }
  const KernelSpec& kernel() const { return kernel_; }
  double c() const { return c_; }
  double tolerance() const { return tol_; }

  void save(std::ostream& out) const;
  static BinarySvm load(std::istream& in);

 private:
  numeric::Matrix sv_;
  std::vector<double> alpha_;
  std::vector<int> labels_;
  double bias_ = 0.0;
  KernelSpec kernel_;
  double c_ = 1.0;
  double tol_ = 1e-3;
};

// One-vs-one multiclass wrapper: one binary machine per unordered class
// pair, majority vote, ties broken by the largest sum of absolute decision
// margins among the tied classes and then by the lowest class index.
class MulticlassSvm {
 public:
  struct PairwiseVote {
    int class_lo = 0;
    int class_hi = 0;
    double decision = 0.0;  // positive favors class_hi
  };

  static MulticlassSvm train(const numeric::Matrix& x, const std::vector<int>& labels,
                             int n_classes, const KernelSpec& kernel,
                             const SvmTrainOptions& options);

  int predict(std::span<const double> x) const;
  // Per-class signed margin sums; usable as ranking scores.
  std::vector<double> scores(std::span<const double> x) const;
  std::vector<PairwiseVote> pairwise_decisions(std::span<const double> x) const;

  static int vote(const std::vector<PairwiseVote>& decisions, int n_classes);

  int n_classes() const { return n_classes_; }
  std::size_t n_machines() const { return machines_.size(); }

  void save(std::ostream& out) const;
  static MulticlassSvm load(std::istream& in);

 private:
  struct Pair {
    int class_lo;
    int class_hi;
    BinarySvm machine;
  };
  int n_classes_ = 0;
  std::vector<Pair> machines_;
};

}  // namespace sdc::models
