#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sdc/numeric.hpp"

namespace sdc::models {

// Common surface for everything the comparison harness trains. Scores are
// per-class ranking values (larger = more likely); models that cannot
// produce them return has_scores() == false and are reported with ROC 0.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual int predict(std::span<const double> x) const = 0;
  virtual std::vector<double> scores(std::span<const double> x) const = 0;
  virtual bool has_scores() const { return true; }
  virtual int n_classes() const = 0;
  virtual std::string id() const = 0;
  virtual std::vector<std::string> notes() const { return {}; }
  virtual void save(std::ostream& out) const = 0;
};

enum class ModelKind {
  SvmPolynomial,
  SvmRbf,
  SvmGaussian,
  Knn,
  GaussianNb,
  Cart,
  Lda,
  Qda,
};

// The default comparison roster, in registration order.
const std::vector<ModelKind>& default_model_kinds();

std::string model_id(ModelKind kind);             // e.g. "svm-gaussian"
std::string model_display_name(ModelKind kind);   // e.g. "SVM - Gaussian Kernel"
ModelKind model_kind_from_id(const std::string& id);

struct ModelHyperparams {
  std::uint64_t seed = 42;

  double svm_c = 1.0;
  double svm_sigma = 0.0;  // <= 0: sqrt(median pairwise distance^2 / 2)
  double svm_gamma = 0.0;  // <= 0: 1 / median pairwise distance
  double svm_tau = 1.0;
  int svm_degree = 3;
  double svm_tol = 1e-3;
  int svm_max_passes = 10000;

  int knn_k = 5;
  int tree_max_depth = 12;
  int tree_min_leaf = 2;
  double variance_floor = 1e-9;
};

std::unique_ptr<Classifier> train_model(ModelKind kind, const numeric::Matrix& x,
                                        const std::vector<int>& labels, int n_classes,
                                        const ModelHyperparams& params);

// Versioned text serialization; decimal values round-trip exactly.
void save_model(const Classifier& model, std::ostream& out);
void save_model_file(const Classifier& model, const std::string& path);
std::unique_ptr<Classifier> load_model(std::istream& in);
std::unique_ptr<Classifier> load_model_file(const std::string& path);

// Median pairwise Euclidean distance (lower median; evenly strided subsample
// above 2000 rows). Falls back to 1 when the median is zero.
double median_pairwise_distance(const numeric::Matrix& x);

}  // namespace sdc::models
