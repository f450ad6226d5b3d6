#include "sdc/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sdc/baselines.hpp"
#include "sdc/errors.hpp"
#include "sdc/svm.hpp"

namespace sdc::models {

namespace {

constexpr const char* kFormatTag = "sdcmodel";
constexpr int kFormatVersion = 1;

class SvmClassifier : public Classifier {
 public:
  SvmClassifier(ModelKind kind, MulticlassSvm svm) : kind_(kind), svm_(std::move(svm)) {}

  int predict(std::span<const double> x) const override { return svm_.predict(x); }
  std::vector<double> scores(std::span<const double> x) const override {
    return svm_.scores(x);
  }
  int n_classes() const override { return svm_.n_classes(); }
  std::string id() const override { return model_id(kind_); }
  void save(std::ostream& out) const override {
    out << "svm " << model_id(kind_) << '\n';
    svm_.save(out);
  }
  const MulticlassSvm& svm() const { return svm_; }

 private:
  ModelKind kind_;
  MulticlassSvm svm_;
};

}  // namespace

const std::vector<ModelKind>& default_model_kinds() {
  static const std::vector<ModelKind> kinds = {
      ModelKind::SvmPolynomial, ModelKind::SvmRbf, ModelKind::SvmGaussian,
      ModelKind::Knn,           ModelKind::GaussianNb, ModelKind::Cart,
      ModelKind::Lda,           ModelKind::Qda};
  return kinds;
}

std::string model_id(ModelKind kind) {
  switch (kind) {
    case ModelKind::SvmPolynomial: return "svm-polynomial";
    case ModelKind::SvmRbf: return "svm-rbf";
    case ModelKind::SvmGaussian: return "svm-gaussian";
    case ModelKind::Knn: return "knn";
    case ModelKind::GaussianNb: return "gaussian-nb";
    case ModelKind::Cart: return "cart";
    case ModelKind::Lda: return "lda";
    case ModelKind::Qda: return "qda";
  }
  return "unknown";
}

std::string model_display_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::SvmPolynomial: return "SVM - Polynomial Kernel";
    case ModelKind::SvmRbf: return "SVM - RBF Kernel";
    case ModelKind::SvmGaussian: return "SVM - Gaussian Kernel";
    case ModelKind::Knn: return "k-Neighbors Classifier";
    case ModelKind::GaussianNb: return "Naive Bayes";
    case ModelKind::Cart: return "Decision Tree Classifier";
    case ModelKind::Lda: return "Linear Discriminant Analysis";
    case ModelKind::Qda: return "Quadratic Discriminant Analysis";
  }
  return "unknown";
}

ModelKind model_kind_from_id(const std::string& id) {
  for (ModelKind kind : default_model_kinds())
    if (model_id(kind) == id) return kind;
  throw InvalidArgument("unknown model: " + id);
}

double median_pairwise_distance(const numeric::Matrix& x) {
  constexpr std::size_t kCap = 2000;
  std::vector<std::size_t> rows;
  if (x.n_rows <= kCap) {
    rows.resize(x.n_rows);
    for (std::size_t i = 0; i < x.n_rows; ++i) rows[i] = i;
  } else {
    rows.resize(kCap);
    for (std::size_t i = 0; i < kCap; ++i) rows[i] = i * x.n_rows / kCap;
  }
  const std::size_t m = rows.size();
  if (m < 2) return 1.0;

  std::vector<double> dist;
  dist.reserve(m * (m - 1) / 2);
  for (std::size_t a = 0; a < m; ++a) {
    const auto ra = x.row(rows[a]);
    for (std::size_t b = a + 1; b < m; ++b) {
      const auto rb = x.row(rows[b]);
      double d2 = 0.0;
      for (std::size_t j = 0; j < x.n_cols; ++j) {
        const double d = ra[j] - rb[j];
        d2 += d * d;
      }
      dist.push_back(std::sqrt(d2));
    }
  }
  const std::size_t mid = (dist.size() - 1) / 2;
  std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid), dist.end());
  const double median = dist[mid];
  return median > 0.0 ? median : 1.0;
}

std::unique_ptr<Classifier> train_model(ModelKind kind, const numeric::Matrix& x,
                                        const std::vector<int>& labels, int n_classes,
                                        const ModelHyperparams& params) {
  switch (kind) {
    case ModelKind::SvmPolynomial:
    case ModelKind::SvmRbf:
    case ModelKind::SvmGaussian: {
      KernelSpec kernel;
      if (kind == ModelKind::SvmPolynomial) {
        kernel.family = KernelFamily::Polynomial;
        kernel.tau = params.svm_tau;
        kernel.degree = params.svm_degree;
      } else if (kind == ModelKind::SvmRbf) {
        kernel.family = KernelFamily::Rbf;
        kernel.sigma = params.svm_sigma > 0.0
                           ? params.svm_sigma
                           : std::sqrt(std::pow(median_pairwise_distance(x), 2) / 2.0);
      } else {
        kernel.family = KernelFamily::GaussianLaplace;
        kernel.gamma = params.svm_gamma > 0.0 ? params.svm_gamma
                                              : 1.0 / median_pairwise_distance(x);
      }
      SvmTrainOptions options;
      options.c = params.svm_c;
      options.tol = params.svm_tol;
      options.max_passes = params.svm_max_passes;
      options.seed = params.seed;
      return std::make_unique<SvmClassifier>(
          kind, MulticlassSvm::train(x, labels, n_classes, kernel, options));
    }
    case ModelKind::Knn:
      return std::make_unique<KnnClassifier>(
          KnnClassifier::train(x, labels, n_classes, params.knn_k));
    case ModelKind::GaussianNb:
      return std::make_unique<GaussianNbClassifier>(GaussianNbClassifier::train(
          x, labels, n_classes, params.variance_floor));
    case ModelKind::Cart:
      return std::make_unique<CartClassifier>(CartClassifier::train(
          x, labels, n_classes, params.tree_max_depth, params.tree_min_leaf));
    case ModelKind::Lda:
      return std::make_unique<LdaClassifier>(LdaClassifier::train(x, labels, n_classes));
    case ModelKind::Qda:
      return std::make_unique<QdaClassifier>(QdaClassifier::train(x, labels, n_classes));
  }
  throw InvalidArgument("unknown model kind");
}

void save_model(const Classifier& model, std::ostream& out) {
  out << kFormatTag << ' ' << kFormatVersion << '\n';
  model.save(out);
}

void save_model_file(const Classifier& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  save_model(model, out);
  out.flush();
  if (!out) throw IoError("write failed on " + path);
}

std::unique_ptr<Classifier> load_model(std::istream& in) {
  std::string tag;
  int version = 0;
  in >> tag >> version;
  if (tag != kFormatTag) throw ParseError("not a model file (missing format tag)");
  if (version != kFormatVersion)
    throw ParseError("unsupported model format version " + std::to_string(version));

  std::string kind;
  in >> kind;
  if (kind == "svm") {
    std::string id;
    in >> id;
    return std::make_unique<SvmClassifier>(model_kind_from_id(id), MulticlassSvm::load(in));
  }
  if (kind == "knn") return std::make_unique<KnnClassifier>(KnnClassifier::load(in));
  if (kind == "gaussian-nb")
    return std::make_unique<GaussianNbClassifier>(GaussianNbClassifier::load(in));
  if (kind == "cart") return std::make_unique<CartClassifier>(CartClassifier::load(in));
  if (kind == "lda") return std::make_unique<LdaClassifier>(LdaClassifier::load(in));
  if (kind == "qda") return std::make_unique<QdaClassifier>(QdaClassifier::load(in));
  throw ParseError("unknown model section: " + kind);
}

std::unique_ptr<Classifier> load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file " + path);
  return load_model(in);
}

}  // namespace sdc::models
