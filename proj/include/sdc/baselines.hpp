#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "sdc/classifier.hpp"
#include "sdc/numeric.hpp"

namespace sdc::models {

class KnnClassifier : public Classifier {
 public:
  static KnnClassifier train(const numeric::Matrix& x, const std::vector<int>& labels,
                             int n_classes, int k);

  int predict(std::span<const double> x) const override;
  std::vector<double> scores(std::span<const double> x) const override;
  int n_classes() const override { return n_classes_; }
  std::string id() const override { return "knn"; }
  void save(std::ostream& out) const override;
  static KnnClassifier load(std::istream& in);

 private:
  numeric::Matrix train_x_;
  std::vector<int> train_y_;
  int k_ = 5;
  int n_classes_ = 0;
};

class GaussianNbClassifier : public Classifier {
 public:
  static GaussianNbClassifier train(const numeric::Matrix& x, const std::vector<int>& labels,
                                    int n_classes, double variance_floor);

  int predict(std::span<const double> x) const override;
  std::vector<double> scores(std::span<const double> x) const override;
  int n_classes() const override { return n_classes_; }
  std::string id() const override { return "gaussian-nb"; }
  void save(std::ostream& out) const override;
  static GaussianNbClassifier load(std::istream& in);

 private:
  std::vector<double> log_joint(std::span<const double> x) const;

  numeric::Matrix means_;      // class x feature
  numeric::Matrix variances_;  // class x feature, floored
  std::vector<double> log_prior_;
  std::vector<std::size_t> counts_;
  int n_classes_ = 0;
};

// Binary CART with Gini splitting.
class CartClassifier : public Classifier {
 public:
  static CartClassifier train(const numeric::Matrix& x, const std::vector<int>& labels,
                              int n_classes, int max_depth, int min_leaf);

  int predict(std::span<const double> x) const override;
  std::vector<double> scores(std::span<const double> x) const override;
  int n_classes() const override { return n_classes_; }
  std::string id() const override { return "cart"; }
  int depth() const;
  void save(std::ostream& out) const override;
  static CartClassifier load(std::istream& in);

 private:
  struct Node {
    int feature = -1;  // -1 for leaves
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int majority = 0;
    std::vector<double> distribution;  // class proportions at the node
  };

  const Node& leaf_for(std::span<const double> x) const;

  std::vector<Node> nodes_;
  int n_classes_ = 0;
};

class LdaClassifier : public Classifier {
 public:
  static LdaClassifier train(const numeric::Matrix& x, const std::vector<int>& labels,
                             int n_classes);

  int predict(std::span<const double> x) const override;
  std::vector<double> scores(std::span<const double> x) const override;
  int n_classes() const override { return n_classes_; }
  std::string id() const override { return "lda"; }
  std::vector<std::string> notes() const override;
  bool regularized() const { return regularized_; }
  void save(std::ostream& out) const override;
  static LdaClassifier load(std::istream& in);

 private:
  std::vector<double> discriminants(std::span<const double> x) const;

  numeric::Matrix means_;      // class x feature
  numeric::Matrix precision_;  // pooled inverse covariance
  std::vector<double> log_prior_;
  std::vector<std::size_t> counts_;
  bool regularized_ = false;
  int n_classes_ = 0;
};

class QdaClassifier : public Classifier {
 public:
  static QdaClassifier train(const numeric::Matrix& x, const std::vector<int>& labels,
                             int n_classes);

  int predict(std::span<const double> x) const override;
  std::vector<double> scores(std::span<const double> x) const override;
  int n_classes() const override { return n_classes_; }
  std::string id() const override { return "qda"; }
  std::vector<std::string> notes() const override;
  bool regularized() const { return regularized_; }
  void save(std::ostream& out) const override;
  static QdaClassifier load(std::istream& in);

 private:
  std::vector<double> discriminants(std::span<const double> x) const;

  numeric::Matrix means_;                  // class x feature
  std::vector<numeric::Matrix> precision_; // per class
  std::vector<double> log_det_;            // per class
  std::vector<double> log_prior_;
  std::vector<std::size_t> counts_;
  bool regularized_ = false;
  int n_classes_ = 0;
};

}  // namespace sdc::models
