#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "sdc/baselines.hpp"
#include "sdc/classifier.hpp"
#include "sdc/errors.hpp"
#include "sdc/kernels.hpp"
#include "sdc/numeric.hpp"
#include "sdc/svm.hpp"
#include "sdc/synthetic.hpp"

using namespace sdc;
using namespace sdc::models;
using numeric::Matrix;

namespace {

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  return m;
}

Matrix gram_matrix(const KernelSpec& spec, const Matrix& x) {
  Matrix g(x.n_rows, x.n_rows);
  for (std::size_t i = 0; i < x.n_rows; ++i)
    for (std::size_t j = 0; j < x.n_rows; ++j)
      g.at(i, j) = kernel_eval(spec, x.row(i), x.row(j));
  return g;
}

// Three well-separated planar blobs, 30 points each.
void make_blobs(std::uint64_t seed, Matrix& x, std::vector<int>& y) {
  numeric::Rng rng(seed);
  const double centers[3][2] = {{0.0, 0.0}, {6.0, 0.0}, {0.0, 6.0}};
  x = Matrix(90, 2);
  y.assign(90, 0);
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 30; ++i) {
      const std::size_t row = static_cast<std::size_t>(c * 30 + i);
      x.at(row, 0) = centers[c][0] + rng.normal(0.0, 0.5);
      x.at(row, 1) = centers[c][1] + rng.normal(0.0, 0.5);
      y[row] = c;
    }
}

}  // namespace

TEST_CASE("kernel formula values") {
  const std::vector<double> x = {1.0, 2.0};
  const std::vector<double> zero = {0.0, 0.0};
  const std::vector<double> v34 = {3.0, 4.0};

  KernelSpec rbf{KernelFamily::Rbf, 1.0, 3, 2.0, 1.0};
  CHECK(kernel_eval(rbf, x, x) == 1.0);  // zero distance

  KernelSpec linear{KernelFamily::Polynomial, 0.0, 1, 1.0, 1.0};
  CHECK(kernel_eval(linear, x, v34) == doctest::Approx(11.0));  // plain dot product

  KernelSpec laplace{KernelFamily::GaussianLaplace, 1.0, 3, 1.0, 1.0};
  CHECK(kernel_eval(laplace, zero, v34) == doctest::Approx(std::exp(-5.0)).epsilon(1e-12));

  const std::vector<double> one = {1.0};
  CHECK_THROWS_AS(kernel_eval(rbf, x, one), InvalidArgument);
  CHECK_THROWS_AS(validate_kernel(KernelSpec{KernelFamily::Rbf, 1.0, 3, 0.0, 1.0}),
                  InvalidArgument);
  CHECK_THROWS_AS(validate_kernel(KernelSpec{KernelFamily::Polynomial, 1.0, 0, 1.0, 1.0}),
                  InvalidArgument);
}

TEST_CASE("kernels are symmetric in their arguments") {
  numeric::Rng rng(3);
  for (const auto family :
       {KernelFamily::Polynomial, KernelFamily::Rbf, KernelFamily::GaussianLaplace}) {
    KernelSpec spec;
    spec.family = family;
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<double> a(4), b(4);
      for (auto& v : a) v = rng.normal();
      for (auto& v : b) v = rng.normal();
      CHECK(kernel_eval(spec, a, b) == kernel_eval(spec, b, a));
    }
  }
}

TEST_CASE("polynomial kernel equals the explicit degree-2 feature map") {
  // (1 + x.y)^2 = <phi(x), phi(y)> with phi = [1, sqrt(2) x_i, x_i^2,
  // sqrt(2) x_i x_j].
  auto feature_map = [](const std::vector<double>& x) {
    std::vector<double> phi;
    phi.push_back(1.0);
    for (double v : x) phi.push_back(std::sqrt(2.0) * v);
    for (std::size_t i = 0; i < x.size(); ++i) phi.push_back(x[i] * x[i]);
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = i + 1; j < x.size(); ++j)
        phi.push_back(std::sqrt(2.0) * x[i] * x[j]);
    return phi;
  };

  KernelSpec spec{KernelFamily::Polynomial, 1.0, 2, 1.0, 1.0};
  numeric::Rng rng(17);
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> x(4), y(4);
    for (auto& v : x) v = rng.normal();
    for (auto& v : y) v = rng.normal();
    const auto phi_x = feature_map(x);
    const auto phi_y = feature_map(y);
    double dot = 0.0;
    for (std::size_t i = 0; i < phi_x.size(); ++i) dot += phi_x[i] * phi_y[i];
    CHECK(kernel_eval(spec, x, y) == doctest::Approx(dot).epsilon(1e-10));
  }
}

TEST_CASE("gram matrices are symmetric and positive semi-definite") {
  numeric::Rng rng(29);
  Matrix points(25, 3);
  for (double& v : points.data) v = rng.normal();

  for (const auto family :
       {KernelFamily::Polynomial, KernelFamily::Rbf, KernelFamily::GaussianLaplace}) {
    KernelSpec spec;
    spec.family = family;
    const Matrix gram = gram_matrix(spec, points);
    for (std::size_t i = 0; i < gram.n_rows; ++i)
      for (std::size_t j = 0; j < gram.n_cols; ++j)
        CHECK(gram.at(i, j) == gram.at(j, i));
    const auto eig = numeric::eigen_symmetric(gram);
    CHECK(eig.values.back() >= -1e-8);
  }
}

TEST_CASE("two-point problem recovers the analytic maximum-margin solution") {
  const Matrix x = from_rows({{0.0, 0.0}, {2.0, 2.0}});
  const std::vector<int> y = {-1, +1};
  KernelSpec linear{KernelFamily::Polynomial, 0.0, 1, 1.0, 1.0};
  SvmTrainOptions options;
  options.c = 10.0;
  options.tol = 1e-8;
  const BinarySvm model = BinarySvm::train(x, y, linear, options);

  REQUIRE(model.multipliers().size() == 2);
  CHECK(model.multipliers()[0] == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(model.multipliers()[1] == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(model.bias() == doctest::Approx(-1.0).epsilon(1e-4));

  // Effective w = sum a_k t_k x_k.
  double w0 = 0.0, w1 = 0.0;
  for (std::size_t k = 0; k < model.multipliers().size(); ++k) {
    const double coef = model.multipliers()[k] * model.sv_labels()[k];
    w0 += coef * model.support_vectors().at(k, 0);
    w1 += coef * model.support_vectors().at(k, 1);
  }
  CHECK(w0 == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(w1 == doctest::Approx(0.5).epsilon(1e-4));

  // (1,1) lies on the decision surface; the tie rule sends it to +1.
  const std::vector<double> mid = {1.0, 1.0};
  CHECK(model.decision(mid) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(model.predict(mid) == +1);
  const std::vector<double> top = {2.0, 2.0};
  CHECK(model.decision(top) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("rbf kernel separates XOR") {
  const Matrix x = from_rows({{0, 0}, {1, 1}, {0, 1}, {1, 0}});
  const std::vector<int> y = {-1, -1, +1, +1};
  KernelSpec rbf{KernelFamily::Rbf, 1.0, 3, 0.5, 1.0};
  SvmTrainOptions options;
  options.c = 100.0;
  const BinarySvm model = BinarySvm::train(x, y, rbf, options);
  for (std::size_t i = 0; i < x.n_rows; ++i) CHECK(model.predict(x.row(i)) == y[i]);
}

TEST_CASE("smo matches the reference QP solution on tiny problems") {
  numeric::Rng rng(101);
  int checked = 0;
  for (int problem = 0; problem < 50; ++problem) {
    const std::size_t n = 2 + problem % 5;  // 2..6 points
    Matrix x(n, 2);
    std::vector<int> y(n);
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
      x.at(i, 0) = rng.normal();
      x.at(i, 1) = rng.normal();
      y[i] = rng.uniform01() < 0.5 ? -1 : +1;
      (y[i] > 0 ? has_pos : has_neg) = true;
    }
    if (!has_pos) y[0] = +1;
    if (!has_neg) y[n - 1] = -1;

    KernelSpec spec;
    switch (problem % 3) {
      case 0: spec = {KernelFamily::Rbf, 1.0, 3, 1.0, 1.0}; break;
      case 1: spec = {KernelFamily::Polynomial, 1.0, 2, 1.0, 1.0}; break;
      default: spec = {KernelFamily::GaussianLaplace, 1.0, 3, 1.0, 1.0}; break;
    }
    const double c = (problem % 4 == 0) ? 0.5 : (problem % 4 == 1 ? 1.0 : 10.0);

    SvmTrainOptions options;
    options.c = c;
    options.tol = 1e-8;
    options.seed = 1000 + problem;
    const BinarySvm model = BinarySvm::train(x, y, spec, options);

    // Dual feasibility on the stored support vectors.
    double sum_at = 0.0;
    for (std::size_t k = 0; k < model.multipliers().size(); ++k) {
      CHECK(model.multipliers()[k] >= 0.0);
      CHECK(model.multipliers()[k] <= c + 1e-12);
      sum_at += model.multipliers()[k] * model.sv_labels()[k];
    }
    CHECK(std::abs(sum_at) <= 1e-8);

    // Objective equivalence against the projected-gradient reference.
    const Matrix gram = gram_matrix(spec, x);
    const std::vector<double> reference = oracles::qp_reference_solve(gram, y, c);
    const double q_reference = oracles::dual_objective(gram, y, reference);

    const Matrix sv_gram = gram_matrix(spec, model.support_vectors());
    const double q_smo =
        oracles::dual_objective(sv_gram, model.sv_labels(), model.multipliers());
    CHECK(std::abs(q_smo - q_reference) <= 1e-6);
    ++checked;
  }
  CHECK(checked == 50);
}

TEST_CASE("converged models satisfy the KKT conditions") {
  numeric::Rng rng(55);
  Matrix x(40, 2);
  std::vector<int> y(40);
  for (std::size_t i = 0; i < 40; ++i) {
    const int label = i < 20 ? -1 : +1;
    x.at(i, 0) = rng.normal(label * 1.0, 1.2);
    x.at(i, 1) = rng.normal(0.0, 1.2);
    y[i] = label;
  }
  KernelSpec rbf{KernelFamily::Rbf, 1.0, 3, 1.5, 1.0};
  SvmTrainOptions options;
  options.c = 2.0;
  options.tol = 1e-4;
  const BinarySvm model = BinarySvm::train(x, y, rbf, options);

  // Reconstruct the full multiplier vector (zeros for non-SVs).
  const double kkt_tol = 10.0 * options.tol;
  for (std::size_t i = 0; i < x.n_rows; ++i) {
    double alpha = 0.0;
    for (std::size_t k = 0; k < model.support_vectors().n_rows; ++k) {
      bool same = true;
      for (std::size_t j = 0; j < x.n_cols; ++j)
        same = same && model.support_vectors().at(k, j) == x.at(i, j);
      if (same && model.sv_labels()[k] == y[i]) {
        alpha = model.multipliers()[k];
        break;
      }
    }
    const double margin = y[i] * model.decision(x.row(i));
    if (alpha <= 1e-10)
      CHECK(margin >= 1.0 - kkt_tol);
    else if (alpha >= options.c - 1e-10)
      CHECK(margin <= 1.0 + kkt_tol);
    else
      CHECK(std::abs(margin - 1.0) <= kkt_tol);
  }
}

TEST_CASE("exhausting the pass budget reports non-convergence") {
  const Matrix x = from_rows({{0, 0}, {1, 1}, {0, 1}, {1, 0}});
  const std::vector<int> y = {-1, -1, +1, +1};
  KernelSpec rbf{KernelFamily::Rbf, 1.0, 3, 0.5, 1.0};
  SvmTrainOptions options;
  options.c = 100.0;
  options.max_passes = 1;  // XOR needs more than one sweep
  try {
    BinarySvm::train(x, y, rbf, options);
    FAIL("expected a training error");
  } catch (const TrainingError& e) {
    CHECK(std::string(e.what()).find("KKT violation") != std::string::npos);
  }
}

TEST_CASE("single-label input is rejected") {
  const Matrix x = from_rows({{0, 0}, {1, 1}});
  CHECK_THROWS_AS(
      BinarySvm::train(x, {1, 1}, KernelSpec{KernelFamily::Rbf, 1, 3, 1, 1}, {}),
      InvalidArgument);
}

TEST_CASE("training accuracy does not decrease with c on separable data") {
  numeric::Rng rng(61);
  Matrix x(60, 2);
  std::vector<int> y(60);
  for (std::size_t i = 0; i < 60; ++i) {
    const int label = i % 2 == 0 ? -1 : +1;
    x.at(i, 0) = rng.normal(label * 3.0, 0.6);
    x.at(i, 1) = rng.normal(0.0, 0.6);
    y[i] = label;
  }
  KernelSpec linear{KernelFamily::Polynomial, 0.0, 1, 1.0, 1.0};
  double previous = -1.0;
  for (double c : {0.1, 1.0, 10.0, 100.0}) {
    SvmTrainOptions options;
    options.c = c;
    const BinarySvm model = BinarySvm::train(x, y, linear, options);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < x.n_rows; ++i)
      if (model.predict(x.row(i)) == y[i]) ++correct;
    const double accuracy = static_cast<double>(correct) / 60.0;
    CHECK(accuracy >= previous - 1e-12);
    previous = accuracy;
  }
}

TEST_CASE("one-vs-one multiclass separates three blobs") {
  Matrix x;
  std::vector<int> y;
  make_blobs(71, x, y);
  KernelSpec laplace{KernelFamily::GaussianLaplace, 1.0, 3, 1.0, 1.0};
  SvmTrainOptions options;
  options.c = 10.0;
  const MulticlassSvm model = MulticlassSvm::train(x, y, 3, laplace, options);
  CHECK(model.n_machines() == 3);

  std::size_t correct = 0;
  for (std::size_t i = 0; i < x.n_rows; ++i)
    if (model.predict(x.row(i)) == y[i]) ++correct;
  CHECK(static_cast<double>(correct) / static_cast<double>(x.n_rows) >= 0.95);
}

TEST_CASE("two-class multiclass degenerates to a single machine") {
  numeric::Rng rng(83);
  Matrix x(40, 2);
  std::vector<int> y01(40);
  std::vector<int> ypm(40);
  for (std::size_t i = 0; i < 40; ++i) {
    const int label = i % 2;
    x.at(i, 0) = rng.normal(label == 0 ? -2.5 : 2.5, 0.5);
    x.at(i, 1) = rng.normal(0.0, 0.5);
    y01[i] = label;
    ypm[i] = label == 1 ? +1 : -1;
  }
  KernelSpec rbf{KernelFamily::Rbf, 1.0, 3, 1.5, 1.0};
  SvmTrainOptions options;
  options.c = 5.0;
  const MulticlassSvm multi = MulticlassSvm::train(x, y01, 3, rbf, options);
  CHECK(multi.n_machines() == 1);
  const BinarySvm binary = BinarySvm::train(x, ypm, rbf, options);

  numeric::Rng probe(84);
  for (int rep = 0; rep < 100; ++rep) {
    const std::vector<double> p = {probe.normal(0.0, 3.0), probe.normal(0.0, 3.0)};
    const int expected = binary.predict(p) > 0 ? 1 : 0;
    CHECK(multi.predict(p) == expected);
  }
}

TEST_CASE("multiclass vote is invariant under positive rescaling of decisions") {
  numeric::Rng rng(91);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<MulticlassSvm::PairwiseVote> votes = {
        {0, 1, rng.normal()}, {0, 2, rng.normal()}, {1, 2, rng.normal()}};
    const int base = MulticlassSvm::vote(votes, 3);
    for (double lambda : {0.5, 2.0, 17.0}) {
      auto scaled_votes = votes;
      for (auto& v : scaled_votes) v.decision *= lambda;
      CHECK(MulticlassSvm::vote(scaled_votes, 3) == base);
    }
  }
}

TEST_CASE("multiclass training is deterministic") {
  Matrix x;
  std::vector<int> y;
  make_blobs(73, x, y);
  KernelSpec rbf{KernelFamily::Rbf, 1.0, 3, 1.0, 1.0};
  SvmTrainOptions options;
  options.seed = 7;
  const MulticlassSvm a = MulticlassSvm::train(x, y, 3, rbf, options);
  const MulticlassSvm b = MulticlassSvm::train(x, y, 3, rbf, options);
  for (std::size_t i = 0; i < x.n_rows; ++i) {
    CHECK(a.predict(x.row(i)) == b.predict(x.row(i)));
    CHECK(a.scores(x.row(i)) == b.scores(x.row(i)));
  }
}

TEST_CASE("binary svm decision is invariant under support vector permutation") {
  const Matrix x = from_rows({{0.0, 0.0}, {2.0, 2.0}, {0.5, 0.3}, {1.7, 1.9}});
  const std::vector<int> y = {-1, +1, -1, +1};
  KernelSpec rbf{KernelFamily::Rbf, 1.0, 3, 1.0, 1.0};
  const BinarySvm model = BinarySvm::train(x, y, rbf, {});
  REQUIRE(model.support_vectors().n_rows >= 2);

  // Reverse the SV lines of the serialized model and reload.
  std::ostringstream out;
  model.save(out);
  std::istringstream split(out.str());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(split, line)) lines.push_back(line);
  const std::size_t first_sv = lines.size() - model.support_vectors().n_rows;
  std::reverse(lines.begin() + static_cast<std::ptrdiff_t>(first_sv), lines.end());
  std::string permuted_text;
  for (const auto& l : lines) permuted_text += l + "\n";

  std::istringstream in(permuted_text);
  const BinarySvm permuted = BinarySvm::load(in);
  numeric::Rng rng(99);
  for (int rep = 0; rep < 20; ++rep) {
    const std::vector<double> probe = {rng.normal(), rng.normal()};
    CHECK(permuted.decision(probe) ==
          doctest::Approx(model.decision(probe)).epsilon(1e-12));
    CHECK(permuted.predict(probe) == model.predict(probe));
  }
}

// --------------------------------------------------------------------------
// Baselines

TEST_CASE("knn with k=1 memorizes the training set") {
  Matrix x;
  std::vector<int> y;
  make_blobs(11, x, y);
  const KnnClassifier model = KnnClassifier::train(x, y, 3, 1);
  for (std::size_t i = 0; i < x.n_rows; ++i) CHECK(model.predict(x.row(i)) == y[i]);
}

TEST_CASE("knn scores are vote fractions") {
  const Matrix x = from_rows({{0.0}, {0.1}, {0.2}, {5.0}, {5.1}});
  const std::vector<int> y = {0, 0, 0, 1, 1};
  const KnnClassifier model = KnnClassifier::train(x, y, 2, 3);
  const std::vector<double> probe = {0.05};
  const auto scores = model.scores(probe);
  CHECK(scores[0] == doctest::Approx(1.0));
  CHECK(scores[1] == doctest::Approx(0.0));
}

TEST_CASE("gaussian naive bayes places the balanced boundary at the midpoint") {
  numeric::Rng rng(13);
  Matrix x(400, 1);
  std::vector<int> y(400);
  for (std::size_t i = 0; i < 400; ++i) {
    const int label = i % 2;
    x.at(i, 0) = rng.normal(label == 0 ? -3.0 : 3.0, 1.0);
    y[i] = label;
  }
  const GaussianNbClassifier model = GaussianNbClassifier::train(x, y, 2, 1e-9);

  double boundary = 0.0;
  int previous = model.predict(std::vector<double>{-1.0});
  for (double v = -1.0; v <= 1.0; v += 0.001) {
    const int current = model.predict(std::vector<double>{v});
    if (current != previous) {
      boundary = v;
      break;
    }
    previous = current;
  }
  CHECK(std::abs(boundary) < 0.1);
}

TEST_CASE("cart finds a perfect single split") {
  const Matrix x = from_rows({{0.1}, {0.2}, {0.3}, {0.9}, {1.0}, {1.1}});
  const std::vector<int> y = {0, 0, 0, 2, 2, 2};
  const CartClassifier model = CartClassifier::train(x, y, 3, 12, 2);
  CHECK(model.depth() == 1);
  for (std::size_t i = 0; i < x.n_rows; ++i) CHECK(model.predict(x.row(i)) == y[i]);
}

TEST_CASE("lda and qda separate gaussian classes and report regularization") {
  numeric::Rng rng(43);
  Matrix x(300, 2);
  std::vector<int> y(300);
  for (std::size_t i = 0; i < 300; ++i) {
    const int label = static_cast<int>(i % 3);
    x.at(i, 0) = rng.normal(label * 4.0, 0.8);
    x.at(i, 1) = rng.normal(label == 1 ? 3.0 : 0.0, 0.8);
    y[i] = label;
  }
  const LdaClassifier lda = LdaClassifier::train(x, y, 3);
  const QdaClassifier qda = QdaClassifier::train(x, y, 3);
  CHECK_FALSE(lda.regularized());
  std::size_t lda_correct = 0, qda_correct = 0;
  for (std::size_t i = 0; i < x.n_rows; ++i) {
    lda_correct += lda.predict(x.row(i)) == y[i];
    qda_correct += qda.predict(x.row(i)) == y[i];
  }
  CHECK(lda_correct >= 290);
  CHECK(qda_correct >= 290);

  // Duplicate feature: singular covariance triggers the reported ridge.
  Matrix dup(300, 3);
  for (std::size_t i = 0; i < 300; ++i) {
    dup.at(i, 0) = x.at(i, 0);
    dup.at(i, 1) = x.at(i, 1);
    dup.at(i, 2) = x.at(i, 0);
  }
  const LdaClassifier lda_dup = LdaClassifier::train(dup, y, 3);
  CHECK(lda_dup.regularized());
  CHECK_FALSE(lda_dup.notes().empty());
  const QdaClassifier qda_dup = QdaClassifier::train(dup, y, 3);
  CHECK(qda_dup.regularized());
}

TEST_CASE("baseline scores rank the predicted class first") {
  Matrix x;
  std::vector<int> y;
  make_blobs(47, x, y);
  ModelHyperparams params;
  for (const ModelKind kind :
       {ModelKind::Knn, ModelKind::GaussianNb, ModelKind::Cart, ModelKind::Lda,
        ModelKind::Qda}) {
    const auto model = train_model(kind, x, y, 3, params);
    for (std::size_t i = 0; i < x.n_rows; i += 7) {
      const int predicted = model->predict(x.row(i));
      const auto scores = model->scores(x.row(i));
      int best = 0;
      for (int c = 1; c < 3; ++c)
        if (scores[c] > scores[best]) best = c;
      CHECK(best == predicted);
    }
  }
}

TEST_CASE("every model kind round-trips through the text format") {
  dataset::SyntheticOptions synth;
  synth.seed = 3;
  synth.n = 120;
  const dataset::FeatureTable table = dataset::generate_synthetic(synth);
  std::vector<int> labels(table.rows());
  for (std::size_t i = 0; i < table.rows(); ++i)
    labels[i] = static_cast<int>(table.labels[i]);

  // Normalize features the way the harness would, so SVM training is quick.
  Matrix x = table.features;
  for (std::size_t j = 0; j < x.n_cols; ++j) {
    double lo = x.at(0, j), hi = x.at(0, j);
    for (std::size_t i = 1; i < x.n_rows; ++i) {
      lo = std::min(lo, x.at(i, j));
      hi = std::max(hi, x.at(i, j));
    }
    for (std::size_t i = 0; i < x.n_rows; ++i)
      x.at(i, j) = hi > lo ? (x.at(i, j) - lo) / (hi - lo) : 0.0;
  }

  ModelHyperparams params;
  params.seed = 5;
  for (const ModelKind kind : default_model_kinds()) {
    const auto model = train_model(kind, x, labels, 3, params);
    std::ostringstream out;
    save_model(*model, out);
    std::istringstream in(out.str());
    const auto reloaded = load_model(in);
    CHECK(reloaded->id() == model->id());
    for (std::size_t i = 0; i < x.n_rows; i += 11) {
      CHECK(model->predict(x.row(i)) == reloaded->predict(x.row(i)));
      CHECK(model->scores(x.row(i)) == reloaded->scores(x.row(i)));
    }
  }
}

TEST_CASE("model kind names round-trip and reject unknowns") {
  for (const ModelKind kind : default_model_kinds())
    CHECK(model_kind_from_id(model_id(kind)) == kind);
  CHECK_THROWS_AS(model_kind_from_id("boosted-stumps"), InvalidArgument);
}
