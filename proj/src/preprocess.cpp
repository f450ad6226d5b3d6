#include "sdc/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "sdc/errors.hpp"

namespace sdc::preprocess {

MinMaxModel fit_minmax(const numeric::Matrix& x, double new_min, double new_max) {
  if (x.n_rows == 0) throw InvalidArgument("fit_minmax: empty table");
  if (!(new_max > new_min)) throw InvalidArgument("fit_minmax: empty target range");

  MinMaxModel m;
  m.new_min = new_min;
  m.new_max = new_max;
  m.min_value.resize(x.n_cols);
  m.max_value.resize(x.n_cols);
  m.degenerate.resize(x.n_cols, 0);
  for (std::size_t j = 0; j < x.n_cols; ++j) {
    double lo = x.at(0, j), hi = x.at(0, j);
    for (std::size_t i = 1; i < x.n_rows; ++i) {
      lo = std::min(lo, x.at(i, j));
      hi = std::max(hi, x.at(i, j));
    }
    m.min_value[j] = lo;
    m.max_value[j] = hi;
    m.degenerate[j] = (hi == lo) ? 1 : 0;
  }
  return m;
}

numeric::Matrix apply_minmax(const MinMaxModel& model, const numeric::Matrix& x) {
  if (model.size() == 0) throw InvalidArgument("apply_minmax: model not fitted");
  if (x.n_cols != model.size())
    throw InvalidArgument("apply_minmax: table has " + std::to_string(x.n_cols) +
                          " features, model was fitted on " + std::to_string(model.size()));

  numeric::Matrix out(x.n_rows, x.n_cols);
  const double span = model.new_max - model.new_min;
  for (std::size_t j = 0; j < x.n_cols; ++j) {
    const double lo = model.min_value[j];
    const double width = model.max_value[j] - lo;
    for (std::size_t i = 0; i < x.n_rows; ++i) {
      out.at(i, j) = model.degenerate[j]
                         ? model.new_min
                         : (x.at(i, j) - lo) / width * span + model.new_min;
    }
  }
  return out;
}

IqrReport iqr_flags(const numeric::Matrix& x) {
  if (x.n_rows < 4) throw InvalidArgument("iqr_flags: need at least 4 rows per feature");

  IqrReport report;
  report.n_rows = x.n_rows;
  report.n_cols = x.n_cols;
  report.per_feature.resize(x.n_cols);
  report.mask.assign(x.n_rows * x.n_cols, 0);

  std::vector<double> sorted(x.n_rows);
  for (std::size_t j = 0; j < x.n_cols; ++j) {
    for (std::size_t i = 0; i < x.n_rows; ++i) sorted[i] = x.at(i, j);
    std::sort(sorted.begin(), sorted.end());

    IqrFeature& f = report.per_feature[j];
    f.q1 = numeric::quantile_sorted(sorted, 0.25);
    f.q3 = numeric::quantile_sorted(sorted, 0.75);
    f.iqr = f.q3 - f.q1;
    f.lower_fence = f.q1 - 1.5 * f.iqr;
    f.upper_fence = f.q3 + 1.5 * f.iqr;
    for (std::size_t i = 0; i < x.n_rows; ++i) {
      const double v = x.at(i, j);
      if (v < f.lower_fence || v > f.upper_fence) {
        report.mask[i * x.n_cols + j] = 1;
        ++f.flagged;
      }
    }
  }
  return report;
}

PcaModel fit_pca(const numeric::Matrix& x) {
  if (x.n_rows < 2) throw InvalidArgument("fit_pca: need at least 2 rows");
  const std::size_t n = x.n_rows, d = x.n_cols;

  PcaModel model;
  model.mean.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) model.mean[j] += x.at(i, j);
  for (double& m : model.mean) m /= static_cast<double>(n);

  numeric::Matrix cov(d, d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < d; ++a) {
      const double xa = x.at(i, a) - model.mean[a];
      for (std::size_t b = a; b < d; ++b)
        cov.at(a, b) += xa * (x.at(i, b) - model.mean[b]);
    }
  }
  const double denom = static_cast<double>(n - 1);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) {
      cov.at(a, b) /= denom;
      cov.at(b, a) = cov.at(a, b);
    }

  numeric::SymmetricEigen eig = numeric::eigen_symmetric(cov);
  model.eigenvalues = std::move(eig.values);
  model.components = std::move(eig.vectors);
  for (double& v : model.eigenvalues)
    if (v < 0.0 && v > -1e-12) v = 0.0;  // clip eigen noise on rank-deficient data

  double total = 0.0;
  for (double v : model.eigenvalues) total += v;
  model.explained_ratio.resize(d);
  for (std::size_t i = 0; i < d; ++i)
    model.explained_ratio[i] = total > 0.0 ? model.eigenvalues[i] / total : 0.0;
  return model;
}

numeric::Matrix project_pca(const PcaModel& model, const numeric::Matrix& x, std::size_t d) {
  if (d == 0 || d > model.dim())
    throw InvalidArgument("project_pca: component count out of range");
  if (x.n_cols != model.dim())
    throw InvalidArgument("project_pca: dimension mismatch");

  numeric::Matrix out(x.n_rows, d);
  for (std::size_t i = 0; i < x.n_rows; ++i) {
    for (std::size_t c = 0; c < d; ++c) {
      double acc = 0.0;
      for (std::size_t j = 0; j < model.dim(); ++j)
        acc += model.components.at(c, j) * (x.at(i, j) - model.mean[j]);
      out.at(i, c) = acc;
    }
  }
  return out;
}

numeric::Matrix reconstruct_pca(const PcaModel& model, const numeric::Matrix& projected) {
  if (projected.n_cols > model.dim())
    throw InvalidArgument("reconstruct_pca: too many components");
  numeric::Matrix out(projected.n_rows, model.dim());
  for (std::size_t i = 0; i < projected.n_rows; ++i) {
    for (std::size_t j = 0; j < model.dim(); ++j) {
      double acc = model.mean[j];
      for (std::size_t c = 0; c < projected.n_cols; ++c)
        acc += model.components.at(c, j) * projected.at(i, c);
      out.at(i, j) = acc;
    }
  }
  return out;
}

}  // namespace sdc::preprocess
