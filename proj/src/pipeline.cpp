#include "sdc/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>

#include "sdc/csv.hpp"
#include "sdc/errors.hpp"
#include "sdc/pps.hpp"
#include "sdc/preprocess.hpp"

namespace sdc::pipeline {

namespace {

namespace fs = std::filesystem;

// Removes everything registered with track() unless commit() ran first.
class OutputGuard {
 public:
  ~OutputGuard() {
    if (committed_) return;
    for (const auto& path : paths_) {
      std::error_code ec;
      fs::remove(path, ec);
    }
  }
  void track(const std::string& path) { paths_.push_back(path); }
  void commit() { committed_ = true; }
  const std::vector<std::string>& paths() const { return paths_; }

 private:
  std::vector<std::string> paths_;
  bool committed_ = false;
};

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string record_id(const std::string& path) {
  return fs::path(path).stem().string();
}

struct StructuralRow {
  double htot, nvx, nvy, e0;
};

std::map<std::string, StructuralRow> read_structural_sidecar(const std::string& path) {
  const csv::Document doc = csv::read_file(path);
  std::map<std::string, std::size_t> col;
  for (std::size_t j = 0; j < doc.header.size(); ++j) col[doc.header[j]] = j;
  for (const char* name : {"id", "Htot", "nvx", "nvy", "e0"})
    if (!col.count(name)) throw SchemaError(path + ": missing column " + name);

  std::map<std::string, StructuralRow> out;
  for (std::size_t i = 0; i < doc.rows.size(); ++i) {
    const auto& cells = doc.rows[i];
    const std::string ctx = path + ": row " + std::to_string(i + 1);
    if (cells.size() != doc.header.size()) throw ParseError(ctx + ": ragged row");
    const std::string id = cells[col["id"]];
    if (out.count(id)) throw SchemaError(ctx + ": duplicate id " + id);
    const StructuralRow row = {csv::parse_double(cells[col["Htot"]], ctx),
                               csv::parse_double(cells[col["nvx"]], ctx),
                               csv::parse_double(cells[col["nvy"]], ctx),
                               csv::parse_double(cells[col["e0"]], ctx)};
    if (!(row.htot > 0.0)) throw SchemaError(ctx + ": Htot must be positive");
    if (row.nvx < 0.0 || row.nvx > 1.0 || row.nvy < 0.0 || row.nvy > 1.0)
      throw SchemaError(ctx + ": wall ratios must lie in [0,1]");
    if (row.e0 < 0.0) throw SchemaError(ctx + ": e0 must be nonnegative");
    out[id] = row;
  }
  return out;
}

std::map<std::string, double> read_midr_sidecar(const std::string& path) {
  const csv::Document doc = csv::read_file(path);
  std::map<std::string, std::size_t> col;
  for (std::size_t j = 0; j < doc.header.size(); ++j) col[doc.header[j]] = j;
  for (const char* name : {"id", "MIDR"})
    if (!col.count(name)) throw SchemaError(path + ": missing column " + name);

  std::map<std::string, double> out;
  for (std::size_t i = 0; i < doc.rows.size(); ++i) {
    const auto& cells = doc.rows[i];
    const std::string ctx = path + ": row " + std::to_string(i + 1);
    if (cells.size() != doc.header.size()) throw ParseError(ctx + ": ragged row");
    const std::string id = cells[col["id"]];
    if (out.count(id)) throw SchemaError(ctx + ": duplicate id " + id);
    out[id] = csv::parse_double(cells[col["MIDR"]], ctx);
  }
  return out;
}

}  // namespace

dataset::FeatureTable extract_features(const std::vector<std::string>& record_paths,
                                       const std::string& structural_csv,
                                       const std::string& midr_csv,
                                       const ExtractOptions& options) {
  if (record_paths.empty()) throw InvalidArgument("extract: no records given");
  const auto structural = read_structural_sidecar(structural_csv);
  const auto midr = read_midr_sidecar(midr_csv);

  for (const auto& path : record_paths) {
    const std::string id = record_id(path);
    if (!structural.count(id))
      throw SchemaError("extract: id '" + id + "' missing from " + structural_csv);
    if (!midr.count(id))
      throw SchemaError("extract: id '" + id + "' missing from " + midr_csv);
  }

  const std::size_t n = record_paths.size();
  dataset::FeatureTable table;
  table.tag = "extracted";
  table.features = numeric::Matrix(n, dataset::kNumFeatures);
  table.midr.resize(n);
  table.labels.resize(n);

  numeric::parallel_for(n, options.workers, [&](std::size_t i) {
    const std::string& path = record_paths[i];
    const std::string id = record_id(path);
    const signal::Accelerogram acc =
        signal::load_accelerogram(path, options.format, options.unit);
    const signal::IntensityMeasures im = signal::compute_intensity_measures(acc, options.im);

    const StructuralRow& s = structural.at(id);
    auto row = table.features.row(i);
    row[0] = s.htot;
    row[1] = s.nvx;
    row[2] = s.nvy;
    row[3] = s.e0;
    const auto ims = signal::to_array(im);
    for (int j = 0; j < signal::kNumIntensityMeasures; ++j) row[4 + j] = ims[j];

    table.midr[i] = midr.at(id);
    table.labels[i] = dataset::classify_damage(table.midr[i]);
  });

  dataset::validate_table(table);
  return table;
}

std::string comparison_file(const std::string& out_dir) { return join(out_dir, "comparison.csv"); }
std::string confusion_file(const std::string& out_dir, const std::string& model_id) {
  return join(out_dir, "confusion_" + model_id + ".csv");
}
std::string class_error_file(const std::string& out_dir, const std::string& model_id) {
  return join(out_dir, "class_prediction_error_" + model_id + ".csv");
}
std::string roc_points_file(const std::string& out_dir, const std::string& model_id) {
  return join(out_dir, "roc_points_" + model_id + ".csv");
}
std::string folds_file(const std::string& out_dir, const std::string& model_id) {
  return join(out_dir, "folds_" + model_id + ".csv");
}

std::vector<std::string> write_preprocess_reports(const dataset::FeatureTable& table,
                                                  const PreprocessReportOptions& options,
                                                  const std::string& out_dir) {
  dataset::validate_table(table);
  ensure_directory(out_dir);
  OutputGuard guard;

  const auto& names = dataset::feature_names();
  const numeric::Matrix& x = table.features;

  {
    const std::string path = join(out_dir, "normalization_stats.csv");
    guard.track(path);
    const preprocess::MinMaxModel model =
        preprocess::fit_minmax(x, options.range_min, options.range_max);
    csv::Writer out(path);
    out.write_row({"feature", "min", "max", "new_min", "new_max", "degenerate"});
    for (std::size_t j = 0; j < x.n_cols; ++j)
      out.write_row({names[j], numeric::format_g17(model.min_value[j]),
                     numeric::format_g17(model.max_value[j]),
                     numeric::format_g17(model.new_min), numeric::format_g17(model.new_max),
                     model.degenerate[j] ? "1" : "0"});
    out.close();

    if (options.emit_normalized) {
      const std::string norm_path = join(out_dir, "normalized.csv");
      guard.track(norm_path);
      dataset::FeatureTable normalized = table;
      normalized.features = preprocess::apply_minmax(model, x);
      dataset::write_table(normalized, norm_path);
    }
  }

  {
    const std::string path = join(out_dir, "iqr_flags.csv");
    guard.track(path);
    const preprocess::IqrReport report = preprocess::iqr_flags(x);
    csv::Writer out(path);
    out.write_row({"feature", "row", "value", "q1", "q3", "lower_fence", "upper_fence"});
    for (std::size_t j = 0; j < x.n_cols; ++j) {
      const auto& f = report.per_feature[j];
      for (std::size_t i = 0; i < x.n_rows; ++i) {
        if (!report.flagged(i, j)) continue;
        out.write_row({names[j], std::to_string(i), numeric::format_g17(x.at(i, j)),
                       numeric::format_g17(f.q1), numeric::format_g17(f.q3),
                       numeric::format_g17(f.lower_fence),
                       numeric::format_g17(f.upper_fence)});
      }
    }
    out.close();
  }

  {
    const std::string path = join(out_dir, "pca_scree.csv");
    guard.track(path);
    const preprocess::PcaModel model = preprocess::fit_pca(x);
    csv::Writer out(path);
    out.write_row({"component", "eigenvalue", "explained_variance_ratio", "cumulative_ratio"});
    double cumulative = 0.0;
    for (std::size_t i = 0; i < model.eigenvalues.size(); ++i) {
      cumulative += model.explained_ratio[i];
      out.write_row({std::to_string(i + 1), numeric::format_g17(model.eigenvalues[i]),
                     numeric::format_g17(model.explained_ratio[i]),
                     numeric::format_g17(cumulative)});
    }
    out.close();
  }

  {
    const std::string path = join(out_dir, "pps_matrix.csv");
    guard.track(path);

    // Features plus MIDR (numeric) and CLASS (categorical) when present.
    std::vector<std::string> pps_names(names.begin(), names.end());
    std::vector<std::uint8_t> categorical(names.size(), 0);
    std::size_t extra = (table.has_midr() ? 1 : 0) + (table.has_labels() ? 1 : 0);
    numeric::Matrix with_targets(x.n_rows, x.n_cols + extra);
    for (std::size_t i = 0; i < x.n_rows; ++i)
      std::copy(x.row(i).begin(), x.row(i).end(), with_targets.row(i).begin());
    std::size_t col = x.n_cols;
    if (table.has_midr()) {
      pps_names.push_back(dataset::kMidrColumn);
      categorical.push_back(0);
      for (std::size_t i = 0; i < x.n_rows; ++i) with_targets.at(i, col) = table.midr[i];
      ++col;
    }
    if (table.has_labels()) {
      pps_names.push_back(dataset::kClassColumn);
      categorical.push_back(1);
      for (std::size_t i = 0; i < x.n_rows; ++i)
        with_targets.at(i, col) = static_cast<double>(table.labels[i]);
      ++col;
    }

    preprocess::PpsOptions pps_options;
    pps_options.cv_folds = options.pps_folds;
    pps_options.seed = options.seed;
    const preprocess::PpsReport report =
        preprocess::pps_matrix(with_targets, pps_names, categorical, pps_options);

    csv::Writer out(path);
    out.write_row({"predictor", "target", "score", "metric", "degenerate_target"});
    for (std::size_t p = 0; p < pps_names.size(); ++p)
      for (std::size_t t = 0; t < pps_names.size(); ++t) {
        const auto& cell = report.at(p, t);
        out.write_row({pps_names[p], pps_names[t], numeric::format_g17(cell.score),
                       cell.metric == preprocess::PpsMetric::MeanAbsoluteError
                           ? "mae"
                           : "weighted_f",
                       cell.degenerate_target ? "1" : "0"});
      }
    out.close();
  }

  guard.commit();
  return guard.paths();
}

std::vector<CompareRow> run_compare(const dataset::FeatureTable& table,
                                    const CompareOptions& options,
                                    const std::string& out_dir) {
  dataset::validate_table(table);
  if (!table.has_labels()) throw InvalidArgument("compare: table has no CLASS column");
  if (options.models.empty()) throw InvalidArgument("compare: no models configured");
  ensure_directory(out_dir);

  std::vector<int> labels(table.rows());
  for (std::size_t i = 0; i < table.rows(); ++i)
    labels[i] = static_cast<int>(table.labels[i]);

  const eval::FoldPlan plan =
      options.stratify ? eval::FoldPlan::make_stratified(labels, dataset::kNumClasses,
                                                         options.folds, options.seed)
                       : eval::FoldPlan::make(table.rows(), options.folds, options.seed);

  OutputGuard guard;
  struct ModelOutcome {
    CompareRow row;
    eval::CvResult cv;
  };
  std::vector<ModelOutcome> outcomes;
  outcomes.reserve(options.models.size());

  for (models::ModelKind kind : options.models) {
    models::ModelHyperparams hyper = options.hyper;
    hyper.seed = options.seed;
    eval::CvResult cv = eval::cross_validate(table.features, labels, dataset::kNumClasses,
                                             kind, hyper, plan, options.preprocess,
                                             options.workers);
    CompareRow row{kind, cv.metrics, cv.any_fold_skipped};
    if (!cv.scores_available) row.metrics.roc_auc = 0.0;  // score-free models report 0
    outcomes.push_back({row, std::move(cv)});
  }

  // Per-model artifacts.
  for (const auto& outcome : outcomes) {
    const std::string id = models::model_id(outcome.row.kind);
    const eval::CvResult& cv = outcome.cv;

    {
      const std::string path = confusion_file(out_dir, id);
      guard.track(path);
      csv::Writer out(path);
      std::vector<std::string> header{"true_class"};
      for (int j = 0; j < cv.pooled.n_classes(); ++j)
        header.push_back("pred_" + std::to_string(j));
      out.write_row(header);
      for (int i = 0; i < cv.pooled.n_classes(); ++i) {
        std::vector<std::string> cells{std::to_string(i)};
        for (int j = 0; j < cv.pooled.n_classes(); ++j)
          cells.push_back(std::to_string(cv.pooled.at(i, j)));
        out.write_row(cells);
      }
      out.close();
    }
    {
      const std::string path = class_error_file(out_dir, id);
      guard.track(path);
      csv::Writer out(path);
      std::vector<std::string> header{"true_class", "support"};
      for (int j = 0; j < cv.pooled.n_classes(); ++j)
        header.push_back("into_" + std::to_string(j));
      out.write_row(header);
      for (const auto& row : eval::class_prediction_error(cv.pooled)) {
        std::vector<std::string> cells{std::to_string(row.true_class),
                                       std::to_string(row.support)};
        for (std::int64_t c : row.predicted_into) cells.push_back(std::to_string(c));
        out.write_row(cells);
      }
      out.close();
    }
    {
      const std::string path = roc_points_file(out_dir, id);
      guard.track(path);
      csv::Writer out(path);
      out.write_row({"class", "fpr", "tpr", "threshold"});
      std::vector<int> truth01;
      std::vector<double> class_scores;
      for (int c = 0; c < cv.pooled.n_classes(); ++c) {
        truth01.clear();
        class_scores.clear();
        for (std::size_t i = 0; i < table.rows(); ++i) {
          if (!cv.evaluated[i]) continue;
          truth01.push_back(labels[i] == c ? 1 : 0);
          class_scores.push_back(cv.oof_scores.at(i, c));
        }
        const bool has_pos =
            std::find(truth01.begin(), truth01.end(), 1) != truth01.end();
        const bool has_neg =
            std::find(truth01.begin(), truth01.end(), 0) != truth01.end();
        if (!cv.scores_available || !has_pos || !has_neg) continue;
        for (const auto& point : eval::roc_curve(truth01, class_scores))
          out.write_row({std::to_string(c), numeric::format_g17(point.fpr),
                         numeric::format_g17(point.tpr),
                         numeric::format_g17(point.threshold)});
      }
      out.close();
    }
    {
      const std::string path = folds_file(out_dir, id);
      guard.track(path);
      csv::Writer out(path);
      out.write_row({"fold", "accuracy", "roc", "recall", "precision", "f_score", "cks",
                     "mcc", "time_sec", "skipped"});
      for (std::size_t f = 0; f < cv.per_fold.size(); ++f) {
        const auto& fm = cv.per_fold[f];
        out.write_row({std::to_string(f), numeric::format_fixed(fm.metrics.accuracy, 4),
                       numeric::format_fixed(fm.metrics.roc_auc, 4),
                       numeric::format_fixed(fm.metrics.recall, 4),
                       numeric::format_fixed(fm.metrics.precision, 4),
                       numeric::format_fixed(fm.metrics.f_score, 4),
                       numeric::format_fixed(fm.metrics.cks, 4),
                       numeric::format_fixed(fm.metrics.mcc, 4),
                       numeric::format_fixed(fm.metrics.wall_time_sec, 3),
                       fm.skipped ? "1" : "0"});
      }
      out.close();
    }
  }

  // Ranked comparison table, descending accuracy (registration order on ties).
  std::vector<CompareRow> rows;
  rows.reserve(outcomes.size());
  for (const auto& outcome : outcomes) rows.push_back(outcome.row);
  std::stable_sort(rows.begin(), rows.end(), [](const CompareRow& a, const CompareRow& b) {
    return a.metrics.accuracy > b.metrics.accuracy;
  });

  {
    const std::string path = comparison_file(out_dir);
    guard.track(path);
    csv::Writer out(path);
    out.write_row({"ID", "Model", "Accuracy", "ROC", "Recall", "Precision", "F-Score",
                   "CKS", "MCC", "Time/sec"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& m = rows[i].metrics;
      out.write_row({std::to_string(i + 1), models::model_display_name(rows[i].kind),
                     numeric::format_fixed(m.accuracy, 4), numeric::format_fixed(m.roc_auc, 4),
                     numeric::format_fixed(m.recall, 4), numeric::format_fixed(m.precision, 4),
                     numeric::format_fixed(m.f_score, 4), numeric::format_fixed(m.cks, 4),
                     numeric::format_fixed(m.mcc, 4),
                     numeric::format_fixed(m.wall_time_sec, 3)});
    }
    out.close();
  }

  guard.commit();
  return rows;
}

}  // namespace sdc::pipeline
