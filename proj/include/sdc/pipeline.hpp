#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdc/classifier.hpp"
#include "sdc/cross_validate.hpp"
#include "sdc/dataset.hpp"
#include "sdc/signal.hpp"

namespace sdc::pipeline {

struct ExtractOptions {
  signal::RecordFormat format = signal::RecordFormat::Auto;
  signal::RecordUnit unit = signal::RecordUnit::MetersPerSecond2;
  signal::ImConfig im;
  int workers = 1;
};

// One feature row per record: the structural sidecar supplies Htot/nvx/nvy/e0
// and the MIDR sidecar the drift, both keyed by record id (the file stem).
dataset::FeatureTable extract_features(const std::vector<std::string>& record_paths,
                                       const std::string& structural_csv,
                                       const std::string& midr_csv,
                                       const ExtractOptions& options);

struct PreprocessReportOptions {
  int pps_folds = 4;
  std::uint64_t seed = 42;
  double range_min = 0.0;
  double range_max = 1.0;
  bool emit_normalized = false;
};

// Writes normalization_stats.csv, iqr_flags.csv, pca_scree.csv and
// pps_matrix.csv (plus normalized.csv when requested) into out_dir. Partial
// outputs are removed if any step fails. Returns the paths written.
std::vector<std::string> write_preprocess_reports(const dataset::FeatureTable& table,
                                                  const PreprocessReportOptions& options,
                                                  const std::string& out_dir);

struct CompareOptions {
  std::vector<models::ModelKind> models = models::default_model_kinds();
  int folds = 10;
  std::uint64_t seed = 42;
  bool stratify = true;
  int workers = 1;
  models::ModelHyperparams hyper;
  eval::PreprocessConfig preprocess;
};

struct CompareRow {
  models::ModelKind kind;
  eval::MetricVector metrics;
  bool any_fold_skipped = false;
};

// Cross-validates every configured model and writes comparison.csv (sorted by
// descending accuracy) plus per-model confusion, class-prediction-error,
// ROC-point and per-fold files. Returns the sorted rows.
std::vector<CompareRow> run_compare(const dataset::FeatureTable& table,
                                    const CompareOptions& options,
                                    const std::string& out_dir);

// Names of the files run_compare produces for a model id.
std::string comparison_file(const std::string& out_dir);
std::string confusion_file(const std::string& out_dir, const std::string& model_id);
std::string class_error_file(const std::string& out_dir, const std::string& model_id);
std::string roc_points_file(const std::string& out_dir, const std::string& model_id);
std::string folds_file(const std::string& out_dir, const std::string& model_id);

}  // namespace sdc::pipeline
