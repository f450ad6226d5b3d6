#include "sdc.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "sdc/classifier.hpp"
#include "sdc/cross_validate.hpp"
#include "sdc/csv.hpp"
#include "sdc/dataset.hpp"
#include "sdc/errors.hpp"
#include "sdc/pipeline.hpp"
#include "sdc/preprocess.hpp"
#include "sdc/signal.hpp"
#include "sdc/synthetic.hpp"

struct sdc_table {
  sdc::dataset::FeatureTable table;
};

struct sdc_model {
  std::unique_ptr<sdc::models::Classifier> classifier;
  std::string id;
  // Models are trained on normalized features; the fitted statistics ride
  // along so prediction accepts raw units.
  bool normalized = false;
  sdc::preprocess::MinMaxModel norm;
  mutable std::string notes_cache;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

template <typename Fn>
sdc_status guarded(Fn&& fn) {
  try {
    fn();
    return SDC_OK;
  } catch (const sdc::InvalidArgument& e) {
    set_error(e.what());
    return SDC_ERR_INVALID_ARGUMENT;
  } catch (const sdc::IoError& e) {
    set_error(e.what());
    return SDC_ERR_IO;
  } catch (const sdc::ParseError& e) {
    set_error(e.what());
    return SDC_ERR_PARSE;
  } catch (const sdc::SchemaError& e) {
    set_error(e.what());
    return SDC_ERR_SCHEMA;
  } catch (const sdc::NumericError& e) {
    set_error(e.what());
    return SDC_ERR_NUMERIC;
  } catch (const sdc::TrainingError& e) {
    set_error(e.what());
    return SDC_ERR_TRAINING;
  } catch (const std::exception& e) {
    set_error(e.what());
    return SDC_ERR_UNKNOWN;
  } catch (...) {
    set_error("unknown error");
    return SDC_ERR_UNKNOWN;
  }
}

sdc_status require(bool condition, const char* message) {
  if (condition) return SDC_OK;
  set_error(message);
  return SDC_ERR_INVALID_ARGUMENT;
}

sdc::signal::RecordFormat to_format(sdc_record_format format) {
  switch (format) {
    case SDC_FORMAT_AUTO: return sdc::signal::RecordFormat::Auto;
    case SDC_FORMAT_TWO_COLUMN: return sdc::signal::RecordFormat::TwoColumn;
    case SDC_FORMAT_NPTS_DT: return sdc::signal::RecordFormat::HeaderNptsDt;
  }
  throw sdc::InvalidArgument("unknown record format");
}

sdc::signal::RecordUnit to_unit(sdc_record_unit unit) {
  switch (unit) {
    case SDC_UNIT_MPS2: return sdc::signal::RecordUnit::MetersPerSecond2;
    case SDC_UNIT_G: return sdc::signal::RecordUnit::G;
  }
  throw sdc::InvalidArgument("unknown record unit");
}

sdc::signal::ImConfig to_im_config(const sdc_im_config* config) {
  sdc::signal::ImConfig out;
  if (!config) return out;
  out.damping = config->damping;
  out.threshold_fraction = config->threshold_fraction;
  out.arias_lower = config->arias_lower;
  out.arias_upper = config->arias_upper;
  out.period_min = config->period_min;
  out.period_max = config->period_max;
  out.period_step = config->period_step;
  out.detrend = config->detrend != 0;
  return out;
}

sdc::models::ModelHyperparams to_hyperparams(const sdc_train_options& options) {
  sdc::models::ModelHyperparams params;
  params.seed = options.seed;
  params.svm_c = options.svm_c;
  params.svm_sigma = options.svm_sigma;
  params.svm_gamma = options.svm_gamma;
  params.svm_tau = options.svm_tau;
  params.svm_degree = options.svm_degree;
  params.svm_tol = options.svm_tol;
  params.svm_max_passes = options.svm_max_passes;
  params.knn_k = options.knn_k;
  params.tree_max_depth = options.tree_max_depth;
  params.tree_min_leaf = options.tree_min_leaf;
  return params;
}

std::vector<sdc::models::ModelKind> parse_model_list(const char* models) {
  if (!models) return sdc::models::default_model_kinds();
  std::vector<sdc::models::ModelKind> kinds;
  std::string list(models);
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t end = list.find(',', start);
    if (end == std::string::npos) end = list.size();
    const std::string id = sdc::csv::trim(list.substr(start, end - start));
    if (!id.empty()) kinds.push_back(sdc::models::model_kind_from_id(id));
    start = end + 1;
  }
  if (kinds.empty()) throw sdc::InvalidArgument("empty model list");
  return kinds;
}

sdc::pipeline::CompareOptions to_compare_options(const sdc_compare_options* options) {
  sdc::pipeline::CompareOptions out;
  if (!options) {
    sdc_compare_options defaults;
    sdc_compare_options_init(&defaults);
    return to_compare_options(&defaults);
  }
  out.models = parse_model_list(options->models);
  out.folds = options->folds;
  out.seed = options->seed;
  out.stratify = options->stratify != 0;
  out.workers = options->workers;
  out.hyper = to_hyperparams(options->train);
  out.preprocess.normalize = options->train.normalize != 0;
  return out;
}

}  // namespace

extern "C" {

const char* sdc_version(void) { return "0.1.0"; }

const char* sdc_status_name(sdc_status status) {
  switch (status) {
    case SDC_OK: return "ok";
    case SDC_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case SDC_ERR_IO: return "io";
    case SDC_ERR_PARSE: return "parse";
    case SDC_ERR_SCHEMA: return "schema";
    case SDC_ERR_NUMERIC: return "numeric";
    case SDC_ERR_TRAINING: return "training";
    case SDC_ERR_UNKNOWN: return "unknown";
  }
  return "unknown";
}

const char* sdc_last_error(void) { return g_last_error.c_str(); }

void sdc_im_config_init(sdc_im_config* config) {
  if (!config) return;
  const sdc::signal::ImConfig defaults;
  config->damping = defaults.damping;
  config->threshold_fraction = defaults.threshold_fraction;
  config->arias_lower = defaults.arias_lower;
  config->arias_upper = defaults.arias_upper;
  config->period_min = defaults.period_min;
  config->period_max = defaults.period_max;
  config->period_step = defaults.period_step;
  config->detrend = defaults.detrend ? 1 : 0;
}

sdc_status sdc_intensity_measures(const char* record_path, sdc_record_format format,
                                  sdc_record_unit unit, const sdc_im_config* config,
                                  double out[SDC_IM_COUNT], int* vmax_defined) {
  if (sdc_status s = require(record_path && out, "record_path and out are required"))
    return s;
  return guarded([&] {
    const auto acc = sdc::signal::load_accelerogram(record_path, to_format(format),
                                                    to_unit(unit));
    const auto im = sdc::signal::compute_intensity_measures(acc, to_im_config(config));
    const auto values = sdc::signal::to_array(im);
    std::memcpy(out, values.data(), sizeof(double) * SDC_IM_COUNT);
    if (vmax_defined) *vmax_defined = im.vmax_over_amax_defined ? 1 : 0;
  });
}

sdc_status sdc_response_spectrum(const char* record_path, sdc_record_format format,
                                 sdc_record_unit unit, double damping,
                                 const double* periods, size_t n_periods, double* sa,
                                 double* psv, double* sd) {
  if (sdc_status s = require(record_path && periods && n_periods > 0,
                             "record_path and a non-empty period grid are required"))
    return s;
  return guarded([&] {
    const auto acc = sdc::signal::load_accelerogram(record_path, to_format(format),
                                                    to_unit(unit));
    const std::vector<double> grid(periods, periods + n_periods);
    const auto spec = sdc::signal::compute_response_spectrum(acc, damping, grid);
    if (sa) std::memcpy(sa, spec.sa.data(), sizeof(double) * n_periods);
    if (psv) std::memcpy(psv, spec.psv.data(), sizeof(double) * n_periods);
    if (sd) std::memcpy(sd, spec.sd.data(), sizeof(double) * n_periods);
  });
}

sdc_status sdc_table_read(const char* path, sdc_table** out) {
  if (sdc_status s = require(path && out, "path and out are required")) return s;
  return guarded([&] { *out = new sdc_table{sdc::dataset::read_table(path)}; });
}

sdc_status sdc_table_write(const sdc_table* table, const char* path) {
  if (sdc_status s = require(table && path, "table and path are required")) return s;
  return guarded([&] { sdc::dataset::write_table(table->table, path); });
}

void sdc_table_free(sdc_table* table) { delete table; }

sdc_status sdc_table_rows(const sdc_table* table, size_t* out) {
  if (sdc_status s = require(table && out, "table and out are required")) return s;
  *out = table->table.rows();
  return SDC_OK;
}

sdc_status sdc_table_feature_count(const sdc_table* table, size_t* out) {
  if (sdc_status s = require(table && out, "table and out are required")) return s;
  *out = sdc::dataset::kNumFeatures;
  return SDC_OK;
}

sdc_status sdc_table_feature_name(const sdc_table* table, size_t index, const char** out) {
  if (sdc_status s = require(table && out, "table and out are required")) return s;
  if (sdc_status s = require(index < sdc::dataset::kNumFeatures, "feature index out of range"))
    return s;
  *out = sdc::dataset::feature_names()[index].c_str();
  return SDC_OK;
}

sdc_status sdc_table_value(const sdc_table* table, size_t row, size_t feature, double* out) {
  if (sdc_status s = require(table && out, "table and out are required")) return s;
  if (sdc_status s = require(row < table->table.rows() && feature < sdc::dataset::kNumFeatures,
                             "row or feature index out of range"))
    return s;
  *out = table->table.features.at(row, feature);
  return SDC_OK;
}

sdc_status sdc_table_has_midr(const sdc_table* table, int* out) {
  if (sdc_status s = require(table && out, "table and out are required")) return s;
  *out = table->table.has_midr() ? 1 : 0;
  return SDC_OK;
}

sdc_status sdc_table_has_labels(const sdc_table* table, int* out) {
  if (sdc_status s = require(table && out, "table and out are required")) return s;
  *out = table->table.has_labels() ? 1 : 0;
  return SDC_OK;
}

sdc_status sdc_table_midr(const sdc_table* table, size_t row, double* out) {
  if (sdc_status s = require(table && out, "table and out are required")) return s;
  if (sdc_status s = require(table->table.has_midr(), "table has no MIDR column")) return s;
  if (sdc_status s = require(row < table->table.rows(), "row index out of range")) return s;
  *out = table->table.midr[row];
  return SDC_OK;
}

sdc_status sdc_table_label(const sdc_table* table, size_t row, int* out) {
  if (sdc_status s = require(table && out, "table and out are required")) return s;
  if (sdc_status s = require(table->table.has_labels(), "table has no CLASS column")) return s;
  if (sdc_status s = require(row < table->table.rows(), "row index out of range")) return s;
  *out = static_cast<int>(table->table.labels[row]);
  return SDC_OK;
}

sdc_status sdc_table_class_counts(const sdc_table* table, size_t out[3]) {
  if (sdc_status s = require(table && out, "table and out are required")) return s;
  if (sdc_status s = require(table->table.has_labels(), "table has no CLASS column")) return s;
  const auto counts = table->table.class_counts();
  for (int c = 0; c < 3; ++c) out[c] = counts[c];
  return SDC_OK;
}

sdc_status sdc_classify_damage(double midr_percent, int* out) {
  if (sdc_status s = require(out != nullptr, "out is required")) return s;
  return guarded(
      [&] { *out = static_cast<int>(sdc::dataset::classify_damage(midr_percent)); });
}

sdc_status sdc_table_synthetic(uint64_t seed, size_t n, const double class_mix[3],
                               sdc_table** out) {
  if (sdc_status s = require(out != nullptr, "out is required")) return s;
  return guarded([&] {
    sdc::dataset::SyntheticOptions options;
    options.seed = seed;
    options.n = n;
    if (class_mix) options.class_mix = {class_mix[0], class_mix[1], class_mix[2]};
    *out = new sdc_table{sdc::dataset::generate_synthetic(options)};
  });
}

sdc_status sdc_extract(const char* const* record_paths, size_t n_records,
                       sdc_record_format format, sdc_record_unit unit,
                       const char* structural_csv, const char* midr_csv,
                       const sdc_im_config* config, int workers, sdc_table** out) {
  if (sdc_status s = require(record_paths && n_records > 0 && structural_csv && midr_csv &&
                                 out,
                             "records, sidecars and out are required"))
    return s;
  return guarded([&] {
    sdc::pipeline::ExtractOptions options;
    options.format = to_format(format);
    options.unit = to_unit(unit);
    options.im = to_im_config(config);
    options.workers = workers;
    std::vector<std::string> paths(record_paths, record_paths + n_records);
    *out = new sdc_table{
        sdc::pipeline::extract_features(paths, structural_csv, midr_csv, options)};
  });
}

void sdc_preprocess_options_init(sdc_preprocess_options* options) {
  if (!options) return;
  options->pps_folds = 4;
  options->seed = 42;
  options->range_min = 0.0;
  options->range_max = 1.0;
  options->emit_normalized = 0;
}

sdc_status sdc_preprocess_reports(const sdc_table* table,
                                  const sdc_preprocess_options* options,
                                  const char* out_dir) {
  if (sdc_status s = require(table && out_dir, "table and out_dir are required")) return s;
  return guarded([&] {
    sdc::pipeline::PreprocessReportOptions opts;
    if (options) {
      opts.pps_folds = options->pps_folds;
      opts.seed = options->seed;
      opts.range_min = options->range_min;
      opts.range_max = options->range_max;
      opts.emit_normalized = options->emit_normalized != 0;
    }
    sdc::pipeline::write_preprocess_reports(table->table, opts, out_dir);
  });
}

void sdc_train_options_init(sdc_train_options* options) {
  if (!options) return;
  const sdc::models::ModelHyperparams defaults;
  options->seed = defaults.seed;
  options->svm_c = defaults.svm_c;
  options->svm_sigma = defaults.svm_sigma;
  options->svm_gamma = defaults.svm_gamma;
  options->svm_tau = defaults.svm_tau;
  options->svm_degree = defaults.svm_degree;
  options->svm_tol = defaults.svm_tol;
  options->svm_max_passes = defaults.svm_max_passes;
  options->knn_k = defaults.knn_k;
  options->tree_max_depth = defaults.tree_max_depth;
  options->tree_min_leaf = defaults.tree_min_leaf;
  options->normalize = 1;
}

sdc_status sdc_model_train(const sdc_table* table, const char* model_id,
                           const sdc_train_options* options, sdc_model** out) {
  if (sdc_status s = require(table && model_id && out, "table, model_id and out are required"))
    return s;
  return guarded([&] {
    const auto& t = table->table;
    if (!t.has_labels()) throw sdc::InvalidArgument("table has no CLASS column");

    sdc_train_options defaults;
    sdc_train_options_init(&defaults);
    const sdc_train_options& opt = options ? *options : defaults;

    std::vector<int> labels(t.rows());
    for (std::size_t i = 0; i < t.rows(); ++i) labels[i] = static_cast<int>(t.labels[i]);

    auto model = std::make_unique<sdc_model>();
    model->id = model_id;
    model->normalized = opt.normalize != 0;
    sdc::numeric::Matrix x = t.features;
    if (model->normalized) {
      model->norm = sdc::preprocess::fit_minmax(x, 0.0, 1.0);
      x = sdc::preprocess::apply_minmax(model->norm, x);
    }
    model->classifier = sdc::models::train_model(
        sdc::models::model_kind_from_id(model_id), x, labels, sdc::dataset::kNumClasses,
        to_hyperparams(opt));
    *out = model.release();
  });
}

sdc_status sdc_model_save(const sdc_model* model, const char* path) {
  if (sdc_status s = require(model && path, "model and path are required")) return s;
  return guarded([&] {
    std::ofstream out(path);
    if (!out) throw sdc::IoError(std::string("cannot open ") + path + " for writing");
    sdc::models::save_model(*model->classifier, out);
    out << "normalized " << (model->normalized ? 1 : 0) << '\n';
    if (model->normalized) {
      out << model->norm.size() << ' ' << sdc::numeric::format_g17(model->norm.new_min)
          << ' ' << sdc::numeric::format_g17(model->norm.new_max) << '\n';
      for (std::size_t j = 0; j < model->norm.size(); ++j)
        out << sdc::numeric::format_g17(model->norm.min_value[j]) << ' '
            << sdc::numeric::format_g17(model->norm.max_value[j]) << '\n';
    }
    out.flush();
    if (!out) throw sdc::IoError(std::string("write failed on ") + path);
  });
}

sdc_status sdc_model_load(const char* path, sdc_model** out) {
  if (sdc_status s = require(path && out, "path and out are required")) return s;
  return guarded([&] {
    std::ifstream in(path);
    if (!in) throw sdc::IoError(std::string("cannot open model file ") + path);
    auto model = std::make_unique<sdc_model>();
    model->classifier = sdc::models::load_model(in);
    model->id = model->classifier->id();
    std::string tok;
    in >> tok;
    if (tok != "normalized") throw sdc::ParseError("model file: missing normalization block");
    int normalized = 0;
    in >> normalized;
    model->normalized = normalized != 0;
    if (model->normalized) {
      std::size_t dim = 0;
      in >> dim >> model->norm.new_min >> model->norm.new_max;
      model->norm.min_value.resize(dim);
      model->norm.max_value.resize(dim);
      model->norm.degenerate.resize(dim);
      for (std::size_t j = 0; j < dim; ++j) {
        in >> model->norm.min_value[j] >> model->norm.max_value[j];
        model->norm.degenerate[j] =
            model->norm.max_value[j] == model->norm.min_value[j] ? 1 : 0;
      }
      if (!in) throw sdc::ParseError("model file: truncated normalization block");
    }
    *out = model.release();
  });
}

void sdc_model_free(sdc_model* model) { delete model; }

sdc_status sdc_model_id(const sdc_model* model, const char** out) {
  if (sdc_status s = require(model && out, "model and out are required")) return s;
  *out = model->id.c_str();
  return SDC_OK;
}

sdc_status sdc_model_notes(const sdc_model* model, const char** out) {
  if (sdc_status s = require(model && out, "model and out are required")) return s;
  model->notes_cache.clear();
  for (const std::string& note : model->classifier->notes()) {
    if (!model->notes_cache.empty()) model->notes_cache.push_back('\n');
    model->notes_cache += note;
  }
  *out = model->notes_cache.c_str();
  return SDC_OK;
}

sdc_status sdc_model_predict(const sdc_model* model, const double* features,
                             size_t n_features, int* predicted_class, double* scores) {
  if (sdc_status s = require(model && features && predicted_class,
                             "model, features and predicted_class are required"))
    return s;
  return guarded([&] {
    sdc::numeric::Matrix x(1, n_features);
    std::copy(features, features + n_features, x.row(0).begin());
    if (model->normalized) x = sdc::preprocess::apply_minmax(model->norm, x);
    *predicted_class = model->classifier->predict(x.row(0));
    if (scores) {
      const std::vector<double> s = model->classifier->scores(x.row(0));
      std::copy(s.begin(), s.end(), scores);
    }
  });
}

void sdc_compare_options_init(sdc_compare_options* options) {
  if (!options) return;
  options->models = nullptr;
  options->folds = 10;
  options->seed = 42;
  options->stratify = 1;
  options->workers = 1;
  sdc_train_options_init(&options->train);
}

sdc_status sdc_cross_validate(const sdc_table* table, const char* model_id,
                              const sdc_compare_options* options, sdc_metrics* out) {
  if (sdc_status s = require(table && model_id && out, "table, model_id and out are required"))
    return s;
  return guarded([&] {
    const auto& t = table->table;
    if (!t.has_labels()) throw sdc::InvalidArgument("table has no CLASS column");
    const auto opts = to_compare_options(options);

    std::vector<int> labels(t.rows());
    for (std::size_t i = 0; i < t.rows(); ++i) labels[i] = static_cast<int>(t.labels[i]);
    const auto plan = opts.stratify
                          ? sdc::eval::FoldPlan::make_stratified(
                                labels, sdc::dataset::kNumClasses, opts.folds, opts.seed)
                          : sdc::eval::FoldPlan::make(t.rows(), opts.folds, opts.seed);
    sdc::models::ModelHyperparams hyper = opts.hyper;
    hyper.seed = opts.seed;
    const auto cv = sdc::eval::cross_validate(
        t.features, labels, sdc::dataset::kNumClasses,
        sdc::models::model_kind_from_id(model_id), hyper, plan, opts.preprocess,
        opts.workers);
    out->accuracy = cv.metrics.accuracy;
    out->roc_auc = cv.scores_available ? cv.metrics.roc_auc : 0.0;
    out->recall = cv.metrics.recall;
    out->precision = cv.metrics.precision;
    out->f_score = cv.metrics.f_score;
    out->cks = cv.metrics.cks;
    out->mcc = cv.metrics.mcc;
    out->wall_time_sec = cv.metrics.wall_time_sec;
  });
}

sdc_status sdc_compare(const sdc_table* table, const sdc_compare_options* options,
                       const char* out_dir) {
  if (sdc_status s = require(table && out_dir, "table and out_dir are required")) return s;
  return guarded([&] {
    sdc::pipeline::run_compare(table->table, to_compare_options(options), out_dir);
  });
}

}  // extern "C"
