// Command-line front end for the sdc shared library. Everything below talks
// to the C API in sdc.h; the heavy lifting lives in libsdc.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdc.h"

namespace {

int fail(sdc_status status) {
  std::cerr << "error: " << sdc_status_name(status) << ": " << sdc_last_error() << "\n";
  return static_cast<int>(status);
}

int fail_usage(const std::string& message) {
  std::cerr << "error: invalid-argument: " << message << "\n";
  return static_cast<int>(SDC_ERR_INVALID_ARGUMENT);
}

bool file_readable(const std::string& path) {
  std::ifstream in(path);
  return static_cast<bool>(in);
}

// Inputs are validated up front so a typo fails before any work starts.
int check_inputs(const std::vector<std::string>& paths) {
  for (const auto& path : paths)
    if (!file_readable(path)) return fail_usage("cannot read input file: " + path);
  return 0;
}

struct TableHandle {
  sdc_table* table = nullptr;
  ~TableHandle() { sdc_table_free(table); }
};

struct ModelHandle {
  sdc_model* model = nullptr;
  ~ModelHandle() { sdc_model_free(model); }
};

void print_table_summary(const sdc_table* table) {
  size_t rows = 0;
  sdc_table_rows(table, &rows);
  int has_labels = 0;
  sdc_table_has_labels(table, &has_labels);
  std::cout << rows << " rows";
  if (has_labels) {
    size_t counts[3] = {0, 0, 0};
    sdc_table_class_counts(table, counts);
    std::cout << " (class0=" << counts[0] << " class1=" << counts[1]
              << " class2=" << counts[2] << ")";
  }
  std::cout << "\n";
}

int write_table_or_cleanup(const sdc_table* table, const std::string& path) {
  if (sdc_status s = sdc_table_write(table, path.c_str())) {
    std::remove(path.c_str());
    return fail(s);
  }
  return 0;
}

sdc_record_format parse_format(const std::string& name) {
  if (name == "twocol") return SDC_FORMAT_TWO_COLUMN;
  if (name == "npts") return SDC_FORMAT_NPTS_DT;
  return SDC_FORMAT_AUTO;
}

struct SvmFlags {
  double c = 1.0;
  double sigma = 0.0;
  double gamma = 0.0;
  double tau = 1.0;
  int degree = 3;
  double tol = 1e-3;
  int knn_k = 5;
  int tree_depth = 12;
  int tree_min_leaf = 2;
  bool no_normalize = false;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--svm-c", c, "SVM box constraint");
    cmd->add_option("--svm-sigma", sigma, "RBF width (<=0: median-distance heuristic)");
    cmd->add_option("--svm-gamma", gamma, "Gaussian kernel rate (<=0: 1/median distance)");
    cmd->add_option("--svm-tau", tau, "polynomial kernel offset");
    cmd->add_option("--svm-degree", degree, "polynomial kernel degree");
    cmd->add_option("--svm-tol", tol, "SMO KKT tolerance");
    cmd->add_option("--knn-k", knn_k, "neighbor count for knn");
    cmd->add_option("--tree-depth", tree_depth, "CART maximum depth");
    cmd->add_option("--tree-min-leaf", tree_min_leaf, "CART minimum leaf size");
    cmd->add_flag("--no-normalize", no_normalize,
                  "skip Max-Min normalization of the features");
  }

  void apply(sdc_train_options* options, uint64_t seed) const {
    sdc_train_options_init(options);
    options->seed = seed;
    options->svm_c = c;
    options->svm_sigma = sigma;
    options->svm_gamma = gamma;
    options->svm_tau = tau;
    options->svm_degree = degree;
    options->svm_tol = tol;
    options->knn_k = knn_k;
    options->tree_max_depth = tree_depth;
    options->tree_min_leaf = tree_min_leaf;
    options->normalize = no_normalize ? 0 : 1;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seismic damage classification pipeline (libsdc "
               + std::string(sdc_version()) + ")"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --config and friends appear after the subcommand
  app.set_config("--config", "", "key=value configuration file with [command] sections");

  // synth ------------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "generate a synthetic labeled table");
  std::string synth_out;
  uint64_t synth_seed = 42;
  size_t synth_n = 1000;
  std::vector<double> synth_mix;
  synth->add_option("--out", synth_out, "output table path")->required();
  synth->add_option("--seed", synth_seed, "random seed");
  synth->add_option("-n,--count", synth_n, "number of rows");
  synth->add_option("--mix", synth_mix, "class proportions (three values)")->expected(3);

  // extract ----------------------------------------------------------------
  auto* extract = app.add_subcommand("extract", "build a feature table from records");
  std::vector<std::string> extract_records;
  std::string extract_structural, extract_midr, extract_out;
  std::string extract_format = "auto", extract_units = "mps2";
  int extract_workers = 1;
  sdc_im_config im_config;
  sdc_im_config_init(&im_config);
  extract->add_option("records", extract_records, "accelerogram files")->required();
  extract->add_option("--structural", extract_structural,
                      "structural sidecar (id,Htot,nvx,nvy,e0)")->required();
  extract->add_option("--midr", extract_midr, "MIDR sidecar (id,MIDR)")->required();
  extract->add_option("--out", extract_out, "output table path")->required();
  extract->add_option("--format", extract_format, "record layout: auto|twocol|npts")
      ->check(CLI::IsMember({"auto", "twocol", "npts"}));
  extract->add_option("--units", extract_units, "record units: mps2|g")
      ->check(CLI::IsMember({"mps2", "g"}));
  extract->add_option("--damping", im_config.damping, "spectrum damping ratio");
  extract->add_option("--threshold-fraction", im_config.threshold_fraction,
                      "duration threshold as a fraction of PGA");
  extract->add_option("--arias-lower", im_config.arias_lower, "Husid lower fraction");
  extract->add_option("--arias-upper", im_config.arias_upper, "Husid upper fraction");
  extract->add_option("--period-min", im_config.period_min, "spectrum grid start, s");
  extract->add_option("--period-max", im_config.period_max, "spectrum grid end, s");
  extract->add_option("--period-step", im_config.period_step, "spectrum grid step, s");
  bool extract_detrend = false;
  extract->add_flag("--detrend", extract_detrend, "linear detrend of each record");
  extract->add_option("--workers", extract_workers, "parallel record workers");

  // preprocess ---------------------------------------------------------------
  auto* preprocess = app.add_subcommand("preprocess", "write preprocessing reports");
  std::string pre_table, pre_out_dir;
  sdc_preprocess_options pre_options;
  sdc_preprocess_options_init(&pre_options);
  bool pre_emit_normalized = false;
  preprocess->add_option("--table", pre_table, "input table")->required();
  preprocess->add_option("--out-dir", pre_out_dir, "report directory")->required();
  preprocess->add_option("--pps-folds", pre_options.pps_folds, "PPS cross-validation folds");
  preprocess->add_option("--seed", pre_options.seed, "random seed");
  preprocess->add_option("--range-min", pre_options.range_min, "normalization lower bound");
  preprocess->add_option("--range-max", pre_options.range_max, "normalization upper bound");
  preprocess->add_flag("--emit-normalized", pre_emit_normalized,
                       "also write the normalized table");

  // train --------------------------------------------------------------------
  auto* train = app.add_subcommand("train", "train one model and save it");
  std::string train_table, train_model_id, train_out;
  uint64_t train_seed = 42;
  SvmFlags train_flags;
  train->add_option("--table", train_table, "labeled input table")->required();
  train->add_option("--model", train_model_id,
                    "model id (svm-polynomial, svm-rbf, svm-gaussian, knn, gaussian-nb, "
                    "cart, lda, qda)")->required();
  train->add_option("--out", train_out, "model file path")->required();
  train->add_option("--seed", train_seed, "random seed");
  train_flags.add_options(train);

  // compare ------------------------------------------------------------------
  auto* compare = app.add_subcommand("compare", "cross-validate models and rank them");
  std::string cmp_table, cmp_out_dir;
  std::vector<std::string> cmp_models;
  int cmp_folds = 10, cmp_workers = 1;
  uint64_t cmp_seed = 42;
  bool cmp_stratify = true;
  SvmFlags cmp_flags;
  compare->add_option("--table", cmp_table, "labeled input table")->required();
  compare->add_option("--out-dir", cmp_out_dir, "report directory")->required();
  compare->add_option("--models", cmp_models, "model ids, comma-separated (default: all 8)");
  compare->add_option("--folds", cmp_folds, "cross-validation folds");
  compare->add_option("--seed", cmp_seed, "random seed");
  compare->add_flag("--stratify,!--no-stratify", cmp_stratify,
                    "stratified fold assignment (default on)");
  compare->add_option("--workers", cmp_workers, "parallel fold workers");
  cmp_flags.add_options(compare);

  CLI11_PARSE(app, argc, argv);

  if (synth->parsed()) {
    const double* mix = synth_mix.empty() ? nullptr : synth_mix.data();
    TableHandle handle;
    if (sdc_status s = sdc_table_synthetic(synth_seed, synth_n, mix, &handle.table))
      return fail(s);
    if (int rc = write_table_or_cleanup(handle.table, synth_out)) return rc;
    std::cout << "wrote " << synth_out << ": ";
    print_table_summary(handle.table);
    return 0;
  }

  if (extract->parsed()) {
    std::vector<std::string> inputs = extract_records;
    inputs.push_back(extract_structural);
    inputs.push_back(extract_midr);
    if (int rc = check_inputs(inputs)) return rc;

    im_config.detrend = extract_detrend ? 1 : 0;
    std::vector<const char*> paths;
    paths.reserve(extract_records.size());
    for (const auto& r : extract_records) paths.push_back(r.c_str());

    TableHandle handle;
    if (sdc_status s = sdc_extract(paths.data(), paths.size(),
                                   parse_format(extract_format),
                                   extract_units == "g" ? SDC_UNIT_G : SDC_UNIT_MPS2,
                                   extract_structural.c_str(), extract_midr.c_str(),
                                   &im_config, extract_workers, &handle.table))
      return fail(s);
    if (int rc = write_table_or_cleanup(handle.table, extract_out)) return rc;
    std::cout << "wrote " << extract_out << ": ";
    print_table_summary(handle.table);
    return 0;
  }

  if (preprocess->parsed()) {
    if (int rc = check_inputs({pre_table})) return rc;
    pre_options.emit_normalized = pre_emit_normalized ? 1 : 0;
    TableHandle handle;
    if (sdc_status s = sdc_table_read(pre_table.c_str(), &handle.table)) return fail(s);
    if (sdc_status s = sdc_preprocess_reports(handle.table, &pre_options,
                                              pre_out_dir.c_str()))
      return fail(s);
    std::cout << "wrote normalization_stats.csv, iqr_flags.csv, pca_scree.csv, "
                 "pps_matrix.csv"
              << (pre_emit_normalized ? ", normalized.csv" : "") << " in " << pre_out_dir
              << "\n";
    return 0;
  }

  if (train->parsed()) {
    if (int rc = check_inputs({train_table})) return rc;
    TableHandle table;
    if (sdc_status s = sdc_table_read(train_table.c_str(), &table.table)) return fail(s);
    sdc_train_options options;
    train_flags.apply(&options, train_seed);
    ModelHandle model;
    if (sdc_status s = sdc_model_train(table.table, train_model_id.c_str(), &options,
                                       &model.model))
      return fail(s);
    if (sdc_status s = sdc_model_save(model.model, train_out.c_str())) {
      std::remove(train_out.c_str());
      return fail(s);
    }
    const char* notes = nullptr;
    if (sdc_model_notes(model.model, &notes) == SDC_OK && notes[0] != '\0')
      std::cout << "note: " << notes << "\n";
    std::cout << "trained " << train_model_id << " on ";
    print_table_summary(table.table);
    std::cout << "saved model to " << train_out << "\n";
    return 0;
  }

  if (compare->parsed()) {
    if (int rc = check_inputs({cmp_table})) return rc;
    TableHandle table;
    if (sdc_status s = sdc_table_read(cmp_table.c_str(), &table.table)) return fail(s);

    sdc_compare_options options;
    sdc_compare_options_init(&options);
    std::string model_list;
    for (const auto& m : cmp_models) {
      if (!model_list.empty()) model_list += ',';
      model_list += m;
    }
    options.models = model_list.empty() ? nullptr : model_list.c_str();
    options.folds = cmp_folds;
    options.seed = cmp_seed;
    options.stratify = cmp_stratify ? 1 : 0;
    options.workers = cmp_workers;
    cmp_flags.apply(&options.train, cmp_seed);

    if (sdc_status s = sdc_compare(table.table, &options, cmp_out_dir.c_str()))
      return fail(s);

    // Echo the ranked table.
    const std::string report = cmp_out_dir + "/comparison.csv";
    std::ifstream in(report);
    std::string line;
    while (std::getline(in, line)) std::cout << line << "\n";
    std::cout << "reports written to " << cmp_out_dir << "\n";
    return 0;
  }

  return fail_usage("no command given");
}
