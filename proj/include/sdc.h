/*
 * sdc — seismic damage classification toolkit, C API.
 *
 * Every function returns an sdc_status; SDC_OK is 0. On failure the
 * thread-local message from sdc_last_error() describes what went wrong.
 * Objects returned through out-parameters are owned by the caller and
 * released with the matching *_free function.
 */
#ifndef SDC_H
#define SDC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SDC_API __declspec(dllexport)
#else
#define SDC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sdc_status {
  SDC_OK = 0,
  SDC_ERR_INVALID_ARGUMENT = 1,
  SDC_ERR_IO = 2,
  SDC_ERR_PARSE = 3,
  SDC_ERR_SCHEMA = 4,
  SDC_ERR_NUMERIC = 5,
  SDC_ERR_TRAINING = 6,
  SDC_ERR_UNKNOWN = 7
} sdc_status;

SDC_API const char* sdc_version(void);
SDC_API const char* sdc_status_name(sdc_status status);
/* Thread-local message from the most recent failing call. */
SDC_API const char* sdc_last_error(void);

/* ------------------------------------------------------------------ */
/* Record processing                                                    */

typedef enum sdc_record_format {
  SDC_FORMAT_AUTO = 0,
  SDC_FORMAT_TWO_COLUMN = 1,
  SDC_FORMAT_NPTS_DT = 2
} sdc_record_format;

typedef enum sdc_record_unit {
  SDC_UNIT_MPS2 = 0,
  SDC_UNIT_G = 1
} sdc_record_unit;

typedef struct sdc_im_config {
  double damping;            /* default 0.05 */
  double threshold_fraction; /* of PGA, default 0.05 */
  double arias_lower;        /* default 0.05 */
  double arias_upper;        /* default 0.95 */
  double period_min;         /* default 0.02 s */
  double period_max;         /* default 4.0 s */
  double period_step;        /* default 0.02 s */
  int detrend;               /* default 0 */
} sdc_im_config;

SDC_API void sdc_im_config_init(sdc_im_config* config);

/* Canonical intensity-measure order for the 14-element arrays below. */
enum {
  SDC_IM_PGA = 0,
  SDC_IM_PGV,
  SDC_IM_PGD,
  SDC_IM_IA,
  SDC_IM_SED,
  SDC_IM_CAV,
  SDC_IM_ASI,
  SDC_IM_HI,
  SDC_IM_EPA,
  SDC_IM_PGV_PGA,
  SDC_IM_PP,
  SDC_IM_TUD,
  SDC_IM_TBD,
  SDC_IM_TSD,
  SDC_IM_COUNT
};

/* Intensity measures of one record file. vmax_defined (optional) reports
 * whether PGV/PGA was computable (it is not for an all-zero record). */
SDC_API sdc_status sdc_intensity_measures(const char* record_path,
                                          sdc_record_format format,
                                          sdc_record_unit unit,
                                          const sdc_im_config* config,
                                          double out[SDC_IM_COUNT],
                                          int* vmax_defined);

/* Elastic response spectrum of one record on a caller-supplied period grid
 * (strictly increasing, >= 0.02 s). Any of sa/psv/sd may be NULL. */
SDC_API sdc_status sdc_response_spectrum(const char* record_path,
                                         sdc_record_format format,
                                         sdc_record_unit unit, double damping,
                                         const double* periods, size_t n_periods,
                                         double* sa, double* psv, double* sd);

/* ------------------------------------------------------------------ */
/* Feature tables                                                       */

typedef struct sdc_table sdc_table;

SDC_API sdc_status sdc_table_read(const char* path, sdc_table** out);
SDC_API sdc_status sdc_table_write(const sdc_table* table, const char* path);
SDC_API void sdc_table_free(sdc_table* table);

SDC_API sdc_status sdc_table_rows(const sdc_table* table, size_t* out);
SDC_API sdc_status sdc_table_feature_count(const sdc_table* table, size_t* out);
SDC_API sdc_status sdc_table_feature_name(const sdc_table* table, size_t index,
                                          const char** out);
SDC_API sdc_status sdc_table_value(const sdc_table* table, size_t row, size_t feature,
                                   double* out);
/* has_* receive 0/1; value getters fail when the column is absent. */
SDC_API sdc_status sdc_table_has_midr(const sdc_table* table, int* out);
SDC_API sdc_status sdc_table_has_labels(const sdc_table* table, int* out);
SDC_API sdc_status sdc_table_midr(const sdc_table* table, size_t row, double* out);
SDC_API sdc_status sdc_table_label(const sdc_table* table, size_t row, int* out);
SDC_API sdc_status sdc_table_class_counts(const sdc_table* table, size_t out[3]);

/* MIDR (percent) to damage class 0/1/2. */
SDC_API sdc_status sdc_classify_damage(double midr_percent, int* out);

/* Deterministic synthetic dataset; class_mix may be NULL for (1/3,1/3,1/3). */
SDC_API sdc_status sdc_table_synthetic(uint64_t seed, size_t n, const double class_mix[3],
                                       sdc_table** out);

/* One feature row per record, aligned with the sidecars by record id (file
 * stem). The structural sidecar has columns id,Htot,nvx,nvy,e0; the MIDR
 * sidecar id,MIDR. */
SDC_API sdc_status sdc_extract(const char* const* record_paths, size_t n_records,
                               sdc_record_format format, sdc_record_unit unit,
                               const char* structural_csv, const char* midr_csv,
                               const sdc_im_config* config, int workers,
                               sdc_table** out);

/* ------------------------------------------------------------------ */
/* Preprocessing reports                                                */

typedef struct sdc_preprocess_options {
  int pps_folds;         /* default 4 */
  uint64_t seed;         /* default 42 */
  double range_min;      /* default 0 */
  double range_max;      /* default 1 */
  int emit_normalized;   /* default 0 */
} sdc_preprocess_options;

SDC_API void sdc_preprocess_options_init(sdc_preprocess_options* options);

/* Writes normalization_stats.csv, iqr_flags.csv, pca_scree.csv and
 * pps_matrix.csv (plus normalized.csv when requested) into out_dir. */
SDC_API sdc_status sdc_preprocess_reports(const sdc_table* table,
                                          const sdc_preprocess_options* options,
                                          const char* out_dir);

/* ------------------------------------------------------------------ */
/* Models                                                               */

typedef struct sdc_model sdc_model;

typedef struct sdc_train_options {
  uint64_t seed;      /* default 42 */
  double svm_c;       /* default 1.0 */
  double svm_sigma;   /* <= 0: median-distance heuristic */
  double svm_gamma;   /* <= 0: 1 / median distance */
  double svm_tau;     /* default 1.0 */
  int svm_degree;     /* default 3 */
  double svm_tol;     /* default 1e-3 */
  int svm_max_passes; /* default 10000 */
  int knn_k;          /* default 5 */
  int tree_max_depth; /* default 12 */
  int tree_min_leaf;  /* default 2 */
  int normalize;      /* fit Max-Min on the training data, default 1 */
} sdc_train_options;

SDC_API void sdc_train_options_init(sdc_train_options* options);

/* model_id is one of: svm-polynomial, svm-rbf, svm-gaussian, knn,
 * gaussian-nb, cart, lda, qda. */
SDC_API sdc_status sdc_model_train(const sdc_table* table, const char* model_id,
                                   const sdc_train_options* options, sdc_model** out);
SDC_API sdc_status sdc_model_save(const sdc_model* model, const char* path);
SDC_API sdc_status sdc_model_load(const char* path, sdc_model** out);
SDC_API void sdc_model_free(sdc_model* model);

SDC_API sdc_status sdc_model_id(const sdc_model* model, const char** out);
/* Fitting notices (e.g. a singular covariance that needed a ridge), one per
 * line; empty string when there are none. Valid while the model lives. */
SDC_API sdc_status sdc_model_notes(const sdc_model* model, const char** out);
/* features has sdc_table_feature_count entries, in canonical order and raw
 * units; scores (optional) receives 3 per-class ranking values. */
SDC_API sdc_status sdc_model_predict(const sdc_model* model, const double* features,
                                     size_t n_features, int* predicted_class,
                                     double* scores);

/* ------------------------------------------------------------------ */
/* Evaluation                                                           */

typedef struct sdc_metrics {
  double accuracy;
  double roc_auc;
  double recall;
  double precision;
  double f_score;
  double cks;
  double mcc;
  double wall_time_sec;
} sdc_metrics;

typedef struct sdc_compare_options {
  const char* models; /* comma-separated ids; NULL for the default roster */
  int folds;          /* default 10 */
  uint64_t seed;      /* default 42 */
  int stratify;       /* default 1 */
  int workers;        /* default 1 */
  sdc_train_options train;
} sdc_compare_options;

SDC_API void sdc_compare_options_init(sdc_compare_options* options);

/* k-fold cross-validation of one model on a labeled table. */
SDC_API sdc_status sdc_cross_validate(const sdc_table* table, const char* model_id,
                                      const sdc_compare_options* options,
                                      sdc_metrics* out);

/* Cross-validates every configured model and writes comparison.csv plus the
 * per-model report files into out_dir. */
SDC_API sdc_status sdc_compare(const sdc_table* table, const sdc_compare_options* options,
                               const char* out_dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SDC_H */
