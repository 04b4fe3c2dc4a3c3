/*
 * Copyright 2026 The vtrust Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef VTRUST_VTRUST_H
#define VTRUST_VTRUST_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(VTRUST_BUILDING_LIBRARY)
#    define VT_API __declspec(dllexport)
#  else
#    define VT_API __declspec(dllimport)
#  endif
#else
#  define VT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns a status. On failure the message is kept per
 * thread and can be read with vt_last_error() until the next failing call. */
typedef enum vt_status {
  VT_OK = 0,
  VT_E_INVALID_ARGUMENT = 1,
  VT_E_UNDEFINED_OPERAND = 2,
  VT_E_INVALID_WEIGHTS = 3,
  VT_E_PARSE = 4,
  VT_E_EMPTY_DATASET = 5,
  VT_E_MISSING_DATES = 6,
  VT_E_UNKNOWN_COMPONENT = 7,
  VT_E_EMPTY_HISTORY = 8,
  VT_E_INVALID_ALPHA = 9,
  VT_E_NEGATIVE_PREDICTION = 10,
  VT_E_WINDOW_OUT_OF_RANGE = 11,
  VT_E_EMPTY_INPUT = 12,
  VT_E_DIVISION_BY_ZERO = 13,
  VT_E_SCHEMA = 14,
  VT_E_UNSIMPLIFIABLE = 15,
  VT_E_NOT_READ_ONCE = 16,
  VT_E_MISSING_OPINION = 17,
  VT_E_IO = 18,
  VT_E_BUSY = 19,
  VT_E_INTERNAL = 99
} vt_status;

VT_API const char* vt_version(void);
VT_API const char* vt_last_error(void);
VT_API const char* vt_status_name(vt_status status);
/* Non-zero for failures caused by bad input data (parse, schema, missing
 * data) rather than by the computation. */
VT_API int vt_status_is_data_error(vt_status status);
/* Releases strings returned through char** out-parameters. */
VT_API void vt_string_free(char* text);

/* ---- opinions ---------------------------------------------------------- */

typedef struct vt_opinion {
  double t; /* trust */
  double c; /* certainty */
  double f; /* initial expectation (prior) */
} vt_opinion;

VT_API vt_status vt_opinion_make(double t, double c, double f, vt_opinion* out);
VT_API double vt_expectation(const vt_opinion* op);
VT_API vt_status vt_and(const vt_opinion* a, const vt_opinion* b, vt_opinion* out);
VT_API vt_status vt_or(const vt_opinion* a, const vt_opinion* b, vt_opinion* out);
/* weights may be NULL (all 1). doc may be NULL. */
VT_API vt_status vt_fuse(const vt_opinion* ops, const double* weights, size_t n,
                         vt_opinion* out, double* doc);

/* ---- datasets ---------------------------------------------------------- */

typedef struct vt_dataset vt_dataset;

/* epoch is "YYYY-MM:YYYY-MM" or NULL for the default 2001-01:2017-09.
 * report_json (may be NULL) receives the ingestion report. */
VT_API vt_status vt_dataset_ingest_csv(const char* path, const char* epoch,
                                       vt_dataset** out, char** report_json);
VT_API vt_status vt_dataset_ingest_tracker(const char* tracker_json_path,
                                           const char* cve_dates_path, const char* epoch,
                                           vt_dataset** out, char** report_json);
/* Applies a filter file ({"packages":[...],"start":..,"end":..}). */
VT_API vt_status vt_dataset_filter(const vt_dataset* dataset, const char* filter_path,
                                   vt_dataset** out);
VT_API void vt_dataset_free(vt_dataset* dataset);
VT_API size_t vt_dataset_size(const vt_dataset* dataset);
VT_API vt_status vt_dataset_fingerprint(const vt_dataset* dataset, char** out);

/* Statistics as CSV with a header row. window may be NULL (whole epoch). */
VT_API vt_status vt_stats_top_csv(const vt_dataset* dataset, size_t n, const char* window,
                                  char** out);
VT_API vt_status vt_stats_yearly_csv(const vt_dataset* dataset, char** out);
VT_API vt_status vt_stats_distribution_csv(const vt_dataset* dataset, size_t min_count,
                                           char** out);
/* Monthly series of one component as JSON. */
VT_API vt_status vt_dataset_history_json(const vt_dataset* dataset, const char* component,
                                         char** out);

/* ---- prediction -------------------------------------------------------- */

typedef enum vt_backend_kind {
  VT_BACKEND_AVERAGE = 0,
  VT_BACKEND_EWMA = 1,
  VT_BACKEND_EXTERNAL = 2
} vt_backend_kind;

typedef struct vt_backend {
  vt_backend_kind kind;
  double alpha;            /* EWMA only */
  const char* import_path; /* EXTERNAL only: component,pred,error CSV */
} vt_backend;

typedef struct vt_split {
  const char* train_end; /* "YYYY-MM" */
  int validation_months;
  int horizon_months;
} vt_split;

/* Predictions for every component as a component,pred,error CSV. */
VT_API vt_status vt_predict_csv(const vt_dataset* dataset, const vt_split* split,
                                const vt_backend* backend, char** out);
/* backend,rmse,components_scored CSV. */
VT_API vt_status vt_backtest_csv(const vt_dataset* dataset, const vt_split* split,
                                 const vt_backend* backends, size_t n_backends,
                                 size_t min_total, char** out);

/* ---- parameters -------------------------------------------------------- */

/* Default trust parameters as JSON; any subset of its keys can be passed
 * wherever params_json is accepted. */
VT_API vt_status vt_params_default_json(char** out);

/* ---- data directory ---------------------------------------------------- */

/* data_dir may be NULL everywhere: VTRUST_DATA_DIR, else ./vtrust-data. */
VT_API vt_status vt_data_dir_resolve(const char* data_dir, char** out);
VT_API vt_status vt_dataset_save(const vt_dataset* dataset, const char* data_dir,
                                 const char* report_json);
VT_API vt_status vt_dataset_load(const char* data_dir, vt_dataset** out);
/* Validates a component,pred,error CSV and stores it. */
VT_API vt_status vt_predictions_save(const char* data_dir, const char* csv);

/* ---- snapshots --------------------------------------------------------- */

typedef struct vt_snapshot vt_snapshot;

/* Assesses every stored prediction of data_dir against dataset. */
VT_API vt_status vt_snapshot_build(const vt_dataset* dataset, const char* data_dir,
                                   const char* params_json, vt_snapshot** out);
VT_API void vt_snapshot_free(vt_snapshot* snapshot);
/* Writes the snapshot and makes it current; path (may be NULL) receives
 * the file written. */
VT_API vt_status vt_snapshot_save(const vt_snapshot* snapshot, const char* data_dir,
                                  char** path);
VT_API vt_status vt_snapshot_load_current(const char* data_dir, vt_snapshot** out);
VT_API vt_status vt_snapshot_report_json(const vt_snapshot* snapshot, char** out);
/* Same request and payload as POST /api/systems/assess and .../compare. */
VT_API vt_status vt_snapshot_assess_json(const vt_snapshot* snapshot, const vt_dataset* dataset,
                                         const char* request_json, char** out);
VT_API vt_status vt_snapshot_compare_json(const vt_snapshot* snapshot, const vt_dataset* dataset,
                                          const char* request_json, char** out);

/* Compares two configurations from their equivalent counts alone. Pass NaN
 * for unknown actual counts. */
VT_API vt_status vt_compare_counts_json(double equivalent_a, double equivalent_b,
                                        double actual_a, double actual_b, char** out);

/* ---- HTTP service ------------------------------------------------------ */

typedef struct vt_server vt_server;

/* Loads the dataset and current snapshot of data_dir and binds host:port
 * (port 0 picks a free one). */
VT_API vt_status vt_server_create(const char* data_dir, const char* host, int port,
                                  vt_server** out);
VT_API int vt_server_port(const vt_server* server);
/* Blocks until vt_server_stop is called from another thread. */
VT_API vt_status vt_server_run(vt_server* server);
VT_API vt_status vt_server_start(vt_server* server);
VT_API void vt_server_stop(vt_server* server);
VT_API void vt_server_free(vt_server* server);

#ifdef __cplusplus
}
#endif

#endif /* VTRUST_VTRUST_H */
