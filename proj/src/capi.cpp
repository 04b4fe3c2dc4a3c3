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

#include "vtrust/vtrust.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vtrust/composer.hpp"
#include "vtrust/dataset.hpp"
#include "vtrust/error.hpp"
#include "vtrust/opinion.hpp"
#include "vtrust/prediction.hpp"
#include "vtrust/report.hpp"
#include "vtrust/service.hpp"
#include "vtrust/snapshot.hpp"

using nlohmann::json;

struct vt_dataset {
  vtrust::Dataset dataset;
};

struct vt_snapshot {
  vtrust::Snapshot snapshot;
};

struct vt_server {
  std::unique_ptr<vtrust::Server> server;
};

static_assert(static_cast<int>(vtrust::ErrorCode::Busy) + 1 == VT_E_BUSY,
              "vt_status must mirror ErrorCode");

namespace {

thread_local std::string last_error;

vt_status status_for(vtrust::ErrorCode code) {
  using vtrust::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return VT_E_INVALID_ARGUMENT;
    case ErrorCode::UndefinedOperand: return VT_E_UNDEFINED_OPERAND;
    case ErrorCode::InvalidWeights: return VT_E_INVALID_WEIGHTS;
    case ErrorCode::ParseError: return VT_E_PARSE;
    case ErrorCode::EmptyDataset: return VT_E_EMPTY_DATASET;
    case ErrorCode::MissingDates: return VT_E_MISSING_DATES;
    case ErrorCode::UnknownComponent: return VT_E_UNKNOWN_COMPONENT;
    case ErrorCode::EmptyHistory: return VT_E_EMPTY_HISTORY;
    case ErrorCode::InvalidAlpha: return VT_E_INVALID_ALPHA;
    case ErrorCode::NegativePrediction: return VT_E_NEGATIVE_PREDICTION;
    case ErrorCode::WindowOutOfRange: return VT_E_WINDOW_OUT_OF_RANGE;
    case ErrorCode::EmptyInput: return VT_E_EMPTY_INPUT;
    case ErrorCode::DivisionByZero: return VT_E_DIVISION_BY_ZERO;
    case ErrorCode::SchemaError: return VT_E_SCHEMA;
    case ErrorCode::Unsimplifiable: return VT_E_UNSIMPLIFIABLE;
    case ErrorCode::NotReadOnce: return VT_E_NOT_READ_ONCE;
    case ErrorCode::MissingOpinion: return VT_E_MISSING_OPINION;
    case ErrorCode::IoError: return VT_E_IO;
    case ErrorCode::Busy: return VT_E_BUSY;
  }
  return VT_E_INTERNAL;
}

// Runs fn, translating exceptions into a status plus the thread's message.
template <typename Fn>
vt_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return VT_OK;
  } catch (const vtrust::Error& e) {
    last_error = e.what();
    return status_for(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return VT_E_INTERNAL;
}

void require(const void* p, const char* what) {
  if (!p) throw vtrust::Error(vtrust::ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** out, const std::string& s) {
  if (out) *out = dup_string(s);
}

vtrust::Opinion to_cpp(const vt_opinion* o) {
  require(o, "opinion");
  return vtrust::make_opinion(o->t, o->c, o->f);
}

vt_opinion to_c(const vtrust::Opinion& o) { return vt_opinion{o.t, o.c, o.f}; }

vtrust::IngestOptions options_for(const char* epoch) {
  vtrust::IngestOptions options;
  if (epoch && *epoch) options.epoch = vtrust::parse_month_range(epoch);
  return options;
}

vtrust::DataDir data_dir_for(const char* path) {
  return path && *path ? vtrust::DataDir(path) : vtrust::DataDir::from_environment();
}

json parse_json(const char* text, const char* what) {
  if (!text || !*text) return json();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw vtrust::Error(vtrust::ErrorCode::SchemaError, std::string(what) + " is not JSON: " + e.what());
  }
}

vtrust::SplitSpec split_for(const vt_split* split) {
  require(split, "split");
  require(split->train_end, "split.train_end");
  vtrust::SplitSpec spec{vtrust::parse_year_month(split->train_end), split->validation_months,
                         split->horizon_months};
  spec.validate();
  return spec;
}

vtrust::PredictorBackend backend_for(const vt_backend* backend) {
  require(backend, "backend");
  switch (backend->kind) {
    case VT_BACKEND_AVERAGE:
      return vtrust::AverageBackend{};
    case VT_BACKEND_EWMA:
      return vtrust::EwmaBackend{backend->alpha};
    case VT_BACKEND_EXTERNAL:
      require(backend->import_path, "backend.import_path");
      return vtrust::ExternalBackend{vtrust::import_external(std::filesystem::path(backend->import_path))};
  }
  throw vtrust::Error(vtrust::ErrorCode::InvalidArgument, "unknown backend kind");
}

vtrust::ServiceState state_for(const vt_snapshot* snapshot, const vt_dataset* dataset) {
  require(snapshot, "snapshot");
  require(dataset, "dataset");
  return vtrust::ServiceState{dataset->dataset, snapshot->snapshot};
}

}  // namespace

extern "C" {

const char* vt_version(void) { return "0.1.0"; }

const char* vt_last_error(void) { return last_error.c_str(); }

const char* vt_status_name(vt_status status) {
  switch (status) {
    case VT_OK: return "Ok";
    case VT_E_INTERNAL: return "Internal";
    default:
      if (status > VT_OK && status <= VT_E_BUSY)
        return vtrust::to_string(static_cast<vtrust::ErrorCode>(status - 1));
      return "Unknown";
  }
}

int vt_status_is_data_error(vt_status status) {
  if (status <= VT_OK || status > VT_E_BUSY) return 0;
  return vtrust::is_data_error(static_cast<vtrust::ErrorCode>(status - 1)) ? 1 : 0;
}

void vt_string_free(char* text) { std::free(text); }

vt_status vt_opinion_make(double t, double c, double f, vt_opinion* out) {
  return guarded([&] {
    require(out, "out");
    *out = to_c(vtrust::make_opinion(t, c, f));
  });
}

double vt_expectation(const vt_opinion* op) {
  if (!op) return std::nan("");
  return vtrust::expectation(vtrust::Opinion{op->t, op->c, op->f});
}

vt_status vt_and(const vt_opinion* a, const vt_opinion* b, vt_opinion* out) {
  return guarded([&] {
    require(out, "out");
    *out = to_c(vtrust::and_ct(to_cpp(a), to_cpp(b)));
  });
}

vt_status vt_or(const vt_opinion* a, const vt_opinion* b, vt_opinion* out) {
  return guarded([&] {
    require(out, "out");
    *out = to_c(vtrust::or_ct(to_cpp(a), to_cpp(b)));
  });
}

vt_status vt_fuse(const vt_opinion* ops, const double* weights, size_t n, vt_opinion* out,
                  double* doc) {
  return guarded([&] {
    require(ops, "ops");
    require(out, "out");
    std::vector<vtrust::WeightedOpinion> inputs;
    for (size_t i = 0; i < n; ++i) inputs.push_back({to_cpp(&ops[i]), weights ? weights[i] : 1.0});
    const auto fused = vtrust::fuse(inputs);
    *out = to_c(fused.opinion);
    if (doc) *doc = fused.doc;
  });
}

vt_status vt_dataset_ingest_csv(const char* path, const char* epoch, vt_dataset** out,
                                char** report_json) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto result = vtrust::ingest_csv(std::filesystem::path(path), options_for(epoch));
    put(report_json, vtrust::ingest_report_json(result.report).dump(2));
    *out = new vt_dataset{std::move(result.dataset)};
  });
}

vt_status vt_dataset_ingest_tracker(const char* tracker_json_path, const char* cve_dates_path,
                                    const char* epoch, vt_dataset** out, char** report_json) {
  return guarded([&] {
    require(tracker_json_path, "tracker_json_path");
    require(cve_dates_path, "cve_dates_path");
    require(out, "out");
    auto result = vtrust::ingest_tracker_json(std::filesystem::path(tracker_json_path),
                                              std::filesystem::path(cve_dates_path),
                                              options_for(epoch));
    put(report_json, vtrust::ingest_report_json(result.report).dump(2));
    *out = new vt_dataset{std::move(result.dataset)};
  });
}

vt_status vt_dataset_filter(const vt_dataset* dataset, const char* filter_path, vt_dataset** out) {
  return guarded([&] {
    require(dataset, "dataset");
    require(filter_path, "filter_path");
    require(out, "out");
    *out = new vt_dataset{
        vtrust::apply_filter(dataset->dataset, vtrust::load_filter(filter_path))};
  });
}

void vt_dataset_free(vt_dataset* dataset) { delete dataset; }

size_t vt_dataset_size(const vt_dataset* dataset) { return dataset ? dataset->dataset.size() : 0; }

vt_status vt_dataset_fingerprint(const vt_dataset* dataset, char** out) {
  return guarded([&] {
    require(dataset, "dataset");
    require(out, "out");
    put(out, vtrust::dataset_fingerprint(dataset->dataset));
  });
}

vt_status vt_stats_top_csv(const vt_dataset* dataset, size_t n, const char* window, char** out) {
  return guarded([&] {
    require(dataset, "dataset");
    require(out, "out");
    std::optional<vtrust::MonthRange> range;
    if (window && *window) range = vtrust::parse_month_range(window);
    std::ostringstream csv;
    csv << "rank,component,count\n";
    for (const auto& r : vtrust::top_n(dataset->dataset, n, range))
      csv << r.rank << ',' << r.component << ',' << r.count << '\n';
    put(out, csv.str());
  });
}

vt_status vt_stats_yearly_csv(const vt_dataset* dataset, char** out) {
  return guarded([&] {
    require(dataset, "dataset");
    require(out, "out");
    std::ostringstream csv;
    csv << "year,count,avg_per_affected\n";
    char avg[32];
    for (const auto& [year, count] : vtrust::yearly_totals(dataset->dataset)) {
      std::snprintf(avg, sizeof avg, "%.3f", vtrust::avg_per_affected(dataset->dataset, year));
      csv << year << ',' << count << ',' << avg << '\n';
    }
    put(out, csv.str());
  });
}

vt_status vt_stats_distribution_csv(const vt_dataset* dataset, size_t min_count, char** out) {
  return guarded([&] {
    require(dataset, "dataset");
    require(out, "out");
    std::ostringstream csv;
    csv << "component,count\n";
    for (const auto& [component, count] : vtrust::distribution_export(dataset->dataset, min_count))
      csv << component << ',' << count << '\n';
    put(out, csv.str());
  });
}

vt_status vt_dataset_history_json(const vt_dataset* dataset, const char* component, char** out) {
  return guarded([&] {
    require(dataset, "dataset");
    require(component, "component");
    require(out, "out");
    put(out, vtrust::history_json(vtrust::bin_monthly(dataset->dataset, component)).dump(2));
  });
}

vt_status vt_predict_csv(const vt_dataset* dataset, const vt_split* split,
                         const vt_backend* backend, char** out) {
  return guarded([&] {
    require(dataset, "dataset");
    require(out, "out");
    const auto predictions =
        vtrust::predict_all(dataset->dataset, backend_for(backend), split_for(split));
    std::ostringstream csv;
    vtrust::write_predictions_csv(predictions, csv);
    put(out, csv.str());
  });
}

vt_status vt_backtest_csv(const vt_dataset* dataset, const vt_split* split,
                          const vt_backend* backends, size_t n_backends, size_t min_total,
                          char** out) {
  return guarded([&] {
    require(dataset, "dataset");
    require(backends, "backends");
    require(out, "out");
    std::vector<vtrust::PredictorBackend> list;
    for (size_t i = 0; i < n_backends; ++i) list.push_back(backend_for(&backends[i]));
    const auto rows = vtrust::backtest(dataset->dataset, list, split_for(split), min_total);
    std::ostringstream csv;
    vtrust::write_backtest_csv(rows, csv);
    put(out, csv.str());
  });
}

vt_status vt_params_default_json(char** out) {
  return guarded([&] {
    require(out, "out");
    put(out, vtrust::to_json(vtrust::TrustParams{}).dump(2));
  });
}

vt_status vt_data_dir_resolve(const char* data_dir, char** out) {
  return guarded([&] {
    require(out, "out");
    put(out, data_dir_for(data_dir).root().string());
  });
}

vt_status vt_dataset_save(const vt_dataset* dataset, const char* data_dir, const char* report_json) {
  return guarded([&] {
    require(dataset, "dataset");
    vtrust::IngestReport report;
    const json doc = parse_json(report_json, "report_json");
    if (doc.is_object()) {
      report.rows_read = doc.value("rows_read", std::size_t{0});
      report.records = doc.value("records", dataset->dataset.size());
      report.duplicates_collapsed = doc.value("duplicates_collapsed", std::size_t{0});
      report.skipped_undated = doc.value("skipped_undated", std::size_t{0});
      report.skipped_out_of_epoch = doc.value("skipped_out_of_epoch", std::size_t{0});
      report.undated_cves = doc.value("undated_cves", std::vector<std::string>{});
    } else {
      report.records = dataset->dataset.size();
    }
    data_dir_for(data_dir).save_dataset(dataset->dataset, report);
  });
}

vt_status vt_dataset_load(const char* data_dir, vt_dataset** out) {
  return guarded([&] {
    require(out, "out");
    *out = new vt_dataset{data_dir_for(data_dir).load_dataset()};
  });
}

vt_status vt_predictions_save(const char* data_dir, const char* csv) {
  return guarded([&] {
    require(csv, "csv");
    std::istringstream in(csv);
    std::vector<vtrust::PredictionResult> predictions;
    for (auto& entry : vtrust::import_external(in)) predictions.push_back(std::move(entry.second));
    data_dir_for(data_dir).save_predictions(predictions);
  });
}

vt_status vt_snapshot_build(const vt_dataset* dataset, const char* data_dir,
                            const char* params_json, vt_snapshot** out) {
  return guarded([&] {
    require(dataset, "dataset");
    require(out, "out");
    const auto params = vtrust::params_from_json(parse_json(params_json, "params_json"));
    const auto predictions = data_dir_for(data_dir).load_predictions();
    *out = new vt_snapshot{vtrust::build_snapshot(dataset->dataset, predictions, params)};
  });
}

void vt_snapshot_free(vt_snapshot* snapshot) { delete snapshot; }

vt_status vt_snapshot_save(const vt_snapshot* snapshot, const char* data_dir, char** path) {
  return guarded([&] {
    require(snapshot, "snapshot");
    put(path, data_dir_for(data_dir).save_snapshot(snapshot->snapshot).string());
  });
}

vt_status vt_snapshot_load_current(const char* data_dir, vt_snapshot** out) {
  return guarded([&] {
    require(out, "out");
    const auto dir = data_dir_for(data_dir);
    auto snapshot = dir.load_current_snapshot();
    if (!snapshot)
      throw vtrust::Error(vtrust::ErrorCode::IoError,
                          "no snapshot in " + dir.root().string() + " (run assess first)");
    *out = new vt_snapshot{std::move(*snapshot)};
  });
}

vt_status vt_snapshot_report_json(const vt_snapshot* snapshot, char** out) {
  return guarded([&] {
    require(snapshot, "snapshot");
    require(out, "out");
    put(out, vtrust::assessment_report(snapshot->snapshot).dump(2));
  });
}

vt_status vt_snapshot_assess_json(const vt_snapshot* snapshot, const vt_dataset* dataset,
                                  const char* request_json, char** out) {
  return guarded([&] {
    require(request_json, "request_json");
    require(out, "out");
    const auto state = state_for(snapshot, dataset);
    put(out, vtrust::handle_assess_request(state, parse_json(request_json, "request")).dump(2));
  });
}

vt_status vt_snapshot_compare_json(const vt_snapshot* snapshot, const vt_dataset* dataset,
                                   const char* request_json, char** out) {
  return guarded([&] {
    require(request_json, "request_json");
    require(out, "out");
    const auto state = state_for(snapshot, dataset);
    put(out, vtrust::handle_compare_request(state, parse_json(request_json, "request")).dump(2));
  });
}

vt_status vt_compare_counts_json(double equivalent_a, double equivalent_b, double actual_a,
                                 double actual_b, char** out) {
  return guarded([&] {
    require(out, "out");
    auto given = [](double v) { return std::isnan(v) ? std::nullopt : std::optional<double>(v); };
    put(out, vtrust::comparison_payload(vtrust::compare_counts(equivalent_a, equivalent_b,
                                                               given(actual_a), given(actual_b)))
                 .dump(2));
  });
}

vt_status vt_server_create(const char* data_dir, const char* host, int port, vt_server** out) {
  return guarded([&] {
    require(out, "out");
    auto server = vtrust::Server::from_data_dir(data_dir_for(data_dir));
    server->bind(host && *host ? host : "127.0.0.1", port);
    *out = new vt_server{std::move(server)};
  });
}

int vt_server_port(const vt_server* server) { return server ? server->server->port() : -1; }

vt_status vt_server_run(vt_server* server) {
  return guarded([&] {
    require(server, "server");
    server->server->run();
  });
}

vt_status vt_server_start(vt_server* server) {
  return guarded([&] {
    require(server, "server");
    server->server->start();
  });
}

void vt_server_stop(vt_server* server) {
  if (server) server->server->stop();
}

void vt_server_free(vt_server* server) { delete server; }

}  // extern "C"
