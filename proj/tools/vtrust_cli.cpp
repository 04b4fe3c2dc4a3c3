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

// Command-line front end. Talks to the library only through vtrust.h.

#include <signal.h>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vtrust/vtrust.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitComputation = 3;

struct Failure {
  int exit_code;
  std::string message;
};

void check(vt_status status) {
  if (status == VT_OK) return;
  throw Failure{vt_status_is_data_error(status) ? kExitData : kExitComputation,
                std::string(vt_status_name(status)) + ": " + vt_last_error()};
}

[[noreturn]] void usage(const std::string& message) { throw Failure{kExitUsage, message}; }

// Owns a string returned by the library.
struct Text {
  char* ptr = nullptr;
  ~Text() { vt_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

struct DatasetHandle {
  vt_dataset* ptr = nullptr;
  ~DatasetHandle() { vt_dataset_free(ptr); }
};

struct SnapshotHandle {
  vt_snapshot* ptr = nullptr;
  ~SnapshotHandle() { vt_snapshot_free(ptr); }
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitData, "cannot open " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw Failure{kExitData, path + ": " + e.what()};
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure{kExitData, "cannot write " + out_path};
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

struct Globals {
  std::string data_dir;
  const char* dir() const { return data_dir.empty() ? nullptr : data_dir.c_str(); }
};

struct ParamOptions {
  std::string params_file;
  std::optional<int> lambda;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--params", params_file, "JSON file with trust parameter overrides")
        ->check(CLI::ExistingFile);
    cmd->add_option("--lambda", lambda, "trials per horizon (default 1080)");
  }

  json overrides() const {
    json doc = params_file.empty() ? json::object() : read_json(params_file);
    if (!doc.is_object()) throw Failure{kExitData, params_file + ": params must be an object"};
    if (lambda) doc["lambda"] = *lambda;
    return doc;
  }
};

struct SplitOptions {
  std::string train_end = "2016-03";
  int validation_months = 9;
  int horizon_months = 9;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--train-end", train_end, "last training month, YYYY-MM")->capture_default_str();
    cmd->add_option("--validate-months", validation_months, "validation window length k")
        ->capture_default_str();
    cmd->add_option("--horizon", horizon_months, "prediction horizon l in months")
        ->capture_default_str();
  }

  vt_split split() const { return vt_split{train_end.c_str(), validation_months, horizon_months}; }
};

vt_backend backend_from(const std::string& name, double alpha, const std::string& import_path) {
  if (name == "average") return vt_backend{VT_BACKEND_AVERAGE, alpha, nullptr};
  if (name == "ewma") return vt_backend{VT_BACKEND_EWMA, alpha, nullptr};
  if (name == "external") {
    if (import_path.empty()) usage("--backend external needs --import FILE");
    return vt_backend{VT_BACKEND_EXTERNAL, alpha, import_path.c_str()};
  }
  usage("unknown backend '" + name + "'");
}

// Builds the request body shared with POST /api/systems/assess.
json assess_request(const std::string& spec_path, bool unknown_as_clean) {
  json body{{"system", read_json(spec_path)}};
  if (unknown_as_clean) body["unknown_as_clean"] = true;
  return body;
}

SnapshotHandle build_snapshot(const Globals& g, const vt_dataset* dataset, const json& params) {
  SnapshotHandle snap;
  check(vt_snapshot_build(dataset, g.dir(), params.dump().c_str(), &snap.ptr));
  return snap;
}

int run_serve(const Globals& g, const std::string& host, int port) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  // Blocked before the server threads exist so they inherit the mask.
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  vt_server* server = nullptr;
  check(vt_server_create(g.dir(), host.c_str(), port, &server));
  const vt_status started = vt_server_start(server);
  if (started != VT_OK) {
    vt_server_free(server);
    check(started);
  }
  std::cerr << "serving on http://" << host << ':' << vt_server_port(server) << std::endl;
  int received = 0;
  sigwait(&signals, &received);
  vt_server_stop(server);
  vt_server_free(server);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vulnerability-history based trust assessment of software systems"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--data-dir", g.data_dir, "data directory (default $VTRUST_DATA_DIR or ./vtrust-data)");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "load vulnerability records into the data directory");
  std::string csv_path, tracker_path, dates_path, filter_path, epoch;
  ingest->add_option("--csv", csv_path, "component,cve_id,published CSV")->check(CLI::ExistingFile);
  ingest->add_option("--tracker-json", tracker_path, "tracker export (package -> CVEs)")
      ->check(CLI::ExistingFile);
  ingest->add_option("--cve-dates", dates_path, "cve_id,published CSV for the tracker export")
      ->check(CLI::ExistingFile);
  ingest->add_option("--filter", filter_path, "JSON filter on packages and months")
      ->check(CLI::ExistingFile);
  ingest->add_option("--epoch", epoch, "evidence window YYYY-MM:YYYY-MM (default 2001-01:2017-09)");

  // predict
  auto* predict = app.add_subcommand("predict", "predict per-component vulnerability counts");
  std::string backend_name = "average", import_path, out_path;
  double alpha = 0.1;
  SplitOptions split;
  predict->add_option("--backend", backend_name, "average | ewma | external")
      ->check(CLI::IsMember({"average", "ewma", "external"}))
      ->capture_default_str();
  split.add_to(predict);
  predict->add_option("--alpha", alpha, "EWMA smoothing factor in (0, 1]")->capture_default_str();
  predict->add_option("--import", import_path, "component,pred,error CSV (external backend)")
      ->check(CLI::ExistingFile);
  predict->add_option("--out", out_path, "also write the predictions CSV here");

  // assess
  auto* assess = app.add_subcommand("assess", "assess components and optionally a system");
  std::string system_path, report_path;
  bool unknown_as_clean = false;
  ParamOptions assess_params;
  assess->add_option("--system", system_path, "system spec JSON")->check(CLI::ExistingFile);
  assess_params.add_to(assess);
  assess->add_flag("--unknown-as-clean", unknown_as_clean,
                   "assess components without any record as clean");
  assess->add_option("--report", report_path, "write the component assessment report here");

  // compare
  auto* compare = app.add_subcommand("compare", "compare two system configurations");
  std::string system_a, system_b;
  std::optional<double> actual_a, actual_b, equivalent_a, equivalent_b;
  ParamOptions compare_params;
  compare->add_option("--system-a", system_a, "first system spec")->check(CLI::ExistingFile);
  compare->add_option("--system-b", system_b, "second system spec")->check(CLI::ExistingFile);
  compare->add_option("--equivalent-a", equivalent_a, "equivalent count of A (instead of a spec)");
  compare->add_option("--equivalent-b", equivalent_b, "equivalent count of B (instead of a spec)");
  compare->add_option("--actual-a", actual_a, "actual vulnerability count of A");
  compare->add_option("--actual-b", actual_b, "actual vulnerability count of B");
  compare->add_flag("--unknown-as-clean", unknown_as_clean,
                    "assess components without any record as clean");
  compare_params.add_to(compare);

  // stats
  auto* stats = app.add_subcommand("stats", "dataset analytics as CSV");
  std::optional<std::size_t> top, distribution;
  std::string window, history;
  bool yearly = false;
  auto* top_opt = stats->add_option("--top", top, "N most vulnerable components");
  stats->add_option("--window", window, "restrict --top to YYYY-MM:YYYY-MM")->needs(top_opt);
  stats->add_flag("--yearly", yearly, "vulnerabilities per year");
  stats->add_option("--distribution", distribution, "all-time totals >= MIN");
  stats->add_option("--history", history, "monthly series of one component (JSON)");
  stats->add_option("--out", out_path, "write the report here");

  // backtest
  auto* backtest = app.add_subcommand("backtest", "score predictors on the test window");
  std::vector<std::string> backends{"average", "ewma"};
  std::size_t min_total = 10;
  SplitOptions backtest_split;
  backtest->add_option("--backend", backends, "backends to score (repeatable)")
      ->check(CLI::IsMember({"average", "ewma", "external"}));
  backtest_split.add_to(backtest);
  backtest->add_option("--alpha", alpha, "EWMA smoothing factor")->capture_default_str();
  backtest->add_option("--import", import_path, "component,pred,error CSV (external backend)")
      ->check(CLI::ExistingFile);
  backtest->add_option("--min-total", min_total, "score components with more records than this")
      ->capture_default_str();
  backtest->add_option("--out", out_path, "write the report here");

  // serve
  auto* serve = app.add_subcommand("serve", "serve the HTTP API over the current snapshot");
  std::string host = "127.0.0.1";
  int port = 8080;
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*ingest) {
      const bool tracker = !tracker_path.empty() || !dates_path.empty();
      if (csv_path.empty() == !tracker) usage("give either --csv or --tracker-json with --cve-dates");
      if (tracker && (tracker_path.empty() || dates_path.empty()))
        usage("--tracker-json and --cve-dates go together");
      DatasetHandle dataset;
      Text report;
      const char* ep = epoch.empty() ? nullptr : epoch.c_str();
      if (tracker)
        check(vt_dataset_ingest_tracker(tracker_path.c_str(), dates_path.c_str(), ep, &dataset.ptr,
                                        &report.ptr));
      else
        check(vt_dataset_ingest_csv(csv_path.c_str(), ep, &dataset.ptr, &report.ptr));
      if (!filter_path.empty()) {
        DatasetHandle filtered;
        check(vt_dataset_filter(dataset.ptr, filter_path.c_str(), &filtered.ptr));
        std::swap(dataset.ptr, filtered.ptr);
      }
      json summary = json::parse(report.str());
      summary["records"] = vt_dataset_size(dataset.ptr);
      check(vt_dataset_save(dataset.ptr, g.dir(), summary.dump().c_str()));
      std::cout << summary.dump(2) << '\n';
      return kExitOk;
    }

    if (*predict) {
      DatasetHandle dataset;
      check(vt_dataset_load(g.dir(), &dataset.ptr));
      const vt_backend backend = backend_from(backend_name, alpha, import_path);
      const vt_split s = split.split();
      Text csv;
      check(vt_predict_csv(dataset.ptr, &s, &backend, &csv.ptr));
      check(vt_predictions_save(g.dir(), csv.ptr));
      emit(csv.str(), out_path);
      return kExitOk;
    }

    if (*assess) {
      DatasetHandle dataset;
      check(vt_dataset_load(g.dir(), &dataset.ptr));
      SnapshotHandle snap = build_snapshot(g, dataset.ptr, assess_params.overrides());
      check(vt_snapshot_save(snap.ptr, g.dir(), nullptr));
      Text report;
      check(vt_snapshot_report_json(snap.ptr, &report.ptr));
      if (!report_path.empty()) emit(report.str(), report_path);
      if (system_path.empty()) {
        if (report_path.empty()) emit(report.str(), "");
        return kExitOk;
      }
      Text payload;
      check(vt_snapshot_assess_json(snap.ptr, dataset.ptr,
                                    assess_request(system_path, unknown_as_clean).dump().c_str(),
                                    &payload.ptr));
      emit(payload.str(), "");
      return kExitOk;
    }

    if (*compare) {
      const bool by_count = equivalent_a || equivalent_b;
      const bool by_spec = !system_a.empty() || !system_b.empty();
      if (by_count == by_spec)
        usage("give either --system-a/--system-b or --equivalent-a/--equivalent-b");
      const double nan = std::nan("");
      Text payload;
      if (by_count) {
        if (!equivalent_a || !equivalent_b) usage("--equivalent-a and --equivalent-b go together");
        check(vt_compare_counts_json(*equivalent_a, *equivalent_b, actual_a.value_or(nan),
                                     actual_b.value_or(nan), &payload.ptr));
      } else {
        if (system_a.empty() || system_b.empty()) usage("--system-a and --system-b go together");
        DatasetHandle dataset;
        check(vt_dataset_load(g.dir(), &dataset.ptr));
        SnapshotHandle snap = build_snapshot(g, dataset.ptr, compare_params.overrides());
        json body{{"a", assess_request(system_a, unknown_as_clean)},
                  {"b", assess_request(system_b, unknown_as_clean)}};
        if (actual_a) body["actual_a"] = *actual_a;
        if (actual_b) body["actual_b"] = *actual_b;
        check(vt_snapshot_compare_json(snap.ptr, dataset.ptr, body.dump().c_str(), &payload.ptr));
      }
      emit(payload.str(), "");
      return kExitOk;
    }

    if (*stats) {
      const int chosen = (top ? 1 : 0) + (yearly ? 1 : 0) + (distribution ? 1 : 0) +
                         (history.empty() ? 0 : 1);
      if (chosen != 1) usage("give exactly one of --top, --yearly, --distribution, --history");
      DatasetHandle dataset;
      check(vt_dataset_load(g.dir(), &dataset.ptr));
      Text report;
      if (top)
        check(vt_stats_top_csv(dataset.ptr, *top, window.empty() ? nullptr : window.c_str(),
                               &report.ptr));
      else if (yearly)
        check(vt_stats_yearly_csv(dataset.ptr, &report.ptr));
      else if (distribution)
        check(vt_stats_distribution_csv(dataset.ptr, *distribution, &report.ptr));
      else
        check(vt_dataset_history_json(dataset.ptr, history.c_str(), &report.ptr));
      emit(report.str(), out_path);
      return kExitOk;
    }

    if (*backtest) {
      DatasetHandle dataset;
      check(vt_dataset_load(g.dir(), &dataset.ptr));
      std::vector<vt_backend> list;
      for (const auto& name : backends) list.push_back(backend_from(name, alpha, import_path));
      const vt_split s = backtest_split.split();
      Text csv;
      check(vt_backtest_csv(dataset.ptr, &s, list.data(), list.size(), min_total, &csv.ptr));
      emit(csv.str(), out_path);
      return kExitOk;
    }

    if (*serve) return run_serve(g, host, port);
  } catch (const Failure& f) {
    std::cerr << "vtrust: " << f.message << '\n';
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "vtrust: " << e.what() << '\n';
    return kExitComputation;
  }
  return kExitUsage;
}
