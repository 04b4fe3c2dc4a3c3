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

#include <gtest/gtest.h>
#include <httplib.h>
#include <sys/wait.h>

#include <cstdio>

#include "oracles.hpp"
#include "vtrust/report.hpp"
#include "vtrust/service.hpp"

namespace vtrust {
namespace {

using nlohmann::json;

struct CliRun {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the CLI with VTRUST_DATA_DIR pointing at `data_dir`.
CliRun run_cli(const std::filesystem::path& data_dir, const std::string& args) {
  testing::TempDir scratch;
  const auto err_path = scratch / "stderr";
  const std::string cmd = "VTRUST_DATA_DIR='" + data_dir.string() + "' '" VTRUST_CLI_PATH "' " +
                          args + " 2>'" + err_path.string() + "'";
  CliRun r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = testing::slurp(err_path);
  return r;
}

std::string fx(const char* name) { return "'" + testing::fixture(name).string() + "'"; }

class CliTest : public ::testing::Test {
 protected:
  CliRun cli(const std::string& args) { return run_cli(tmp_.path(), args); }
  void ingest_history() {
    ASSERT_EQ(cli("ingest --csv " + fx("system_history.csv")).exit_code, 0);
    ASSERT_EQ(cli("predict --backend average").exit_code, 0);
  }
  testing::TempDir tmp_;
};

TEST_F(CliTest, IngestPrintsReport) {
  const CliRun r = cli("ingest --csv " + fx("duplicate.csv"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json report = json::parse(r.out);
  EXPECT_GT(report["duplicates_collapsed"].get<int>(), 0);
  EXPECT_TRUE(std::filesystem::exists(tmp_.path() / "dataset.csv"));
}

TEST_F(CliTest, MalformedRowIsADataError) {
  const CliRun r = cli("ingest --csv " + fx("bad_month.csv"));
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST_F(CliTest, TrackerRecordCount) {
  const CliRun r = cli("ingest --tracker-json " + fx("tracker.json") + " --cve-dates " + fx("cve_dates.csv"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["records"], 10);
  EXPECT_EQ(json::parse(r.out)["skipped_undated"], 2);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(cli("").exit_code, 1);
  EXPECT_EQ(cli("frobnicate").exit_code, 1);
  EXPECT_EQ(cli("ingest").exit_code, 1);
  EXPECT_EQ(cli("predict --backend lstm").exit_code, 1);
  EXPECT_EQ(cli("compare --equivalent-a 3").exit_code, 1);
  EXPECT_EQ(cli("--help").exit_code, 0);
}

TEST_F(CliTest, ComputationErrorExitCode) {
  const CliRun r = cli("compare --equivalent-a 3 --equivalent-b 0");
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_NE(r.err.find("vtrust:"), std::string::npos);
}

TEST_F(CliTest, MissingDatasetIsADataError) { EXPECT_EQ(cli("stats --yearly").exit_code, 2); }

TEST_F(CliTest, CompareByCounts) {
  const CliRun r = cli("compare --equivalent-a 405 --equivalent-b 229 --actual-a 809 --actual-b 414");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json c = json::parse(r.out);
  EXPECT_NEAR(c["ratio_equivalent"].get<double>(), 1.770, 5e-3);
  EXPECT_NEAR(c["ratio_actual"].get<double>(), 1.954, 5e-3);
  EXPECT_NEAR(c["norm_error"].get<double>(), 0.094, 5e-3);
}

TEST_F(CliTest, StatsReports) {
  ASSERT_EQ(cli("ingest --csv " + fx("ten_rows.csv")).exit_code, 0);
  EXPECT_EQ(cli("stats --top 2 --window 2016-01:2016-12").out, "rank,component,count\n1,xen,3\n2,qemu,2\n");
  EXPECT_EQ(cli("stats --distribution 4").out, "component,count\nopenssl,4\n");
  const auto out = tmp_.path() / "yearly.csv";
  ASSERT_EQ(cli("stats --yearly --out '" + out.string() + "'").exit_code, 0);
  EXPECT_EQ(testing::slurp(out), cli("stats --yearly").out);
  EXPECT_EQ(cli("stats --yearly --top 3").exit_code, 1);
  EXPECT_EQ(json::parse(cli("stats --history xen").out)["total"], 3);
  EXPECT_EQ(cli("stats --history nope").exit_code, 2);
}

TEST_F(CliTest, PredictImportsTable) {
  ASSERT_EQ(cli("ingest --csv " + fx("ten_rows.csv")).exit_code, 0);
  const CliRun r = cli("predict --backend external --import " + fx("reference_predictions.csv"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("linux,35,0.034"), std::string::npos) << r.out;
  EXPECT_EQ(cli("predict --backend external --import " + fx("negative_prediction.csv")).exit_code, 2);
}

TEST_F(CliTest, BacktestIsDeterministic) {
  ingest_history();
  const CliRun a = cli("backtest --backend average --backend ewma --alpha 0.2");
  ASSERT_EQ(a.exit_code, 0) << a.err;
  EXPECT_EQ(a.out, cli("backtest --backend average --backend ewma --alpha 0.2").out);
  EXPECT_EQ(a.out.rfind("backend,rmse,components_scored\n", 0), 0u) << a.out;
}

TEST_F(CliTest, AssessReportIsDeterministic) {
  ingest_history();
  const CliRun a = cli("assess");
  ASSERT_EQ(a.exit_code, 0) << a.err;
  const CliRun b = cli("assess");
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(json::parse(a.out)["components"].size(), 7u);
  EXPECT_EQ(cli("assess --system " + fx("empty_or.json")).exit_code, 2);
}

TEST_F(CliTest, SingleAtomSystemPassesThrough) {
  ingest_history();
  testing::write_text(tmp_.path() / "one.json", R"({"name":"one","formula":{"atom":"X"}})");
  const CliRun r = cli("assess --system '" + (tmp_.path() / "one.json").string() + "'");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json payload = json::parse(r.out);
  const auto snap = DataDir(tmp_.path()).load_current_snapshot();
  const json entry = report_entry(snap->assessments.at("X"));
  for (const char* key : {"t", "c", "f", "expectation", "equivalent_vulns"})
    EXPECT_EQ(payload[key], entry[key]) << key;
}

TEST_F(CliTest, CliAndApiPayloadsAgree) {
  ingest_history();
  const CliRun r = cli("assess --system " + fx("desktop.json"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json cli_payload = json::parse(r.out);

  const DataDir dir(tmp_.path());
  const ServiceState state{dir.load_dataset(), *dir.load_current_snapshot()};
  const json api_payload =
      handle_assess_request(state, json::parse(testing::slurp(testing::fixture("desktop.json"))));
  EXPECT_EQ(cli_payload, api_payload);

  // Same through a live server.
  auto server = Server::from_data_dir(dir);
  server->bind("127.0.0.1", 0);
  server->start();
  httplib::Client client("127.0.0.1", server->port());
  auto res = client.Post("/api/systems/assess", testing::slurp(testing::fixture("desktop.json")),
                         "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(json::parse(res->body), cli_payload);
  server->stop();
}

TEST_F(CliTest, CompareSystems) {
  ingest_history();
  ASSERT_EQ(cli("assess").exit_code, 0);
  const CliRun r = cli("compare --system-a " + fx("pair.json") + " --system-b " + fx("desktop.json") +
                    " --actual-a 70 --actual-b 84");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json c = json::parse(r.out);
  EXPECT_EQ(c["a"]["system"], "pair");
  EXPECT_TRUE(c["comparison"]["norm_error"].is_number());
}

}  // namespace
}  // namespace vtrust
