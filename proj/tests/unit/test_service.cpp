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

#include <atomic>
#include <thread>

#include "oracles.hpp"
#include "vtrust/error.hpp"
#include "vtrust/composer.hpp"
#include "vtrust/report.hpp"
#include "vtrust/service.hpp"

namespace vtrust {
namespace {

using nlohmann::json;

SplitSpec default_split() {
  return SplitSpec{YearMonth{std::chrono::year{2016}, std::chrono::month{3}}, 9, 9};
}

// Data directory holding system_history.csv, average predictions and one
// snapshot with default parameters.
class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const IngestResult in = ingest_csv(testing::fixture("system_history.csv"));
    dir_.emplace(tmp_.path());
    dir_->save_dataset(in.dataset, in.report);
    predictions_ = predict_all(in.dataset, AverageBackend{}, default_split());
    dir_->save_predictions(predictions_);
    dir_->save_snapshot(build_snapshot(in.dataset, dir_->load_predictions(), {}));
    server_ = Server::from_data_dir(*dir_);
    server_->bind("127.0.0.1", 0);
    server_->start();
    client_.emplace("127.0.0.1", server_->port());
  }
  void TearDown() override { server_->stop(); }

  json get(const std::string& path, int expect = 200) {
    auto res = client_->Get(path);
    EXPECT_TRUE(res) << path;
    if (!res) return {};
    EXPECT_EQ(res->status, expect) << path << ": " << res->body;
    return json::parse(res->body);
  }
  json post(const std::string& path, const json& body, int expect = 200) {
    auto res = client_->Post(path, body.dump(), "application/json");
    EXPECT_TRUE(res) << path;
    if (!res) return {};
    EXPECT_EQ(res->status, expect) << path << ": " << res->body;
    return json::parse(res->body);
  }
  json spec(const char* name) { return json::parse(testing::slurp(testing::fixture(name))); }

  testing::TempDir tmp_;
  std::optional<DataDir> dir_;
  std::vector<PredictionResult> predictions_;
  std::unique_ptr<Server> server_;
  std::optional<httplib::Client> client_;
};

TEST_F(ServiceTest, ComponentsListAndDetail) {
  const json list = get("/api/components");
  ASSERT_EQ(list.size(), 7u);
  EXPECT_EQ(list[0]["component"], "A");
  EXPECT_EQ(list[0]["records"], 202);
  EXPECT_TRUE(list[0]["assessment"].is_object());
  EXPECT_TRUE(list[0]["prediction"].is_object());

  const json x = get("/api/components/X");
  EXPECT_EQ(x["records"], 300);
  EXPECT_EQ(x["assessment"]["component"], "X");
  const json err = get("/api/components/nope", 404);
  EXPECT_EQ(err["error"], "UnknownComponent");
}

TEST_F(ServiceTest, HistorySumsToRecordCount) {
  for (const char* name : {"A", "Q", "Y"}) {
    const json h = get(std::string("/api/components/") + name + "/history");
    int sum = 0;
    for (const auto& m : h["series"]) sum += m["count"].get<int>();
    EXPECT_EQ(sum, h["total"].get<int>());
    EXPECT_EQ(sum, get(std::string("/api/components/") + name)["records"].get<int>());
    EXPECT_EQ(h["bins"], "month");
  }
  get("/api/components/A/history?bins=year", 400);
}

TEST_F(ServiceTest, Stats) {
  const json yearly = get("/api/stats/yearly");
  std::size_t total = 0;
  for (const auto& y : yearly) total += y["count"].get<std::size_t>();
  EXPECT_EQ(total, 948u);
  const json top = get("/api/stats/top?n=3");
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0]["component"], "X");
  EXPECT_EQ(top[0]["rank"], "1");
  EXPECT_EQ(get("/api/stats/top?n=2&start=2015-01&end=2016-12").size(), 2u);
  get("/api/stats/top?n=abc", 400);
  get("/api/stats/top?start=2015-13", 400);
}

TEST_F(ServiceTest, AssessMatchesLibrary) {
  const json body = spec("desktop.json");
  const json payload = post("/api/systems/assess", body);
  const auto state = server_->state();
  const json direct = system_payload(assess_system(parse_spec(body), state->snapshot.opinions(), {}));
  EXPECT_EQ(payload, direct);
  EXPECT_EQ(payload["formula"], "B & D & ((A & C) | (X & Y))");

  // Wrapped form with a parameter override.
  const json wrapped = post("/api/systems/assess", {{"system", body}, {"params", {{"lambda", 900}}}});
  EXPECT_NE(wrapped["expectation"], payload["expectation"]);

  const json shared_core = post("/api/systems/assess", spec("shared_core.json"));
  EXPECT_EQ(shared_core["simplification_log"].size(), 1u);
}

TEST_F(ServiceTest, AssessErrors) {
  json unknown = spec("pair.json");
  unknown["formula"]["and"][1]["atom"] = "nginx";
  EXPECT_EQ(post("/api/systems/assess", unknown, 404)["error"], "MissingOpinion");
  const json clean = post("/api/systems/assess", {{"system", unknown}, {"unknown_as_clean", true}});
  EXPECT_EQ(clean["equivalent_vulns"],
            post("/api/systems/assess", {{"name", "a"}, {"formula", {{"atom", "A"}}}})["equivalent_vulns"]);

  post("/api/systems/assess", spec("empty_or.json"), 400);
  post("/api/systems/assess", {{"system", spec("pair.json")}, {"params", {{"lambda", -1}}}}, 400);
  auto res = client_->Post("/api/systems/assess", "{not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
}

TEST_F(ServiceTest, AssessWithSources) {
  const json body{{"system", spec("pair.json")},
                  {"sources", {{"A", json::array({{{"t", 0.2}, {"c", 0.9}, {"f", 0.5}, {"weight", 1}}})}}}};
  const json fused = post("/api/systems/assess", body);
  ASSERT_EQ(fused["fusion_log"].size(), 1u);
  const json plain = post("/api/systems/assess", spec("pair.json"));
  EXPECT_LT(fused["expectation"].get<double>(), plain["expectation"].get<double>());
  post("/api/systems/assess", {{"system", spec("pair.json")}, {"sources", {{"A", json::array({{{"t", 2}}})}}}},
       400);
}

TEST_F(ServiceTest, Compare) {
  const json r = post("/api/systems/compare",
                      {{"a", spec("pair.json")}, {"b", spec("desktop.json")}, {"actual_a", 70}, {"actual_b", 84}});
  const double ea = r["a"]["equivalent_vulns"].get<double>();
  const double eb = r["b"]["equivalent_vulns"].get<double>();
  const auto expected = comparison_payload(compare_counts(ea, eb, 70, 84));
  EXPECT_EQ(r["comparison"], expected);
  EXPECT_TRUE(r["comparison"]["norm_error"].is_number());

  const json no_actual = post("/api/systems/compare", {{"a", spec("pair.json")}, {"b", spec("pair.json")}});
  EXPECT_EQ(no_actual["comparison"]["ratio_equivalent"], 1.0);
  EXPECT_TRUE(no_actual["comparison"]["norm_error"].is_null());
  post("/api/systems/compare", {{"a", spec("pair.json")}}, 400);
  post("/api/systems/compare",
       {{"a", spec("pair.json")}, {"b", spec("pair.json")}, {"actual_a", 1}, {"actual_b", 0}}, 422);
}

TEST_F(ServiceTest, RecomputeSwapsSnapshot) {
  const json before = get("/api/components/A");
  const json summary = post("/api/recompute", {{"params", {{"lambda", 900}}}});
  EXPECT_EQ(summary["components"], 7);
  EXPECT_EQ(server_->state()->snapshot.params.lambda, 900);
  const json after = get("/api/components/A");
  EXPECT_NE(before["assessment"]["expectation"], after["assessment"]["expectation"]);
  // The new snapshot is the current one on disk.
  EXPECT_EQ(dir_->load_current_snapshot()->params.lambda, 900);
  post("/api/recompute", {{"params", {{"lambda", "big"}}}}, 400);
}

TEST_F(ServiceTest, ReadersNeverSeeAMixedSnapshot) {
  // Expected listings under both parameter sets.
  const json first = get("/api/components");
  post("/api/recompute", {{"params", {{"lambda", 700}}}});
  const json second = get("/api/components");
  ASSERT_NE(first, second);

  std::atomic<bool> done{false};
  std::atomic<int> reads{0}, mixed{0};
  std::thread reader([&] {
    httplib::Client c("127.0.0.1", server_->port());
    while (!done) {
      auto res = c.Get("/api/components");
      if (!res || res->status != 200) {
        ++mixed;
        continue;
      }
      const json body = json::parse(res->body);
      if (body != first && body != second) ++mixed;
      ++reads;
    }
  });
  httplib::Client writer("127.0.0.1", server_->port());
  for (int i = 0; i < 6; ++i) {
    const int lambda = i % 2 == 0 ? 1080 : 700;
    auto res = writer.Post("/api/recompute", json{{"params", {{"lambda", lambda}}}}.dump(),
                           "application/json");
    ASSERT_TRUE(res);
    EXPECT_TRUE(res->status == 200 || res->status == 409) << res->status;
  }
  // Keep reading for a moment after the last swap.
  const int target = reads + 5;
  while (reads < target) std::this_thread::yield();
  done = true;
  reader.join();
  EXPECT_EQ(mixed, 0);
  EXPECT_GT(reads, 0);
}

TEST(Service, RecomputeWithoutDataDirIsBusy) {
  const IngestResult in = ingest_csv(testing::fixture("ten_rows.csv"));
  Server server(ServiceState{in.dataset, build_snapshot(in.dataset, {}, {})}, std::nullopt);
  try {
    server.recompute(json::object());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Busy);
    EXPECT_EQ(http_status_for(e), 409);
  }
}

TEST(Service, StatusMapping) {
  EXPECT_EQ(http_status_for(Error(ErrorCode::UnknownComponent, "")), 404);
  EXPECT_EQ(http_status_for(Error(ErrorCode::Unsimplifiable, "")), 422);
  EXPECT_EQ(http_status_for(Error(ErrorCode::SchemaError, "")), 400);
  EXPECT_EQ(http_status_for(Error(ErrorCode::IoError, "")), 500);
}

TEST(Service, FromEmptyDataDirFails) {
  testing::TempDir tmp;
  EXPECT_THROW(Server::from_data_dir(DataDir(tmp.path())), Error);
}

}  // namespace
}  // namespace vtrust
