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

#include <cstdlib>
#include <fstream>

#include "oracles.hpp"
#include "vtrust/error.hpp"
#include "vtrust/snapshot.hpp"

namespace vtrust {
namespace {

std::vector<PredictionResult> table_predictions() {
  std::vector<PredictionResult> out;
  for (auto& [_, p] : import_external(testing::fixture("reference_predictions.csv")))
    out.push_back(p);
  return out;
}

TEST(Fingerprint, DeterministicAndSensitive) {
  const Dataset d = testing::ranking_dataset();
  EXPECT_EQ(dataset_fingerprint(d), dataset_fingerprint(testing::ranking_dataset()));
  EXPECT_EQ(dataset_fingerprint(d).size(), 64u);
  EXPECT_NE(dataset_fingerprint(d), dataset_fingerprint(testing::ranking_dataset(false)));
  // Same records, different epoch.
  const Dataset narrow(d.records(), MonthRange{kDefaultEpoch.first,
                                               YearMonth{std::chrono::year{2018}, std::chrono::month{1}}});
  EXPECT_NE(dataset_fingerprint(d), dataset_fingerprint(narrow));
}

TEST(Snapshot, JsonRoundTripIsExact) {
  const Dataset d = testing::ranking_dataset();
  const auto preds = table_predictions();
  TrustParams params;
  params.lambda = 900;
  const Snapshot s = build_snapshot(d, preds, params);
  EXPECT_EQ(s.assessments.size(), preds.size());
  const Snapshot back = snapshot_from_json(nlohmann::json::parse(to_json(s).dump()));
  EXPECT_EQ(back.dataset_fingerprint, s.dataset_fingerprint);
  EXPECT_EQ(back.params.lambda, 900);
  EXPECT_EQ(back.created_at, s.created_at);
  ASSERT_EQ(back.assessments.size(), s.assessments.size());
  for (const auto& [name, a] : s.assessments) {
    EXPECT_EQ(back.assessments.at(name).opinion, a.opinion);
    EXPECT_EQ(back.assessments.at(name).equivalent_vulns, a.equivalent_vulns);
  }
  EXPECT_EQ(back.opinions(), s.opinions());
  EXPECT_THROW(snapshot_from_json(nlohmann::json{{"created_at", 1}}), Error);
}

TEST(Snapshot, ReportIsDeterministic) {
  const Dataset d = testing::ranking_dataset();
  const auto preds = table_predictions();
  const auto r1 = assessment_report(build_snapshot(d, preds, {}));
  const auto r2 = assessment_report(build_snapshot(d, preds, {}));
  EXPECT_EQ(r1.dump(), r2.dump());
  ASSERT_EQ(r1["components"].size(), 10u);
  EXPECT_EQ(r1["components"][0]["component"], "chromium-browser");
  EXPECT_TRUE(r1["warnings"].empty());
}

TEST(DataDir, PersistsDatasetPredictionsAndSnapshots) {
  testing::TempDir tmp;
  const DataDir dir(tmp.path());
  EXPECT_FALSE(dir.has_dataset());
  EXPECT_FALSE(dir.load_current_snapshot().has_value());
  try {
    dir.load_dataset();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }

  const IngestResult ingested = ingest_csv(testing::fixture("ten_rows.csv"));
  dir.save_dataset(ingested.dataset, ingested.report);
  EXPECT_TRUE(dir.has_dataset());
  const Dataset loaded = dir.load_dataset();
  EXPECT_EQ(loaded.records(), ingested.dataset.records());
  EXPECT_EQ(dataset_fingerprint(loaded), dataset_fingerprint(ingested.dataset));
  const auto meta = nlohmann::json::parse(read_file(dir.dataset_meta()));
  EXPECT_EQ(meta["fingerprint"], dataset_fingerprint(loaded));

  const auto preds = table_predictions();
  dir.save_predictions(preds);
  const auto back = dir.load_predictions();
  ASSERT_EQ(back.size(), preds.size());

  const Snapshot first = build_snapshot(loaded, back, {});
  const auto p1 = dir.save_snapshot(first);
  const auto p2 = dir.save_snapshot(first);
  EXPECT_NE(p1, p2);
  const auto current = dir.load_current_snapshot();
  ASSERT_TRUE(current.has_value());
  EXPECT_EQ(current->dataset_fingerprint, first.dataset_fingerprint);
  EXPECT_EQ(read_file(tmp.path() / "CURRENT"), p2.filename().string() + "\n");
}

TEST(DataDir, FromEnvironment) {
  ::setenv(DataDir::kEnvVar, "/tmp/somewhere", 1);
  EXPECT_EQ(DataDir::from_environment().root(), "/tmp/somewhere");
  ::unsetenv(DataDir::kEnvVar);
  EXPECT_EQ(DataDir::from_environment().root(), "vtrust-data");
}

}  // namespace
}  // namespace vtrust
