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

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "vtrust/assessment.hpp"
#include "vtrust/dataset.hpp"
#include "vtrust/formula.hpp"
#include "vtrust/prediction.hpp"

namespace vtrust {

/// One immutable assessment run: the inputs' identity, the parameters and
/// the per-component results.
struct Snapshot {
  std::string dataset_fingerprint;
  TrustParams params;
  std::vector<PredictionResult> predictions;
  std::map<std::string, ComponentAssessment, std::less<>> assessments;
  std::vector<std::string> warnings;
  std::string created_at;

  OpinionMap opinions() const;
};

/// SHA-256 (hex) over the epoch and the canonical CSV of the dataset.
std::string dataset_fingerprint(const Dataset& dataset);

Snapshot build_snapshot(const Dataset& dataset,
                        std::span<const PredictionResult> predictions,
                        const TrustParams& params);

/// Full-precision serialisation used for persistence.
nlohmann::json to_json(const Snapshot& snapshot);
Snapshot snapshot_from_json(const nlohmann::json& doc);

/// Assessment report: rounded component entries in name order, tagged with
/// the params and the dataset fingerprint. Deterministic for a given dataset and params.
nlohmann::json assessment_report(const Snapshot& snapshot);

/// File layout of a data directory:
///   dataset.csv, dataset.json     canonical records + epoch / ingest report
///   predictions.csv               component,pred,error
///   snapshots/<id>.json           immutable snapshots
///   CURRENT                       name of the current snapshot file
class DataDir {
 public:
  static constexpr const char* kEnvVar = "VTRUST_DATA_DIR";

  explicit DataDir(std::filesystem::path root);
  /// Uses `VTRUST_DATA_DIR`, falling back to ./vtrust-data.
  static DataDir from_environment();

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path dataset_csv() const { return root_ / "dataset.csv"; }
  std::filesystem::path dataset_meta() const { return root_ / "dataset.json"; }
  std::filesystem::path predictions_csv() const { return root_ / "predictions.csv"; }
  std::filesystem::path snapshots_dir() const { return root_ / "snapshots"; }

  void save_dataset(const Dataset& dataset, const IngestReport& report) const;
  bool has_dataset() const;
  Dataset load_dataset() const;

  void save_predictions(std::span<const PredictionResult> predictions) const;
  std::vector<PredictionResult> load_predictions() const;

  /// Writes a new snapshot file and makes it current. Returns its path.
  std::filesystem::path save_snapshot(const Snapshot& snapshot) const;
  std::optional<Snapshot> load_current_snapshot() const;

 private:
  std::filesystem::path root_;
};

/// Writes `content` to `path` through a temporary file and a rename, so
/// readers see either the old or the new file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace vtrust
