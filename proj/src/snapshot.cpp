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

#include "vtrust/snapshot.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "vtrust/error.hpp"
#include "vtrust/report.hpp"

namespace vtrust {

using nlohmann::json;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::IoError, "SHA-256 computation failed");
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

json opinion_json(const Opinion& o) { return json{{"t", o.t}, {"c", o.c}, {"f", o.f}}; }

Opinion opinion_from(const json& j) {
  return make_opinion(j.at("t").get<double>(), j.at("c").get<double>(), j.at("f").get<double>());
}

}  // namespace

OpinionMap Snapshot::opinions() const {
  OpinionMap out;
  for (const auto& [name, a] : assessments) out.emplace(name, a.opinion);
  return out;
}

std::string dataset_fingerprint(const Dataset& dataset) {
  std::ostringstream canonical;
  canonical << "epoch," << format(dataset.epoch().first) << ',' << format(dataset.epoch().last)
            << '\n';
  write_csv(dataset, canonical);
  return sha256_hex(canonical.str());
}

Snapshot build_snapshot(const Dataset& dataset,
                        std::span<const PredictionResult> predictions,
                        const TrustParams& params) {
  Snapshot snap;
  snap.dataset_fingerprint = dataset_fingerprint(dataset);
  snap.params = params;
  snap.predictions.assign(predictions.begin(), predictions.end());
  auto batch = assess_components(predictions, dataset, params);
  for (auto& a : batch.assessments) snap.assessments.insert_or_assign(a.component, std::move(a));
  snap.warnings = std::move(batch.warnings);
  snap.created_at = utc_now();
  return snap;
}

json to_json(const Snapshot& s) {
  json predictions = json::array();
  for (const auto& p : s.predictions)
    predictions.push_back({{"component", p.component}, {"pred", p.pred}, {"error", p.error_estimate}});
  json assessments = json::array();
  for (const auto& [_, a] : s.assessments)
    assessments.push_back({{"component", a.component},
                           {"opinion", opinion_json(a.opinion)},
                           {"expectation", a.expectation},
                           {"equivalent_vulns", a.equivalent_vulns}});
  return json{{"dataset_fingerprint", s.dataset_fingerprint},
              {"created_at", s.created_at},
              {"params", to_json(s.params)},
              {"predictions", std::move(predictions)},
              {"assessments", std::move(assessments)},
              {"warnings", s.warnings}};
}

Snapshot snapshot_from_json(const json& doc) {
  try {
    Snapshot s;
    s.dataset_fingerprint = doc.at("dataset_fingerprint").get<std::string>();
    s.created_at = doc.at("created_at").get<std::string>();
    s.params = params_from_json(doc.at("params"));
    for (const auto& p : doc.at("predictions"))
      s.predictions.push_back({p.at("component").get<std::string>(), p.at("pred").get<double>(),
                               p.at("error").get<double>()});
    for (const auto& a : doc.at("assessments")) {
      ComponentAssessment ca{a.at("component").get<std::string>(), opinion_from(a.at("opinion")),
                             a.at("expectation").get<double>(),
                             a.at("equivalent_vulns").get<double>()};
      s.assessments.insert_or_assign(ca.component, std::move(ca));
    }
    s.warnings = doc.value("warnings", std::vector<std::string>{});
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("snapshot: ") + e.what());
  }
}

json assessment_report(const Snapshot& s) {
  json components = json::array();
  for (const auto& [_, a] : s.assessments) components.push_back(report_entry(a));
  return json{{"params", to_json(s.params)},
              {"dataset_fingerprint", s.dataset_fingerprint},
              {"components", std::move(components)},
              {"warnings", s.warnings}};
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot replace " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

DataDir::DataDir(std::filesystem::path root) : root_(std::move(root)) {}

DataDir DataDir::from_environment() {
  const char* env = std::getenv(kEnvVar);
  return DataDir(env && *env ? std::filesystem::path(env) : std::filesystem::path("vtrust-data"));
}

void DataDir::save_dataset(const Dataset& dataset, const IngestReport& report) const {
  std::ostringstream csv;
  write_csv(dataset, csv);
  write_file_atomic(dataset_csv(), csv.str());
  json meta{{"epoch", {{"start", format(dataset.epoch().first)}, {"end", format(dataset.epoch().last)}}},
            {"fingerprint", dataset_fingerprint(dataset)},
            {"ingest_report", ingest_report_json(report)}};
  write_file_atomic(dataset_meta(), meta.dump(2) + "\n");
}

bool DataDir::has_dataset() const {
  return std::filesystem::exists(dataset_csv()) && std::filesystem::exists(dataset_meta());
}

Dataset DataDir::load_dataset() const {
  if (!has_dataset())
    throw Error(ErrorCode::IoError, "no dataset in " + root_.string() + " (run ingest first)");
  json meta;
  try {
    meta = json::parse(read_file(dataset_meta()));
  } catch (const json::exception& e) {
    throw ParseError(std::string("dataset.json: ") + e.what());
  }
  IngestOptions options;
  try {
    options.epoch = MonthRange{parse_year_month(meta.at("epoch").at("start").get<std::string>()),
                               parse_year_month(meta.at("epoch").at("end").get<std::string>())};
  } catch (const json::exception& e) {
    throw ParseError(std::string("dataset.json: ") + e.what());
  }
  return ingest_csv(dataset_csv(), options).dataset;
}

void DataDir::save_predictions(std::span<const PredictionResult> predictions) const {
  std::ostringstream csv;
  write_predictions_csv(predictions, csv);
  write_file_atomic(predictions_csv(), csv.str());
}

std::vector<PredictionResult> DataDir::load_predictions() const {
  if (!std::filesystem::exists(predictions_csv()))
    throw Error(ErrorCode::IoError, "no predictions in " + root_.string() + " (run predict first)");
  std::vector<PredictionResult> out;
  for (auto& [_, p] : import_external(predictions_csv())) out.push_back(std::move(p));
  return out;
}

std::filesystem::path DataDir::save_snapshot(const Snapshot& snapshot) const {
  std::filesystem::create_directories(snapshots_dir());
  std::string stamp = snapshot.created_at;
  std::erase_if(stamp, [](char ch) { return ch == ':' || ch == '-'; });
  const std::string base = stamp + "-" + snapshot.dataset_fingerprint.substr(0, 12);
  std::filesystem::path file = snapshots_dir() / (base + ".json");
  for (int n = 1; std::filesystem::exists(file); ++n)
    file = snapshots_dir() / (base + "-" + std::to_string(n) + ".json");
  write_file_atomic(file, to_json(snapshot).dump(2) + "\n");
  write_file_atomic(root_ / "CURRENT", file.filename().string() + "\n");
  return file;
}

std::optional<Snapshot> DataDir::load_current_snapshot() const {
  const auto pointer = root_ / "CURRENT";
  if (!std::filesystem::exists(pointer)) return std::nullopt;
  std::string name = read_file(pointer);
  while (!name.empty() && (name.back() == '\n' || name.back() == '\r')) name.pop_back();
  try {
    return snapshot_from_json(json::parse(read_file(snapshots_dir() / name)));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("snapshot ") + name + ": " + e.what());
  }
}

}  // namespace vtrust
