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

#include "vtrust/prediction.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "numfmt.hpp"
#include "vtrust/error.hpp"

namespace vtrust {

namespace {

struct Windows {
  int train_months;   // months start..train_end
  int validation_end; // index of last validation month
};

Windows locate(const VulnSeries& series, const SplitSpec& split) {
  split.validate();
  const int m = months_between(series.start, split.train_end) + 1;
  if (m <= 0 || series.counts.empty())
    throw Error(ErrorCode::EmptyHistory,
                "training window for '" + series.component + "' is empty");
  const int validation_end = m - 1 + split.validation_months;
  if (validation_end >= static_cast<int>(series.counts.size()))
    throw Error(ErrorCode::WindowOutOfRange,
                "validation window for '" + series.component +
                    "' extends past the end of its history");
  return {m, validation_end};
}

double parse_real(std::string_view text, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value))
    throw ParseError("invalid number '" + std::string(text) + "'", line);
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

}  // namespace

void SplitSpec::validate() const {
  if (validation_months < 1 || horizon_months < 1)
    throw Error(ErrorCode::InvalidArgument,
                "validation and horizon lengths must be at least one month");
  if (!train_end.ok()) throw Error(ErrorCode::InvalidArgument, "invalid train_end");
}

MonthRange SplitSpec::validation_window() const {
  return {train_end + std::chrono::months{1},
          train_end + std::chrono::months{validation_months}};
}

MonthRange SplitSpec::test_window() const {
  return {train_end + std::chrono::months{validation_months + 1},
          train_end + std::chrono::months{validation_months + horizon_months}};
}

std::string backend_name(const PredictorBackend& backend) {
  struct Namer {
    std::string operator()(const AverageBackend&) const { return "average"; }
    std::string operator()(const EwmaBackend&) const { return "ewma"; }
    std::string operator()(const ExternalBackend&) const { return "external"; }
  };
  return std::visit(Namer{}, backend);
}

double validation_error(const VulnSeries& series, const SplitSpec& split,
                        double predicted_validation) {
  const auto [m, validation_end] = locate(series, split);
  const int k = split.validation_months;

  double actual = 0.0;
  for (int j = m; j <= validation_end; ++j) actual += series.counts[static_cast<std::size_t>(j)];

  // Sliding k-month sums over counts[0..validation_end].
  long window = 0;
  long lo = 0;
  long hi = 0;
  for (int j = 0; j <= validation_end; ++j) {
    window += series.counts[static_cast<std::size_t>(j)];
    if (j >= k) window -= series.counts[static_cast<std::size_t>(j - k)];
    if (j == k - 1) {
      lo = hi = window;
    } else if (j >= k) {
      lo = std::min(lo, window);
      hi = std::max(hi, window);
    }
  }
  const double range = static_cast<double>(hi - lo);
  const double diff = std::abs(predicted_validation - actual);
  return range > 1.0 ? diff / range : diff;
}

PredictionResult predict_average(const VulnSeries& series, const SplitSpec& split) {
  const auto [m, _] = locate(series, split);
  double sum = 0.0;
  for (int j = 0; j < m; ++j) sum += series.counts[static_cast<std::size_t>(j)];
  const double mean = sum / m;
  return PredictionResult{
      series.component, mean * split.horizon_months,
      validation_error(series, split, mean * split.validation_months)};
}

PredictionResult predict_ewma(const VulnSeries& series, const SplitSpec& split,
                              double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw Error(ErrorCode::InvalidAlpha, "ewma alpha must lie in (0, 1]");
  const auto [m, _] = locate(series, split);
  double weighted = 0.0;
  double weights = 0.0;
  double w = 1.0;
  for (int j = m - 1; j >= 0; --j) {
    weighted += w * series.counts[static_cast<std::size_t>(j)];
    weights += w;
    w *= 1.0 - alpha;
    if (w == 0.0) break;
  }
  const double mean = weighted / weights;
  return PredictionResult{
      series.component, mean * split.horizon_months,
      validation_error(series, split, mean * split.validation_months)};
}

std::map<std::string, PredictionResult, std::less<>> import_external(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "component,pred,error")
    throw ParseError("header must be exactly 'component,pred,error'", 1);
  std::map<std::string, PredictionResult, std::less<>> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = trim(line);
    if (row.empty()) continue;
    const auto c1 = row.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : row.find(',', c1 + 1);
    if (c2 == std::string_view::npos || row.find(',', c2 + 1) != std::string_view::npos)
      throw ParseError("expected 3 fields", line_no);
    const auto name = trim(row.substr(0, c1));
    if (name.empty()) throw ParseError("empty component", line_no);
    const double pred = parse_real(trim(row.substr(c1 + 1, c2 - c1 - 1)), line_no);
    const double err = parse_real(trim(row.substr(c2 + 1)), line_no);
    if (pred < 0.0 || err < 0.0)
      throw Error(ErrorCode::NegativePrediction,
                  "line " + std::to_string(line_no) + ": negative prediction or error for '" +
                      std::string(name) + "'");
    if (out.contains(name))
      throw ParseError("duplicate component '" + std::string(name) + "'", line_no);
    out.emplace(std::string(name), PredictionResult{std::string(name), pred, err});
  }
  return out;
}

std::map<std::string, PredictionResult, std::less<>> import_external(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return import_external(in);
}

double rmse(std::span<const std::pair<double, double>> results) {
  if (results.empty()) throw Error(ErrorCode::EmptyInput, "rmse of an empty list");
  double sq = 0.0;
  for (const auto& [pred, actual] : results) sq += (pred - actual) * (pred - actual);
  return std::sqrt(sq / static_cast<double>(results.size()));
}

PredictionResult predict(const VulnSeries& series, const SplitSpec& split,
                         const PredictorBackend& backend) {
  if (std::holds_alternative<AverageBackend>(backend))
    return predict_average(series, split);
  if (const auto* ewma = std::get_if<EwmaBackend>(&backend))
    return predict_ewma(series, split, ewma->alpha);
  const auto& ext = std::get<ExternalBackend>(backend).predictions;
  const auto it = ext.find(series.component);
  if (it == ext.end())
    throw Error(ErrorCode::UnknownComponent,
                "external predictions do not cover '" + series.component + "'");
  return it->second;
}

std::vector<PredictionResult> predict_all(const Dataset& dataset,
                                          const PredictorBackend& backend,
                                          const SplitSpec& split) {
  std::vector<PredictionResult> out;
  if (const auto* ext = std::get_if<ExternalBackend>(&backend)) {
    for (const auto& [_, p] : ext->predictions) out.push_back(p);
    return out;
  }
  for (const auto& name : dataset.components())
    out.push_back(predict(bin_monthly(dataset, name), split, backend));
  return out;
}

std::vector<BacktestRow> backtest(const Dataset& dataset,
                                  std::span<const PredictorBackend> backends,
                                  const SplitSpec& split, std::size_t min_total) {
  split.validate();
  const auto test = split.test_window();
  if (!dataset.epoch().contains(test.first) || !dataset.epoch().contains(test.last))
    throw Error(ErrorCode::WindowOutOfRange, "test window " + format(test.first) + ".." +
                                                 format(test.last) + " is outside the dataset");

  std::vector<VulnSeries> scored;
  for (const auto& name : dataset.components())
    if (dataset.count_for(name) > min_total) scored.push_back(bin_monthly(dataset, name));

  std::vector<BacktestRow> rows;
  for (const auto& backend : backends) {
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(scored.size());
    for (const auto& series : scored)
      pairs.emplace_back(predict(series, split, backend).pred, series.sum(test));
    rows.push_back({backend_name(backend), pairs.empty() ? 0.0 : rmse(pairs), pairs.size()});
  }
  return rows;
}

void write_predictions_csv(std::span<const PredictionResult> predictions,
                           std::ostream& out) {
  out << "component,pred,error\n";
  for (const auto& p : predictions)
    out << p.component << ',' << detail::format_number(p.pred) << ','
        << detail::format_number(p.error_estimate) << '\n';
}

void write_backtest_csv(std::span<const BacktestRow> rows, std::ostream& out) {
  out << "backend,rmse,components_scored\n";
  for (const auto& r : rows)
    out << r.backend << ',' << detail::format_number(r.rmse) << ',' << r.components_scored
        << '\n';
}

}  // namespace vtrust
