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

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vtrust/calendar.hpp"
#include "vtrust/dataset.hpp"

namespace vtrust {

/// Timeline partition: training up to and including `train_end`, then
/// `validation_months` of validation, then `horizon_months` of test /
/// prediction horizon.
struct SplitSpec {
  YearMonth train_end;
  int validation_months = 9;
  int horizon_months = 9;

  void validate() const;
  MonthRange validation_window() const;
  MonthRange test_window() const;
};

/// Predicted count over the horizon plus a normalised validation error.
struct PredictionResult {
  std::string component;
  double pred = 0.0;
  double error_estimate = 0.0;
};

struct AverageBackend {};

struct EwmaBackend {
  double alpha = 0.1;
};

/// Predictions produced elsewhere (e.g. a recurrent network), keyed by
/// component.
struct ExternalBackend {
  std::map<std::string, PredictionResult, std::less<>> predictions;
};

using PredictorBackend = std::variant<AverageBackend, EwmaBackend, ExternalBackend>;

std::string backend_name(const PredictorBackend& backend);

/// Mean monthly count over the training window, times the horizon.
PredictionResult predict_average(const VulnSeries& series, const SplitSpec& split);

/// Exponentially weighted mean (the most recent training month has weight 1,
/// each older month a further factor 1 - alpha), times the horizon.
PredictionResult predict_ewma(const VulnSeries& series, const SplitSpec& split,
                              double alpha);

/// Reads a `component,pred,error` CSV. Throws ParseError or
/// NegativePrediction.
std::map<std::string, PredictionResult, std::less<>> import_external(std::istream& in);
std::map<std::string, PredictionResult, std::less<>> import_external(
    const std::filesystem::path& path);

/// Normalised error of an aggregate prediction for the validation window.
///
/// The actual value is the validation-window total; the normaliser is the
/// range of sliding validation-length sums over the history available up to
/// the end of the validation window. Ranges <= 1 fall back to the absolute
/// error.
double validation_error(const VulnSeries& series, const SplitSpec& split,
                        double predicted_validation);

/// Root mean squared error of (pred, actual) pairs. Throws EmptyInput.
double rmse(std::span<const std::pair<double, double>> results);

/// Runs one backend for one component.
PredictionResult predict(const VulnSeries& series, const SplitSpec& split,
                         const PredictorBackend& backend);

/// Runs one backend for every component of the dataset (external backends:
/// every component of the predictions file).
std::vector<PredictionResult> predict_all(const Dataset& dataset,
                                          const PredictorBackend& backend,
                                          const SplitSpec& split);

struct BacktestRow {
  std::string backend;
  double rmse = 0.0;
  std::size_t components_scored = 0;
};

/// Scores each backend's horizon prediction against the actual test-window
/// totals of every component with more than `min_total` records.
std::vector<BacktestRow> backtest(const Dataset& dataset,
                                  std::span<const PredictorBackend> backends,
                                  const SplitSpec& split, std::size_t min_total = 10);

void write_predictions_csv(std::span<const PredictionResult> predictions,
                           std::ostream& out);
void write_backtest_csv(std::span<const BacktestRow> rows, std::ostream& out);

}  // namespace vtrust
