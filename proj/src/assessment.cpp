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

#include "vtrust/assessment.hpp"

#include <algorithm>
#include <cmath>

#include "numfmt.hpp"
#include "vtrust/error.hpp"

namespace vtrust {

void TrustParams::validate() const {
  if (lambda < 1) throw Error(ErrorCode::InvalidArgument, "lambda must be >= 1");
  if (!(certainty_floor >= 0.0 && certainty_floor < certainty_ceiling &&
        certainty_ceiling <= 1.0))
    throw Error(ErrorCode::InvalidArgument,
                "certainty bounds must satisfy 0 <= floor < ceiling <= 1");
  if (top_group_size < 1)
    throw Error(ErrorCode::InvalidArgument, "top group size must be >= 1");
  if (reference_window.size() == 0)
    throw Error(ErrorCode::InvalidArgument, "reference window is empty");
  if (horizon_months < 1)
    throw Error(ErrorCode::InvalidArgument, "horizon must be >= 1 month");
  if (!(prior_margin >= 0.0 && prior_margin < 0.5))
    throw Error(ErrorCode::InvalidArgument, "prior margin must lie in [0, 0.5)");
  if (!std::isfinite(prior_slope) || !std::isfinite(prior_intercept))
    throw Error(ErrorCode::InvalidArgument, "prior scaling must be finite");
}

double component_trust(double pred, const TrustParams& params) {
  if (!(pred >= 0.0)) throw Error(ErrorCode::InvalidArgument, "prediction must be >= 0");
  const double lambda = params.lambda;
  return pred <= lambda ? 1.0 - pred / lambda : 0.0;
}

double certainty_from_error(double error, const TrustParams& params) {
  if (!(error >= 0.0)) throw Error(ErrorCode::InvalidArgument, "error must be >= 0");
  return std::clamp(1.0 - std::min(error, 1.0), params.certainty_floor,
                    params.certainty_ceiling);
}

double prior_from_group_mean(double mean_window_count, const TrustParams& params) {
  const double per_horizon = mean_window_count * params.horizon_months /
                             static_cast<double>(params.reference_window.size());
  const double f = component_trust(per_horizon, params);
  return std::clamp(params.prior_slope * f + params.prior_intercept, 0.0, 1.0);
}

PriorModel::PriorModel(const Dataset& dataset, const TrustParams& params) {
  params.validate();
  const auto window_counts = counts_in_window(dataset, params.reference_window);
  const auto count_in_window = [&](const std::string& name) {
    const auto it = window_counts.find(name);
    return it == window_counts.end() ? 0.0 : static_cast<double>(it->second);
  };

  // Group membership follows the all-time ranking, ties broken by name.
  std::vector<std::pair<std::string, std::size_t>> totals;
  for (const auto& name : dataset.components()) {
    totals.emplace_back(name, dataset.count_for(name));
    vulnerable_.insert(name);
  }
  std::stable_sort(totals.begin(), totals.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const std::size_t top = std::min(params.top_group_size, totals.size());

  double top_sum = 0.0;
  for (std::size_t i = 0; i < top; ++i) {
    top_group_.insert(totals[i].first);
    top_sum += count_in_window(totals[i].first);
  }
  if (top > 0)
    top_prior_ = prior_from_group_mean(top_sum / static_cast<double>(top), params);

  double all_sum = 0.0;
  for (const auto& [name, _] : totals) all_sum += count_in_window(name);
  if (!totals.empty())
    vulnerable_prior_ =
        prior_from_group_mean(all_sum / static_cast<double>(totals.size()), params);
}

double PriorModel::prior_for(std::string_view component) const {
  if (top_group_.contains(component)) return top_prior_;
  if (vulnerable_.contains(component)) return vulnerable_prior_;
  return 1.0;
}

double prior_for(std::string_view component, const Dataset& dataset,
                 const TrustParams& params) {
  return PriorModel(dataset, params).prior_for(component);
}

ComponentAssessment assess_component(const PredictionResult& prediction, double prior,
                                     const TrustParams& params) {
  params.validate();
  if (!(prediction.pred >= 0.0) || !(prediction.error_estimate >= 0.0))
    throw Error(ErrorCode::NegativePrediction,
                "negative prediction for '" + prediction.component + "'");
  const Opinion opinion = make_opinion(component_trust(prediction.pred, params),
                                       certainty_from_error(prediction.error_estimate, params),
                                       std::clamp(prior, params.prior_margin,
                                                  1.0 - params.prior_margin));
  const double e = expectation(opinion);
  return ComponentAssessment{prediction.component, opinion, e, (1.0 - e) * params.lambda};
}

ComponentAssessment assess_component(std::string_view component,
                                     const PredictionResult& prediction,
                                     const Dataset& dataset, const TrustParams& params) {
  PredictionResult p = prediction;
  p.component = std::string(component);
  return assess_component(p, prior_for(component, dataset, params), params);
}

ComponentAssessment assess_clean_component(std::string_view component,
                                           const TrustParams& params) {
  return assess_component(PredictionResult{std::string(component), 0.0, 0.0}, 1.0, params);
}

AssessmentBatch assess_components(std::span<const PredictionResult> predictions,
                                  const Dataset& dataset, const TrustParams& params) {
  const PriorModel priors(dataset, params);
  AssessmentBatch batch;
  double pred_sum = 0.0;
  for (const auto& p : predictions) {
    batch.assessments.push_back(assess_component(p, priors.prior_for(p.component), params));
    pred_sum += p.pred;
  }
  if (!(params.lambda > pred_sum))
    batch.warnings.push_back("lambda " + std::to_string(params.lambda) +
                             " does not exceed the sum of predictions " +
                             detail::format_number(pred_sum));
  return batch;
}

ComparisonReport compare_counts(double equivalent_a, double equivalent_b,
                                std::optional<double> actual_a,
                                std::optional<double> actual_b) {
  ComparisonReport report;
  report.equivalent_a = std::round(equivalent_a);
  report.equivalent_b = std::round(equivalent_b);
  if (report.equivalent_b == 0.0)
    throw Error(ErrorCode::DivisionByZero, "equivalent count of the second configuration is 0");
  report.ratio_equivalent = report.equivalent_a / report.equivalent_b;
  if (actual_a && actual_b) {
    if (*actual_b == 0.0)
      throw Error(ErrorCode::DivisionByZero, "actual count of the second configuration is 0");
    report.ratio_actual = *actual_a / *actual_b;
    if (*report.ratio_actual == 0.0)
      throw Error(ErrorCode::DivisionByZero, "actual ratio is 0");
    report.norm_error =
        std::abs(report.ratio_equivalent - *report.ratio_actual) / *report.ratio_actual;
  }
  return report;
}

ComparisonReport compare_configs(const SystemAssessment& a, const SystemAssessment& b,
                                 std::optional<double> actual_a,
                                 std::optional<double> actual_b) {
  return compare_counts(a.equivalent_vulns, b.equivalent_vulns, actual_a, actual_b);
}

}  // namespace vtrust
