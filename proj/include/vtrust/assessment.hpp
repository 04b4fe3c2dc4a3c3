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
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vtrust/calendar.hpp"
#include "vtrust/dataset.hpp"
#include "vtrust/opinion.hpp"
#include "vtrust/prediction.hpp"

namespace vtrust {

/// Model tuning. Defaults: lambda = 4 trials/day * 30 days * 9 months,
/// certainty clamped to [0.100, 0.990], prior rescaled as 1.05 f - 0.05
/// from the 2015-2016 group averages of the 20 most vulnerable components.
struct TrustParams {
  int lambda = 1080;
  double certainty_floor = 0.100;
  double certainty_ceiling = 0.990;
  double prior_slope = 1.05;
  double prior_intercept = -0.05;
  std::size_t top_group_size = 20;
  MonthRange reference_window{YearMonth{std::chrono::year{2015}, std::chrono::month{1}},
                              YearMonth{std::chrono::year{2016}, std::chrono::month{12}}};
  /// Length of the prediction horizon the lambda trials span.
  int horizon_months = 9;
  /// Priors used in opinions are kept inside [margin, 1 - margin]: and_ct is
  /// undefined for two priors of exactly 1, or_ct for two priors of 0.
  double prior_margin = 1e-6;

  /// Throws InvalidArgument when an invariant is broken.
  void validate() const;
};

struct ComponentAssessment {
  std::string component;
  Opinion opinion;
  double expectation = 0.0;
  /// (1 - expectation) * lambda, unrounded.
  double equivalent_vulns = 0.0;
};

/// Assessment of a composed system (see composer.hpp).
struct SystemAssessment {
  std::string system;
  Opinion opinion;
  double expectation = 0.0;
  double equivalent_vulns = 0.0;
  /// Read-once formula that was evaluated, rendered as text.
  std::string evaluated_formula;
  std::vector<std::string> simplification_log;
};

/// 1 - pred/lambda, or 0 once pred exceeds lambda.
double component_trust(double pred, const TrustParams& params);

/// clamp(1 - min(e, 1), floor, ceiling)
double certainty_from_error(double error, const TrustParams& params);

/// Group-average pipeline: `mean_window_count` vulnerabilities per component
/// over the reference window are rescaled to the horizon, mapped through
/// 1 - x/lambda, then through slope*f + intercept and clamped to [0, 1].
double prior_from_group_mean(double mean_window_count, const TrustParams& params);

/// Priors derived from ecosystem-wide averages.
///
/// Components without any record get 1. The `top_group_size` components
/// with the most all-time records share the prior of their group's mean
/// reference-window count; every other vulnerable component gets the prior
/// of the mean over all components with at least one record.
class PriorModel {
 public:
  PriorModel(const Dataset& dataset, const TrustParams& params);

  double prior_for(std::string_view component) const;

  double top_group_prior() const { return top_prior_; }
  double vulnerable_group_prior() const { return vulnerable_prior_; }
  const std::set<std::string, std::less<>>& top_group() const { return top_group_; }

 private:
  std::set<std::string, std::less<>> top_group_;
  std::set<std::string, std::less<>> vulnerable_;
  double top_prior_ = 1.0;
  double vulnerable_prior_ = 1.0;
};

double prior_for(std::string_view component, const Dataset& dataset,
                 const TrustParams& params);

/// Opinion (t from pred, c from the error estimate, f = prior) with its
/// expectation and equivalent vulnerability count.
ComponentAssessment assess_component(const PredictionResult& prediction, double prior,
                                     const TrustParams& params);
ComponentAssessment assess_component(std::string_view component,
                                     const PredictionResult& prediction,
                                     const Dataset& dataset, const TrustParams& params);

/// Assessment of a component with no vulnerability history: zero
/// prediction with zero error, prior 1.
ComponentAssessment assess_clean_component(std::string_view component,
                                           const TrustParams& params);

struct AssessmentBatch {
  std::vector<ComponentAssessment> assessments;
  std::vector<std::string> warnings;
};

/// Assesses every prediction. Warns when lambda does not exceed the sum of
/// all predictions (the saturating branch of component_trust could fire).
AssessmentBatch assess_components(std::span<const PredictionResult> predictions,
                                  const Dataset& dataset, const TrustParams& params);

struct ComparisonReport {
  double equivalent_a = 0.0;
  double equivalent_b = 0.0;
  double ratio_equivalent = 0.0;
  std::optional<double> ratio_actual;
  std::optional<double> norm_error;
};

/// Compares two configurations by their reported (integer-rounded)
/// equivalent counts and, when given, their actual counts. Throws
/// DivisionByZero when a denominator is 0.
ComparisonReport compare_counts(double equivalent_a, double equivalent_b,
                                std::optional<double> actual_a = std::nullopt,
                                std::optional<double> actual_b = std::nullopt);
ComparisonReport compare_configs(const SystemAssessment& a, const SystemAssessment& b,
                                 std::optional<double> actual_a = std::nullopt,
                                 std::optional<double> actual_b = std::nullopt);

}  // namespace vtrust
