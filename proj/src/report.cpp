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

#include "vtrust/report.hpp"

#include <cmath>

#include "numfmt.hpp"
#include "vtrust/error.hpp"

namespace vtrust {

using nlohmann::json;
using detail::round_to;

json to_json(const TrustParams& p) {
  return json{{"lambda", p.lambda},
              {"certainty_floor", p.certainty_floor},
              {"certainty_ceiling", p.certainty_ceiling},
              {"prior_slope", p.prior_slope},
              {"prior_intercept", p.prior_intercept},
              {"top_group_size", p.top_group_size},
              {"reference_window",
               {{"start", format(p.reference_window.first)},
                {"end", format(p.reference_window.last)}}},
              {"horizon_months", p.horizon_months},
              {"prior_margin", p.prior_margin}};
}

TrustParams params_from_json(const json& overrides, TrustParams base) {
  if (overrides.is_null()) return base;
  if (!overrides.is_object()) throw Error(ErrorCode::SchemaError, "params must be an object");
  try {
    for (const auto& [key, value] : overrides.items()) {
      if (key == "lambda") {
        base.lambda = value.get<int>();
      } else if (key == "certainty_floor") {
        base.certainty_floor = value.get<double>();
      } else if (key == "certainty_ceiling") {
        base.certainty_ceiling = value.get<double>();
      } else if (key == "prior_slope") {
        base.prior_slope = value.get<double>();
      } else if (key == "prior_intercept") {
        base.prior_intercept = value.get<double>();
      } else if (key == "top_group_size") {
        base.top_group_size = value.get<std::size_t>();
      } else if (key == "horizon_months") {
        base.horizon_months = value.get<int>();
      } else if (key == "prior_margin") {
        base.prior_margin = value.get<double>();
      } else if (key == "reference_window") {
        base.reference_window = MonthRange{parse_year_month(value.at("start").get<std::string>()),
                                           parse_year_month(value.at("end").get<std::string>())};
      } else {
        throw Error(ErrorCode::SchemaError, "unknown parameter '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("invalid parameter value: ") + e.what());
  } catch (const ParseError& e) {
    throw Error(ErrorCode::SchemaError, e.what());
  }
  try {
    base.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::SchemaError, e.what());
  }
  return base;
}

json report_entry(const ComponentAssessment& a) {
  return json{{"component", a.component},
              {"t", round_to(a.opinion.t, 3)},
              {"c", round_to(a.opinion.c, 3)},
              {"f", round_to(a.opinion.f, 3)},
              {"expectation", round_to(a.expectation, 3)},
              {"equivalent_vulns", static_cast<long long>(std::llround(a.equivalent_vulns))}};
}

json system_payload(const SystemAssessment& a) {
  return json{{"system", a.system},
              {"t", round_to(a.opinion.t, 3)},
              {"c", round_to(a.opinion.c, 3)},
              {"f", round_to(a.opinion.f, 3)},
              {"expectation", round_to(a.expectation, 3)},
              {"equivalent_vulns", static_cast<long long>(std::llround(a.equivalent_vulns))},
              {"formula", a.evaluated_formula},
              {"simplification_log", a.simplification_log}};
}

json comparison_payload(const ComparisonReport& r) {
  json out{{"equivalent_a", r.equivalent_a},
           {"equivalent_b", r.equivalent_b},
           {"ratio_equivalent", round_to(r.ratio_equivalent, 3)},
           {"ratio_actual", nullptr},
           {"norm_error", nullptr}};
  if (r.ratio_actual) out["ratio_actual"] = round_to(*r.ratio_actual, 3);
  if (r.norm_error) out["norm_error"] = round_to(*r.norm_error, 3);
  return out;
}

json ingest_report_json(const IngestReport& r) {
  return json{{"rows_read", r.rows_read},
              {"records", r.records},
              {"duplicates_collapsed", r.duplicates_collapsed},
              {"skipped_undated", r.skipped_undated},
              {"skipped_out_of_epoch", r.skipped_out_of_epoch},
              {"undated_cves", r.undated_cves}};
}

json history_json(const VulnSeries& series) {
  json months = json::array();
  for (std::size_t j = 0; j < series.counts.size(); ++j)
    months.push_back({{"month", format(series.start + std::chrono::months{static_cast<int>(j)})},
                      {"count", series.counts[j]}});
  return json{{"component", series.component},
              {"bins", "month"},
              {"total", series.total()},
              {"series", std::move(months)}};
}

}  // namespace vtrust
