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

#include "json.hpp"
#include "vtrust/assessment.hpp"
#include "vtrust/dataset.hpp"

namespace vtrust {

nlohmann::json to_json(const TrustParams& params);

/// Applies the keys present in `overrides` on top of `base`. Unknown keys
/// and ill-typed values throw SchemaError; the result is validated.
TrustParams params_from_json(const nlohmann::json& overrides, TrustParams base = {});

/// Report entry: t, c, f and expectation rounded to 3 decimals, equivalent
/// count rounded to an integer.
nlohmann::json report_entry(const ComponentAssessment& assessment);

/// System payload shared by the CLI and the HTTP API (same rounding as
/// report_entry plus the evaluated formula and simplification log).
nlohmann::json system_payload(const SystemAssessment& assessment);

nlohmann::json comparison_payload(const ComparisonReport& report);

nlohmann::json ingest_report_json(const IngestReport& report);

/// {"component", "bins": "month", "total", "series": [{"month", "count"}...]}
nlohmann::json history_json(const VulnSeries& series);

}  // namespace vtrust
