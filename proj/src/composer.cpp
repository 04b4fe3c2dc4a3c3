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

#include "vtrust/composer.hpp"

#include "numfmt.hpp"
#include "vtrust/error.hpp"

namespace vtrust {

SystemAssessment assess_system(const SystemSpec& spec, const OpinionMap& opinions,
                               const TrustParams& params) {
  params.validate();
  const auto missing = unknown_components(spec.formula, opinions);
  if (!missing.empty()) {
    std::string list;
    for (const auto& name : missing) list += (list.empty() ? "" : ", ") + name;
    throw Error(ErrorCode::MissingOpinion, "no assessment for component(s): " + list);
  }

  const ReadOnceResult read_once = to_read_once(spec.formula, &opinions);
  SystemAssessment out;
  out.system = spec.name;
  out.evaluated_formula = read_once.formula.to_string();
  if (read_once.rewritten)
    out.simplification_log.push_back("rewrote to read-once form: " + out.evaluated_formula);
  for (const auto& deletion : read_once.deletions)
    out.simplification_log.push_back(deletion.describe());

  out.opinion = evaluate(read_once.formula, opinions);
  out.expectation = expectation(out.opinion);
  out.equivalent_vulns = (1.0 - out.expectation) * params.lambda;
  return out;
}

FusedOpinion fuse_assessments(std::span<const WeightedOpinion> per_source) {
  if (per_source.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "fusing assessments needs at least two sources");
  return fuse(per_source);
}

std::vector<std::string> fuse_sources(OpinionMap& opinions, const SourceOpinions& sources,
                                      double local_weight) {
  std::vector<std::string> log;
  for (const auto& [component, extra] : sources) {
    if (extra.empty()) continue;
    const auto it = opinions.find(component);
    std::vector<WeightedOpinion> inputs;
    if (it != opinions.end()) inputs.push_back({it->second, local_weight});
    inputs.insert(inputs.end(), extra.begin(), extra.end());
    FusedOpinion fused;
    if (inputs.size() == 1) {
      fused = FusedOpinion{make_opinion(inputs.front().opinion.t, inputs.front().opinion.c,
                                        inputs.front().opinion.f),
                           0.0};
    } else {
      fused = fuse_assessments(inputs);
    }
    opinions.insert_or_assign(component, fused.opinion);
    log.push_back("fused " + component + " from " + std::to_string(inputs.size()) +
                  " sources (doc " + detail::format_number(detail::round_to(fused.doc, 6)) + ")");
  }
  return log;
}

}  // namespace vtrust
