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

#include <map>
#include <span>
#include <string>
#include <vector>

#include "vtrust/assessment.hpp"
#include "vtrust/formula.hpp"
#include "vtrust/opinion.hpp"

namespace vtrust {

/// Opinions about the same components from other sources, keyed by
/// component.
using SourceOpinions = std::map<std::string, std::vector<WeightedOpinion>, std::less<>>;

/// Normalises the system formula to read-once form, evaluates it over the
/// component opinions and derives the expectation and equivalent count.
/// Throws MissingOpinion naming every atom without an opinion.
SystemAssessment assess_system(const SystemSpec& spec, const OpinionMap& opinions,
                               const TrustParams& params);

/// Combines assessments of one component from >= 2 sources.
FusedOpinion fuse_assessments(std::span<const WeightedOpinion> per_source);

/// Replaces each opinion in `opinions` that has extra sources by the fusion
/// of the local opinion (weight `local_weight`) with those sources. Returns
/// one log line per fused component, including its degree of conflict.
std::vector<std::string> fuse_sources(OpinionMap& opinions, const SourceOpinions& sources,
                                      double local_weight = 1.0);

}  // namespace vtrust
