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

#include <span>

namespace vtrust {

/// An uncertain probability (t, c, f): trust value, certainty and prior.
/// All three lie in [0, 1].
struct Opinion {
  double t = 0.5;
  double c = 0.0;
  double f = 0.5;

  friend bool operator==(const Opinion&, const Opinion&) = default;
};

struct WeightedOpinion {
  Opinion opinion;
  double weight = 1.0;
};

/// Result of conflict-aware fusion: the fused opinion plus its degree of
/// conflict. doc == 1 implies opinion.c == 0.
struct FusedOpinion {
  Opinion opinion;
  double doc = 0.0;
};

bool is_valid(const Opinion& o) noexcept;

/// Builds an opinion, throwing InvalidArgument when a field is outside [0,1].
Opinion make_opinion(double t, double c, double f);

/// E = t*c + (1 - c)*f
double expectation(const Opinion& o) noexcept;

/// CertainLogic conjunction of opinions about independent propositions.
/// Throws UndefinedOperand when f_a * f_b == 1.
Opinion and_ct(const Opinion& a, const Opinion& b);

/// CertainLogic disjunction of opinions about independent propositions.
/// Throws UndefinedOperand when f_a == f_b == 0.
Opinion or_ct(const Opinion& a, const Opinion& b);

/// Degree of conflict between two weighted opinions about the same
/// proposition. Throws InvalidWeights when both weights are zero.
double pairwise_doc(const WeightedOpinion& a, const WeightedOpinion& b);

/// Conflict-aware weighted fusion of n >= 2 opinions about one proposition.
///
/// Inputs with weight 0 carry no preference and are ignored. The certainty
/// is scaled by (1 - DoC), DoC being the mean pairwise conflict. The
/// operator is commutative and idempotent but not associative.
FusedOpinion fuse(std::span<const WeightedOpinion> inputs);

}  // namespace vtrust
