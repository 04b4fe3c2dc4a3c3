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

#include "vtrust/opinion.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "vtrust/error.hpp"

namespace vtrust {

namespace {

// Below this the certainty of a result is cancellation noise around zero.
constexpr double kZeroCertainty = 1e-12;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

// Applies the "t = 0.5 when c = 0" convention and keeps results in [0,1]^3.
Opinion finish(double t, double c, double f) {
  c = clamp01(c);
  if (c < kZeroCertainty) return Opinion{0.5, 0.0, clamp01(f)};
  return Opinion{clamp01(t), c, clamp01(f)};
}

void require_valid(const Opinion& o, const char* what) {
  if (!is_valid(o))
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + ": opinion fields must lie in [0,1]");
}

}  // namespace

bool is_valid(const Opinion& o) noexcept {
  return in_unit(o.t) && in_unit(o.c) && in_unit(o.f);
}

Opinion make_opinion(double t, double c, double f) {
  Opinion o{t, c, f};
  require_valid(o, "make_opinion");
  return o;
}

double expectation(const Opinion& o) noexcept {
  return o.t * o.c + (1.0 - o.c) * o.f;
}

Opinion and_ct(const Opinion& a, const Opinion& b) {
  require_valid(a, "and_ct");
  require_valid(b, "and_ct");
  const double f = a.f * b.f;
  if (f == 1.0)
    throw Error(ErrorCode::UndefinedOperand, "and_ct undefined for f_a*f_b = 1");
  const double denom = 1.0 - f;

  const double c = a.c + b.c - a.c * b.c -
                   ((1.0 - a.c) * b.c * (1.0 - a.f) * b.t +
                    a.c * (1.0 - b.c) * (1.0 - b.f) * a.t) /
                       denom;
  if (clamp01(c) < kZeroCertainty) return finish(0.5, 0.0, f);

  const double t = (a.c * b.c * a.t * b.t +
                    (a.c * (1.0 - b.c) * (1.0 - a.f) * b.f * a.t +
                     (1.0 - a.c) * b.c * a.f * (1.0 - b.f) * b.t) /
                        denom) /
                   c;
  return finish(t, c, f);
}

Opinion or_ct(const Opinion& a, const Opinion& b) {
  require_valid(a, "or_ct");
  require_valid(b, "or_ct");
  const double f = a.f + b.f - a.f * b.f;
  if (f == 0.0)
    throw Error(ErrorCode::UndefinedOperand, "or_ct undefined for f_a = f_b = 0");

  const double c = a.c + b.c - a.c * b.c -
                   (a.c * (1.0 - b.c) * b.f * (1.0 - a.t) +
                    (1.0 - a.c) * b.c * a.f * (1.0 - b.t)) /
                       f;
  if (clamp01(c) < kZeroCertainty) return finish(0.5, 0.0, f);

  const double t = (a.c * a.t + b.c * b.t - a.c * b.c * a.t * b.t) / c;
  return finish(t, c, f);
}

double pairwise_doc(const WeightedOpinion& a, const WeightedOpinion& b) {
  if (!(a.weight >= 0.0) || !(b.weight >= 0.0) || a.weight + b.weight <= 0.0)
    throw Error(ErrorCode::InvalidWeights,
                "pairwise_doc needs non-negative weights with a positive sum");
  const double balance =
      1.0 - std::abs((a.weight - b.weight) / (a.weight + b.weight));
  return clamp01(std::abs(a.opinion.t - b.opinion.t) * a.opinion.c *
                 b.opinion.c * balance);
}

FusedOpinion fuse(std::span<const WeightedOpinion> inputs) {
  if (inputs.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "fuse needs at least two opinions");

  std::vector<WeightedOpinion> active;
  active.reserve(inputs.size());
  for (const auto& in : inputs) {
    require_valid(in.opinion, "fuse");
    if (!(in.weight >= 0.0) || !std::isfinite(in.weight))
      throw Error(ErrorCode::InvalidWeights, "fusion weights must be non-negative");
    if (in.weight > 0.0) active.push_back(in);
  }
  if (active.empty())
    throw Error(ErrorCode::InvalidWeights, "all fusion weights are zero");
  if (active.size() == 1) return FusedOpinion{active.front().opinion, 0.0};

  const std::size_t n = active.size();
  double doc_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      doc_sum += pairwise_doc(active[i], active[j]);
  const double doc = clamp01(doc_sum / (static_cast<double>(n * (n - 1)) / 2.0));

  double weight_sum = 0.0;
  double f_num = 0.0;
  for (const auto& in : active) {
    weight_sum += in.weight;
    f_num += in.weight * in.opinion.f;
  }
  const double f = f_num / weight_sum;

  const bool all_uncertain = std::all_of(active.begin(), active.end(),
      [](const WeightedOpinion& in) { return in.opinion.c == 0.0; });

  if (all_uncertain) return FusedOpinion{Opinion{0.5, 0.0, clamp01(f)}, doc};

  const auto certain_count = std::count_if(active.begin(), active.end(),
      [](const WeightedOpinion& in) { return in.opinion.c == 1.0; });
  if (certain_count > 0) {
    // Products over (1 - c_j) vanish for every input but the fully certain
    // ones, so the mixed case reduces to a weighted mean over those.
    double w = 0.0;
    double t_num = 0.0;
    for (const auto& in : active) {
      if (in.opinion.c != 1.0) continue;
      w += in.weight;
      t_num += in.weight * in.opinion.t;
    }
    return FusedOpinion{finish(t_num / w, 1.0 - doc, f), doc};
  }

  double t_num = 0.0;
  double c_num = 0.0;
  double c_den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double others = 1.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) others *= 1.0 - active[j].opinion.c;
    const auto& o = active[i].opinion;
    const double w = active[i].weight;
    t_num += o.c * o.t * w * others;
    c_num += o.c * w * others;
    c_den += w * others;
  }
  const double t = c_num > 0.0 ? t_num / c_num : 0.5;
  const double c = (c_num / c_den) * (1.0 - doc);
  return FusedOpinion{finish(t, c, f), doc};
}

}  // namespace vtrust
