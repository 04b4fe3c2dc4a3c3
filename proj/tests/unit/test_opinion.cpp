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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "vtrust/error.hpp"
#include "vtrust/opinion.hpp"

namespace vtrust {
namespace {

constexpr double kLaw = 1e-9;

// Reference values below were computed with an independent Python
// transcription of the operator tables (exact rational arithmetic where the
// inputs allow it).

Opinion random_opinion(std::mt19937_64& rng, double corner_probability = 0.1) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution corner(corner_probability);
  auto value = [&] { return corner(rng) ? (unit(rng) < 0.5 ? 0.0 : 1.0) : unit(rng); };
  return Opinion{value(), value(), value()};
}

void expect_close(const Opinion& a, const Opinion& b, double tol) {
  EXPECT_NEAR(a.c, b.c, tol);
  EXPECT_NEAR(a.f, b.f, tol);
  EXPECT_NEAR(expectation(a), expectation(b), tol);
  // t is not determined as c approaches 0.
  if (a.c >= 1e-6 && b.c >= 1e-6) EXPECT_NEAR(a.t, b.t, tol);
}

TEST(Expectation, ReferenceRows) {
  EXPECT_NEAR(expectation({0.968, 0.966, 0.974}), 0.968, 5e-4);
  EXPECT_NEAR(expectation({0.950, 0.920, 0.974}), 0.952, 5e-4);
  EXPECT_DOUBLE_EQ(expectation({0.3, 0.0, 0.7}), 0.7);
}

TEST(Expectation, BoundaryAndMonotone) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double t = unit(rng), c = unit(rng), f = unit(rng), dt = unit(rng) * (1 - t);
    EXPECT_LE(expectation({t, c, f}), expectation({t + dt, c, f}) + 1e-12);
    EXPECT_NEAR(expectation({t, 0.0, f}), f, 1e-12);
    EXPECT_NEAR(expectation({t, 1.0, f}), t, 1e-12);
    const double e = expectation({t, c, f});
    EXPECT_GE(e, 0.0);
    EXPECT_LE(e, 1.0);
  }
}

TEST(MakeOpinion, RejectsOutOfRange) {
  EXPECT_THROW(make_opinion(1.1, 0.5, 0.5), Error);
  EXPECT_THROW(make_opinion(0.5, -0.1, 0.5), Error);
  EXPECT_THROW(make_opinion(0.5, 0.5, std::nan("")), Error);
  EXPECT_NO_THROW(make_opinion(0.0, 1.0, 1.0));
}

TEST(AndCt, TableExample) {
  // (0.6,0.5,0.4) AND (1,1,0.9): evaluated from the operator table.
  const Opinion r = and_ct({0.6, 0.5, 0.4}, {1.0, 1.0, 0.9});
  EXPECT_NEAR(r.t, 0.6235294117647059, 1e-12);
  EXPECT_NEAR(r.c, 0.53125, 1e-12);
  EXPECT_NEAR(r.f, 0.36, 1e-12);
  // E is multiplicative: E_a = 0.5, E_b = 1.
  EXPECT_NEAR(expectation(r), 0.5, 1e-12);
}

TEST(AndCt, FullCertaintyIsProbabilisticConjunction) {
  const Opinion r = and_ct({0.7, 1.0, 0.2}, {0.4, 1.0, 0.9});
  EXPECT_NEAR(r.t, 0.28, 1e-12);
  EXPECT_NEAR(r.c, 1.0, 1e-12);
  EXPECT_NEAR(r.f, 0.18, 1e-12);
}

TEST(AndCt, LinuxFirefox) {
  const Opinion a{0.968, 0.966, 0.974}, b{0.950, 0.920, 0.974};
  const Opinion r = and_ct(a, b);
  EXPECT_NEAR(r.t, 0.9200596852044511, 1e-12);
  EXPECT_NEAR(r.c, 0.9443301317122594, 1e-12);
  EXPECT_NEAR(r.f, 0.948676, 1e-12);
  // All-must-hold score of two independent components.
  EXPECT_NEAR(expectation(r), expectation(a) * expectation(b), 1e-12);
}

TEST(AndCt, MonteCarloAtFullCertainty) {
  std::mt19937_64 rng(7);
  std::bernoulli_distribution a(0.8), b(0.35);
  const int n = 200000;
  int both = 0;
  for (int i = 0; i < n; ++i) both += (a(rng) && b(rng)) ? 1 : 0;
  const double p = and_ct({0.8, 1, 0.5}, {0.35, 1, 0.5}).t;
  const double sigma = std::sqrt(p * (1 - p) / n);
  EXPECT_NEAR(static_cast<double>(both) / n, p, 3 * sigma);
}

TEST(AndCt, UndefinedWhenBothPriorsAreOne) {
  EXPECT_THROW(and_ct({0.5, 0.5, 1.0}, {0.5, 0.5, 1.0}), Error);
  try {
    and_ct({0.5, 0.5, 1.0}, {0.1, 0.2, 1.0});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UndefinedOperand);
  }
  EXPECT_NO_THROW(and_ct({0.5, 0.5, 1.0}, {0.5, 0.5, 0.999999}));
}

TEST(OrCt, TableExample) {
  const Opinion r = or_ct({0.8, 0.7, 0.6}, {0.4, 0.3, 0.2});
  EXPECT_NEAR(r.t, 0.8588293487221762, 1e-12);
  EXPECT_NEAR(r.c, 0.713529411764706, 1e-12);
  EXPECT_NEAR(r.f, 0.68, 1e-12);
  const double ea = expectation({0.8, 0.7, 0.6}), eb = expectation({0.4, 0.3, 0.2});
  EXPECT_NEAR(expectation(r), ea + eb - ea * eb, 1e-12);
}

TEST(OrCt, FullCertainty) {
  const Opinion r = or_ct({0.7, 1.0, 0.2}, {0.4, 1.0, 0.9});
  EXPECT_NEAR(r.t, 0.82, 1e-12);
  EXPECT_NEAR(r.c, 1.0, 1e-12);
  const Opinion z = or_ct({0.0, 1.0, 0.5}, {0.0, 1.0, 0.5});
  EXPECT_NEAR(z.t, 0.0, 1e-12);
  EXPECT_NEAR(z.c, 1.0, 1e-12);
  EXPECT_NEAR(z.f, 0.75, 1e-12);
}

TEST(OrCt, UndefinedOnlyWhenBothPriorsAreZero) {
  EXPECT_THROW(or_ct({0.5, 0.5, 0.0}, {0.3, 0.1, 0.0}), Error);
  EXPECT_NO_THROW(or_ct({0.5, 0.5, 0.0}, {0.3, 0.1, 0.4}));
}

TEST(Operators, ZeroCertaintyGivesSentinelTrust) {
  const Opinion r = and_ct({0.9, 0.0, 0.5}, {0.2, 0.0, 0.5});
  EXPECT_EQ(r.c, 0.0);
  EXPECT_EQ(r.t, 0.5);
  const Opinion s = or_ct({0.9, 0.0, 0.5}, {0.2, 0.0, 0.5});
  EXPECT_EQ(s.c, 0.0);
  EXPECT_EQ(s.t, 0.5);
}

TEST(Operators, BinaryTruthTables) {
  for (int a = 0; a <= 1; ++a)
    for (int b = 0; b <= 1; ++b) {
      const Opinion x{double(a), 1, 0.5}, y{double(b), 1, 0.5};
      EXPECT_NEAR(and_ct(x, y).t, double(a && b), 1e-12);
      EXPECT_NEAR(or_ct(x, y).t, double(a || b), 1e-12);
    }
}

TEST(OperatorLaws, CommutativeAssociativeClosed) {
  std::mt19937_64 rng(20240601);
  int checked = 0;
  for (int i = 0; i < 5000; ++i) {
    const Opinion a = random_opinion(rng), b = random_opinion(rng), c = random_opinion(rng);
    for (auto op : {&and_ct, &or_ct}) {
      Opinion ab, ba, left, right;
      try {
        ab = op(a, b);
        ba = op(b, a);
        left = op(op(a, b), c);
        right = op(a, op(b, c));
      } catch (const Error& e) {
        ASSERT_EQ(e.code(), ErrorCode::UndefinedOperand);
        continue;
      }
      ++checked;
      expect_close(ab, ba, kLaw);
      expect_close(left, right, kLaw);
      for (const Opinion& r : {ab, left, right}) ASSERT_TRUE(is_valid(r));
    }
  }
  EXPECT_GT(checked, 9000);
}

TEST(OperatorLaws, FullCertaintyReduction) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double ta = unit(rng), tb = unit(rng);
    const Opinion a{ta, 1.0, unit(rng) * 0.99}, b{tb, 1.0, unit(rng) * 0.99 + 0.005};
    EXPECT_NEAR(and_ct(a, b).t, ta * tb, 1e-12);
    EXPECT_NEAR(or_ct(a, b).t, ta + tb - ta * tb, 1e-12);
  }
}

TEST(PairwiseDoc, Examples) {
  EXPECT_DOUBLE_EQ(pairwise_doc({{1, 1, 0.5}, 1}, {{0, 1, 0.5}, 1}), 1.0);
  EXPECT_DOUBLE_EQ(pairwise_doc({{1, 0, 0.5}, 1}, {{0, 0.7, 0.5}, 3}), 0.0);
  EXPECT_NEAR(pairwise_doc({{0.9, 0.8, 0.5}, 2}, {{0.1, 0.5, 0.5}, 1}), 0.2133333333333334, 1e-12);
  EXPECT_THROW(pairwise_doc({{0.9, 0.8, 0.5}, 0}, {{0.1, 0.5, 0.5}, 0}), Error);
}

TEST(Fuse, Examples) {
  const Opinion o{0.7, 0.6, 0.3};
  const std::vector<WeightedOpinion> same{{o, 2}, {o, 2}};
  const FusedOpinion r = fuse(same);
  EXPECT_NEAR(r.opinion.t, o.t, 1e-12);
  EXPECT_NEAR(r.opinion.c, o.c, 1e-12);
  EXPECT_NEAR(r.opinion.f, o.f, 1e-12);
  EXPECT_EQ(r.doc, 0.0);

  const std::vector<WeightedOpinion> conflict{{{1, 1, 0.5}, 1}, {{0, 1, 0.5}, 1}};
  const FusedOpinion total = fuse(conflict);
  EXPECT_EQ(total.doc, 1.0);
  EXPECT_EQ(total.opinion.c, 0.0);
  EXPECT_EQ(total.opinion.t, 0.5);
  EXPECT_EQ(total.opinion.f, 0.5);

  // Mixed case: the uncertain operand does not move t.
  const std::vector<WeightedOpinion> mixed{{{0.2, 0.0, 0.3}, 1}, {{0.7, 0.8, 0.6}, 1}};
  const FusedOpinion m = fuse(mixed);
  EXPECT_NEAR(m.opinion.t, 0.7, 1e-12);
  EXPECT_NEAR(m.opinion.c, 0.6666666666666667, 1e-12);
  EXPECT_NEAR(m.opinion.f, 0.45, 1e-12);
  EXPECT_EQ(m.doc, 0.0);
}

TEST(Fuse, ReferenceValues) {
  const std::vector<WeightedOpinion> two{{{0.9, 0.8, 0.5}, 2}, {{0.1, 0.5, 0.5}, 1}};
  const FusedOpinion r = fuse(two);
  EXPECT_NEAR(r.opinion.t, 0.8111111111111112, 1e-12);
  EXPECT_NEAR(r.opinion.c, 0.59, 1e-12);
  EXPECT_NEAR(r.opinion.f, 0.5, 1e-12);
  EXPECT_NEAR(r.doc, 0.2133333333333334, 1e-12);

  const std::vector<WeightedOpinion> three{
      {{0.9, 0.6, 0.7}, 2}, {{0.4, 0.3, 0.2}, 1}, {{0.6, 0.9, 0.5}, 1}};
  const FusedOpinion s = fuse(three);
  EXPECT_NEAR(s.opinion.t, 0.6655172413793103, 1e-12);
  EXPECT_NEAR(s.opinion.c, 0.7005391304347827, 1e-12);
  EXPECT_NEAR(s.opinion.f, 0.5249999999999999, 1e-12);
  EXPECT_NEAR(s.doc, 0.074, 1e-12);
}

TEST(Fuse, Errors) {
  const std::vector<WeightedOpinion> one{{{0.5, 0.5, 0.5}, 1}};
  EXPECT_THROW(fuse(one), Error);
  const std::vector<WeightedOpinion> zero{{{0.5, 0.5, 0.5}, 0}, {{0.1, 0.5, 0.5}, 0}};
  try {
    fuse(zero);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidWeights);
  }
}

TEST(FuseLaws, CommutativeIdempotentZeroWeight) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> weight(0.1, 3.0);
  std::uniform_int_distribution<int> count(2, 5);
  for (int i = 0; i < 2000; ++i) {
    std::vector<WeightedOpinion> in;
    const int n = count(rng);
    for (int k = 0; k < n; ++k) in.push_back({random_opinion(rng, 0.15), weight(rng)});
    const FusedOpinion base = fuse(in);
    ASSERT_TRUE(is_valid(base.opinion));
    ASSERT_GE(base.doc, 0.0);
    ASSERT_LE(base.doc, 1.0);
    if (base.doc == 1.0) EXPECT_EQ(base.opinion.c, 0.0);

    auto shuffled = in;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const FusedOpinion perm = fuse(shuffled);
    EXPECT_NEAR(perm.opinion.t, base.opinion.t, 1e-12);
    EXPECT_NEAR(perm.opinion.c, base.opinion.c, 1e-12);
    EXPECT_NEAR(perm.opinion.f, base.opinion.f, 1e-12);
    EXPECT_NEAR(perm.doc, base.doc, 1e-12);

    const std::vector<WeightedOpinion> twin{in[0], in[0]};
    const FusedOpinion same = fuse(twin);
    EXPECT_NEAR(same.opinion.c, in[0].opinion.c, 1e-12);
    EXPECT_NEAR(same.opinion.f, in[0].opinion.f, 1e-12);
    if (in[0].opinion.c > 0) EXPECT_NEAR(same.opinion.t, in[0].opinion.t, 1e-12);

    auto padded = in;
    padded.push_back({random_opinion(rng, 0.3), 0.0});
    const FusedOpinion ignored = fuse(padded);
    EXPECT_NEAR(ignored.opinion.t, base.opinion.t, 1e-12);
    EXPECT_NEAR(ignored.opinion.c, base.opinion.c, 1e-12);
    EXPECT_NEAR(ignored.opinion.f, base.opinion.f, 1e-12);
    EXPECT_NEAR(ignored.doc, base.doc, 1e-12);
  }
}

}  // namespace
}  // namespace vtrust
