// Copyright 2026 The Adapt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "adapt/expr.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "adapt/backend.hpp"
#include "gtest/gtest.h"

namespace {

using adapt::Binary64Backend;
using adapt::ExactRational;
using adapt::GenericFormat;
using adapt::ModelBackend;

const Binary64Backend kBe;
const char kMiles[] = "4.995*1.609344 - 8";

ExactRational Exact(const char* s) { return adapt::eval_exact(*adapt::parse_expr(s)); }

TEST(ParseTest, PrecedenceAndLiterals) {
  EXPECT_EQ(Exact("1 + 2 * 3"), ExactRational(7));
  EXPECT_EQ(Exact("(1 + 2) * 3"), ExactRational(9));
  EXPECT_EQ(Exact("2 - 3 - 4"), ExactRational(-5));
  EXPECT_EQ(Exact("8 / 4 / 2"), ExactRational(1));
  EXPECT_EQ(Exact("-3 * -2"), ExactRational(6));
  EXPECT_EQ(Exact("0x1.8p-3"), ExactRational(3, 16));
  EXPECT_EQ(Exact("1.609344"), ExactRational(25146, 15625));
  EXPECT_EQ(Exact("2.5e-3"), ExactRational(1, 400));
  EXPECT_EQ(Exact(".5"), ExactRational(1, 2));
}

TEST(ParseTest, Errors) {
  for (const char* bad : {"", "1 +", "(1", "1)", "2 $ 3", "1e", "0x1p"})
    EXPECT_THROW(adapt::parse_expr(bad), adapt::ParseError) << bad;
  EXPECT_THROW(Exact("1 / (2 - 2)"), adapt::DomainError);
  EXPECT_THROW(Exact("x + 1"), std::invalid_argument);
}

TEST(ParseTest, Bindings) {
  auto [name, v] = adapt::parse_binding("miles=4.995");
  EXPECT_EQ(name, "miles");
  EXPECT_EQ(v, ExactRational(999, 200));
  EXPECT_THROW(adapt::parse_binding("=3"), std::invalid_argument);
  auto e = adapt::parse_expr("miles * 1.609344 - 8");
  auto r = adapt::eval_adaptive(kBe, *e, {{name, v}}, ExactRational::Parse("1e-6"), nullptr);
  EXPECT_EQ(r.sign, 1);
}

TEST(EvalTest, MotivatingExample) {
  auto e = adapt::parse_expr(kMiles);
  ExactRational exact = adapt::eval_exact(*e);
  EXPECT_GT(exact, ExactRational(38, 1000));  // a little over 38 meters
  auto r = adapt::eval_adaptive(kBe, *e, {}, ExactRational::Parse("1e-6"), nullptr);
  EXPECT_EQ(r.sign, 1);
  EXPECT_LE((r.value - exact).abs(), r.bound);
  EXPECT_LE(r.bound, ExactRational::Parse("1e-6"));
}

TEST(EvalTest, ExactlyZeroAndNearlyZero) {
  auto r = adapt::eval_adaptive(kBe, *adapt::parse_expr("5*1.6 - 8"), {}, ExactRational(0), nullptr);
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(r.sign, 0);
  EXPECT_TRUE(r.components.empty());
  auto k = adapt::parse_expr("5*1.609344 - 8");
  EXPECT_EQ(adapt::eval_exact(*k), ExactRational(584, 12500));
  auto s = adapt::eval_adaptive(kBe, *k, {}, ExactRational::Parse("1e-12"), nullptr);
  EXPECT_EQ(s.sign, 1);
  EXPECT_LE((s.value - ExactRational::Parse("0.04672")).abs(), s.bound);
}

TEST(EvalTest, LooseTargetAnswersAfterOnePull) {
  auto r = adapt::eval_adaptive(kBe, *adapt::parse_expr("1/3"), {}, ExactRational(10), nullptr);
  EXPECT_EQ(r.pulls, 1u);
  EXPECT_EQ(r.counts.at("div"), 1u);
}

TEST(EvalTest, ExactTargetOnInfiniteQuotientRunsOutOfPulls) {
  EXPECT_THROW(adapt::eval_adaptive(kBe, *adapt::parse_expr("1/3"), {}, ExactRational(0), nullptr, 8),
               adapt::DomainError);
  EXPECT_THROW(adapt::eval_adaptive(kBe, *adapt::parse_expr("1/(3-3)"), {}, ExactRational(1), nullptr),
               adapt::DomainError);
}

TEST(EvalTest, FiringsGrowWithPrecision) {
  ModelBackend single(GenericFormat::Binary32());
  auto e = adapt::parse_expr(kMiles);
  uint64_t last = 0;
  for (const char* t : {"1e-1", "1e-9", "1e-20", "1e-30"}) {
    auto r = adapt::eval_adaptive(single, *e, {}, ExactRational::Parse(t), nullptr);
    EXPECT_EQ(r.sign, 1);
    EXPECT_GE(r.firings, last) << t;
    last = r.firings;
  }
  auto loose = adapt::eval_adaptive(single, *e, {}, ExactRational::Parse("1e-1"), nullptr);
  auto tight = adapt::eval_adaptive(single, *e, {}, ExactRational::Parse("1e-9"), nullptr);
  EXPECT_LT(loose.firings, tight.firings);
}

// Random expression trees over decimal literals.
adapt::ExprPtr RandomExpr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 5);
  int k = depth == 0 ? 0 : pick(rng);
  if (k <= 1) {
    std::uniform_int_distribution<long> num(-99999, 99999), scale(0, 6);
    ExactRational v(adapt::BigInt(num(rng)), adapt::IntPow(10, scale(rng)));
    return adapt::make_literal(v);
  }
  using K = adapt::Expr::Kind;
  static const K kinds[] = {K::kAdd, K::kSub, K::kMul, K::kDiv};
  return adapt::make_binary(kinds[k - 2], RandomExpr(rng, depth - 1), RandomExpr(rng, depth - 1));
}

TEST(EvalTest, ReportedBoundIsSound) {
  std::mt19937_64 rng(4);
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    auto e = RandomExpr(rng, 3);
    ExactRational exact;
    try {
      exact = adapt::eval_exact(*e);
    } catch (const adapt::DomainError&) {
      continue;
    }
    for (const char* target : {"1e-3", "1e-25"}) {
      auto r = adapt::eval_adaptive(kBe, *e, {}, ExactRational::Parse(target), nullptr);
      ASSERT_LE((r.value - exact).abs(), r.bound) << adapt::to_string(*e);
      ASSERT_EQ(r.sign, exact.sign()) << adapt::to_string(*e);
    }
    ++checked;
  }
  EXPECT_GT(checked, 200);
}

TEST(SignDetTest, Examples) {
  using M = std::vector<std::vector<ExactRational>>;
  M id3{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  EXPECT_EQ(adapt::sign_det(kBe, id3), 1);
  M rep{{1, 2, 3}, {4, 5, 6}, {1, 2, 3}};
  EXPECT_EQ(adapt::sign_det(kBe, rep), 0);
  M two{{0, 1}, {1, 0}};
  EXPECT_EQ(adapt::sign_det(kBe, two), -1);
  M frac{{ExactRational(1, 3), 1}, {1, 3}};
  EXPECT_EQ(adapt::sign_det(kBe, frac), 0);
}

TEST(SignDetTest, ExtremeExponents) {
  using M = std::vector<std::vector<ExactRational>>;
  const ExactRational tiny = ExactRational::FromDouble(std::numeric_limits<double>::denorm_min());
  const ExactRational huge = ExactRational::FromDouble(1e300);
  const std::vector<M> cases = {
      {{tiny, 1}, {1, 1}},
      {{tiny, tiny}, {tiny, ExactRational::FromDouble(std::nextafter(tiny.to_double(), 1.0))}},
      {{huge, huge}, {huge, ExactRational::FromDouble(std::nextafter(1e300, 0.0))}},
      {{huge, tiny, 1}, {tiny, huge, 1}, {1, 1, tiny}},
      {{0, 0, 1}, {tiny, 0, 1}, {0, tiny, 1}},
  };
  for (const M& m : cases) EXPECT_EQ(adapt::sign_det(kBe, m), adapt::sign_det_exact(m));
}

TEST(SignDetTest, NearlyCollinearOrientation) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 500; ++t) {
    double px = u(rng), py = u(rng), qx = u(rng), qy = u(rng), s = u(rng);
    double rx = px + s * (qx - px), ry = py + s * (qy - py);
    for (int k = 0; k < (int)(rng() % 3); ++k) rx = std::nextafter(rx, 2.0);
    std::vector<std::vector<ExactRational>> m{
        {ExactRational::FromDouble(px), ExactRational::FromDouble(py), 1},
        {ExactRational::FromDouble(qx), ExactRational::FromDouble(qy), 1},
        {ExactRational::FromDouble(rx), ExactRational::FromDouble(ry), 1}};
    ASSERT_EQ(adapt::sign_det(kBe, m), adapt::sign_det_exact(m)) << t;
  }
}

}  // namespace
