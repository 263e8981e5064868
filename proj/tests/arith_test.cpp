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

#include "adapt/arith.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace {

using ::adapt::Binary64Backend;
using ::adapt::ExactRational;
using ::adapt::GenericFormat;
using ::adapt::Instrumentation;
using ::adapt::ModelBackend;
using ::adapt::StreamPtr;

const Binary64Backend kBe;

ExactRational Q(double x) { return ExactRational::FromDouble(x); }
ExactRational Sum(const std::vector<double>& v) {
  ExactRational s;
  for (double x : v) s += Q(x);
  return s;
}
StreamPtr<Binary64Backend> Src(std::vector<double> v) {
  return std::make_unique<adapt::VectorSource<Binary64Backend>>(kBe, std::move(v));
}

// A random pseudo-expansion with chain ratio at most `ratio`.
std::vector<double> RandomPseudo(std::mt19937_64& rng, int n, double ratio, int spread = 40) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_int_distribution<int> ex(-spread, spread);
  std::vector<double> v;
  double x = std::ldexp(u(rng), ex(rng));
  for (int i = 0; i < n && x != 0; ++i) {
    v.push_back(x);
    x = x * ratio * u(rng);
  }
  return v;
}

// Chain ratio and length checks on an adder output.
::testing::AssertionResult ChainOk(const std::vector<double>& c, size_t length) {
  ExactRational eps = *adapt::sum_chain_ratio(length, GenericFormat::Binary64());
  ExactRational tail = adapt::sum_tail_ratio(length, GenericFormat::Binary64());
  if (c.size() > length + 1) return ::testing::AssertionFailure() << "too long: " << c.size();
  for (size_t i = 0; i + 1 < c.size(); ++i) {
    if (Q(c[i + 1]).abs() > eps * Q(c[i]).abs())
      return ::testing::AssertionFailure() << "chain ratio broken at " << i;
    std::vector<double> rest(c.begin() + i + 1, c.end());
    if (Sum(rest).abs() > tail * Q(c[i]).abs())
      return ::testing::AssertionFailure() << "tail law broken at " << i;
  }
  return ::testing::AssertionSuccess();
}

TEST(AddTest, Examples) {
  auto c = adapt::drain(*adapt::add(kBe, std::vector<double>{1.0, 1e-20}, {}, nullptr));
  EXPECT_EQ(Sum(c), Q(1.0) + Q(1e-20));
  auto z = adapt::drain(*adapt::add(kBe, std::vector<double>{1.0}, {-1.0}, nullptr));
  EXPECT_EQ(Sum(z), ExactRational(0));
  for (double x : z) EXPECT_EQ(x, 0.0);
  EXPECT_EQ(*adapt::sum_chain_ratio(4, GenericFormat::Binary64()),
            ExactRational(30) / (ExactRational(adapt::IntPow(2, 53)) - 26));
}

TEST(AddTest, RandomExactWithChainBounds) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 3000; ++t) {
    auto a = RandomPseudo(rng, 1 + rng() % 4, 0.45);
    auto b = RandomPseudo(rng, 1 + rng() % 4, 0.45);
    size_t length = a.size() + b.size();
    auto c = adapt::drain(*adapt::add(kBe, a, b, nullptr));
    ASSERT_EQ(Sum(c), Sum(a) + Sum(b));
    ASSERT_TRUE(ChainOk(c, length));
  }
}

TEST(AddTest, CancellationHeavyInputs) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 2000; ++t) {
    auto a = RandomPseudo(rng, 1 + rng() % 4, 0.3);
    std::vector<double> b;
    for (double x : a) b.push_back(-x);
    // Perturb the tail so the result is tiny but nonzero.
    b.back() = std::nextafter(b.back(), 0.0);
    auto c = adapt::drain(*adapt::add(kBe, a, b, nullptr));
    ASSERT_EQ(Sum(c), Sum(a) + Sum(b));
    ASSERT_TRUE(ChainOk(c, a.size() + b.size()));
  }
}

TEST(AddTest, SideConditionRejectsOverlongInput) {
  ModelBackend be(GenericFormat(2, 6, 20));
  std::vector<adapt::BFloat> many(6, adapt::BFloat(1, 0));
  EXPECT_THROW(adapt::add(be, many, many, nullptr), adapt::DomainError);
  EXPECT_THROW(adapt::add(ModelBackend(GenericFormat(3, 4, 4)), std::vector<adapt::BFloat>{},
                          std::vector<adapt::BFloat>{}, nullptr),
               adapt::DomainError);
}

TEST(AddTest, ModelBackendMatchesHardware) {
  std::mt19937_64 rng(6);
  ModelBackend mb(GenericFormat::Binary64());
  for (int t = 0; t < 200; ++t) {
    auto a = RandomPseudo(rng, 1 + rng() % 3, 0.4);
    auto b = RandomPseudo(rng, 1 + rng() % 3, 0.4);
    auto hw = adapt::drain(*adapt::add(kBe, a, b, nullptr));
    std::vector<adapt::BFloat> ma, mbv;
    for (double x : a) ma.push_back(adapt::from_double(x));
    for (double x : b) mbv.push_back(adapt::from_double(x));
    auto sw = adapt::drain(*adapt::add(mb, ma, mbv, nullptr));
    ASSERT_EQ(hw.size(), sw.size());
    for (size_t i = 0; i < hw.size(); ++i) ASSERT_EQ(hw[i], adapt::to_double(sw[i]));
  }
}

TEST(MulTest, Examples) {
  auto one = adapt::drain(*adapt::mul(kBe, std::vector<double>{1.0}, {3.0, 1e-30}, nullptr));
  EXPECT_EQ(Sum(one), Q(3.0) + Q(1e-30));
  double x = 1 + std::ldexp(1.0, -30);
  auto sq = adapt::drain(*adapt::mul(kBe, std::vector<double>{x}, {x}, nullptr));
  EXPECT_EQ(Sum(sq), 1 + ExactRational::Power(2, -29) + ExactRational::Power(2, -60));
}

TEST(MulTest, RandomExact) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 2000; ++t) {
    auto a = RandomPseudo(rng, 1 + rng() % 4, 0.45, 100);
    auto b = RandomPseudo(rng, 1 + rng() % 4, 0.45, 100);
    adapt::PartialProductStats stats;
    auto c = adapt::drain(*adapt::mul(kBe, a, b, nullptr, &stats));
    ASSERT_EQ(Sum(c), Sum(a) * Sum(b));
    ASSERT_TRUE(ChainOk(c, 2 * a.size() * b.size()));
  }
}

TEST(MulTest, WaitingQueueStaysSmallForTightExpansions) {
  // With chain ratios of a few ulps, lo parts leave the queue quickly.
  std::mt19937_64 rng(10);
  const double ratio = std::ldexp(1.0, -50);
  for (int t = 0; t < 2000; ++t) {
    auto a = RandomPseudo(rng, 1 + rng() % 5, ratio);
    auto b = RandomPseudo(rng, 1 + rng() % 5, ratio);
    if (std::fabs(a.back()) < 1e-250 || std::fabs(b.back()) < 1e-250) continue;
    adapt::PartialProductStats stats;
    auto c = adapt::drain(*adapt::mul(kBe, a, b, nullptr, &stats));
    ASSERT_EQ(Sum(c), Sum(a) * Sum(b));
    ASSERT_LE(stats.lo_high_water, 2 * b.size());
  }
}

TEST(MulTest, UnderflowGuard) {
  EXPECT_THROW(adapt::drain(*adapt::mul(kBe, std::vector<double>{1e-200}, {1e-200}, nullptr)),
               adapt::DomainError);
}

TEST(ComposeTest, AddOfMulStreams) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 300; ++t) {
    auto a = RandomPseudo(rng, 1 + rng() % 3, 0.4);
    auto b = RandomPseudo(rng, 1 + rng() % 3, 0.4);
    auto c = RandomPseudo(rng, 1 + rng() % 3, 0.4);
    auto s = adapt::add(kBe, adapt::mul(kBe, Src(a), Src(b), nullptr), Src(c), nullptr);
    ASSERT_EQ(Sum(adapt::drain(*s)), Sum(a) * Sum(b) + Sum(c));
    auto m = adapt::mul(kBe, adapt::add(kBe, Src(a), Src(c), nullptr), Src(b), nullptr);
    ASSERT_EQ(Sum(adapt::drain(*m)), (Sum(a) + Sum(c)) * Sum(b));
  }
}

// --- Division ------------------------------------------------------------------

ExactRational RelativeRemainder(const std::vector<double>& r, const std::vector<double>& d,
                                const std::vector<double>& q) {
  ExactRational R = Sum(r);
  return (R - Sum(q) * Sum(d)).abs() / R.abs();
}

TEST(DivTest, Examples) {
  auto by_one = adapt::div(kBe, Src({5.0, 1e-20}), {1.0}, nullptr);
  std::vector<double> q;
  adapt::StreamItem<double> it;
  while (by_one->pull(&it) == adapt::PullStatus::kItem) q.push_back(it.value);
  EXPECT_EQ(Sum(q), Q(5.0) + Q(1e-20));

  auto third = adapt::div(kBe, Src({1.0}), {3.0}, nullptr);
  std::vector<double> digits;
  ExactRational kappa_pow = 1;
  for (int k = 0; k < 4; ++k) {
    ASSERT_EQ(third->pull(&it), adapt::PullStatus::kItem);
    digits.push_back(it.value);
    ASSERT_TRUE(third->steps().back().certified);
    kappa_pow *= third->steps().back().kappa;
    EXPECT_LE(RelativeRemainder({1.0}, {3.0}, digits), kappa_pow);
  }
  EXPECT_THROW(adapt::div(kBe, Src({1.0}), {0.0}, nullptr), adapt::DomainError);
  EXPECT_THROW(adapt::div(kBe, Src({1.0}), {1.0, -1.0}, nullptr), adapt::DomainError);
}

TEST(DivTest, SelfQuotientStartsNearOne) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    // Only d0 and d1 are folded into the divisor head, so a third
    // component adds its full relative size to every digit's error. Tight
    // expansions keep that below an ulp.
    auto r = RandomPseudo(rng, 1 + rng() % 3, std::ldexp(1.0, -50));
    auto s = adapt::div(kBe, Src(r), r, nullptr);
    adapt::StreamItem<double> it;
    std::vector<double> q;
    for (int k = 0; k < 3 && s->pull(&it) == adapt::PullStatus::kItem; ++k) q.push_back(it.value);
    ASSERT_FALSE(q.empty());
    // The head of R is only settled to 4 ulps before the digit is taken,
    // and the divisor head carries its own rounding.
    ASSERT_LE((Q(q[0]) - 1).abs(), ExactRational::Power(2, -50)) << t;
    ASSERT_LE(RelativeRemainder(r, r, q), ExactRational::Power(2, -100));
  }
}

TEST(DivTest, RandomContraction) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 500; ++t) {
    auto r = RandomPseudo(rng, 1 + rng() % 4, 0.45);
    auto d = RandomPseudo(rng, 1 + rng() % 4, 0.45);
    auto s = adapt::div(kBe, Src(r), d, nullptr);
    std::vector<double> q;
    ExactRational kappa_pow = 1;
    adapt::StreamItem<double> it;
    for (int k = 1; k <= 6; ++k) {
      ExactRational W = Sum(r) - Sum(q) * Sum(d);
      if (s->pull(&it) != adapt::PullStatus::kItem) {
        ASSERT_TRUE(W.is_zero());
        break;
      }
      q.push_back(it.value);
      const adapt::DivStep& step = s->steps().back();
      ASSERT_TRUE(step.certified);
      // The single-step inequality with the certified budget.
      ExactRational W1 = Sum(r) - Sum(q) * Sum(d);
      ASSERT_LE(W1.abs(), step.kappa * W.abs());
      kappa_pow *= step.kappa;
      ASSERT_LE(RelativeRemainder(r, d, q), kappa_pow);
      // The stream's own tail bound covers the rest of the quotient.
      ExactRational rest = Sum(r) / Sum(d) - Sum(q);
      ASSERT_LE(rest.abs(), *s->tail_bound());
    }
  }
}

TEST(DivTest, NegativeOperands) {
  auto s = adapt::div(kBe, Src({-7.0}), {-2.0}, nullptr);
  EXPECT_EQ(Sum(adapt::drain(*s)), ExactRational(7, 2));
  auto t = adapt::div(kBe, Src({7.0}), {-2.0, -1e-30}, nullptr);
  adapt::StreamItem<double> it;
  ASSERT_EQ(t->pull(&it), adapt::PullStatus::kItem);
  EXPECT_LT(it.value, 0);
}

TEST(DivTest, ModelBackendSmallPrecision) {
  ModelBackend be(GenericFormat(2, 8, 200));
  std::vector<adapt::BFloat> d{adapt::BFloat(3, 0)};
  StreamPtr<ModelBackend> one = std::make_unique<adapt::VectorSource<ModelBackend>>(
      be, std::vector<adapt::BFloat>{adapt::BFloat(1, 0)});
  auto s = adapt::div(be, std::move(one), d, nullptr);
  std::vector<adapt::BFloat> q;
  adapt::StreamItem<adapt::BFloat> it;
  for (int k = 0; k < 5; ++k) {
    ASSERT_EQ(s->pull(&it), adapt::PullStatus::kItem);
    q.push_back(it.value);
  }
  ExactRational approx;
  for (const auto& x : q) approx += adapt::value(x, be.format());
  EXPECT_LE((approx - ExactRational(1, 3)).abs(), *s->tail_bound());
  EXPECT_LT((approx - ExactRational(1, 3)).abs(), ExactRational::Power(2, -35));
}

// --- Consumers -----------------------------------------------------------------

TEST(RoundResultTest, TargetsAndLaziness) {
  Instrumentation loose, tight;
  auto a = adapt::add(kBe, Src({1.0, 1e-20, 1e-40}), Src({2.0, 1e-25}), &loose);
  auto r1 = adapt::round_result(*a, ExactRational(1, 10));
  EXPECT_EQ(r1.components.size(), 1u);
  EXPECT_LE(*r1.bound, ExactRational(1, 10));
  auto b = adapt::add(kBe, Src({1.0, 1e-20, 1e-40}), Src({2.0, 1e-25}), &tight);
  auto r2 = adapt::round_result(*b, ExactRational(0));
  EXPECT_EQ(*r2.bound, ExactRational(0));
  EXPECT_EQ(Sum(r2.components), Q(1.0) + Q(1e-20) + Q(1e-40) + Q(2.0) + Q(1e-25));
  EXPECT_LT(loose.total(), tight.total());
}

TEST(StreamSignTest, Examples) {
  auto pos = adapt::add(kBe, Src({1.0, 1e-300}), Src({-1.0}), nullptr);
  EXPECT_EQ(adapt::stream_sign(kBe, *pos), 1);
  auto zero = adapt::add(kBe, Src({1.0, 1e-30}), Src({-1.0, -1e-30}), nullptr);
  EXPECT_EQ(adapt::stream_sign(kBe, *zero), 0);
  auto neg = adapt::mul(kBe, Src({-3.0}), Src({2.0, 1e-40}), nullptr);
  size_t pulls = 0;
  EXPECT_EQ(adapt::stream_sign(kBe, *neg, &pulls), -1);
  EXPECT_EQ(pulls, 1u);
}

}  // namespace
