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

#include "adapt/toolset.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace {

using ::adapt::Binary64Backend;
using ::adapt::ExactRational;
using ::adapt::Instrumentation;
using ::adapt::KeyPolicy;
using ::adapt::PullStatus;
using ::adapt::SmallBinaryBackend;
using ::adapt::StreamPtr;
using Item = ::adapt::StreamItem<double>;
using Source = ::adapt::VectorSource<Binary64Backend>;

const Binary64Backend kBe;

StreamPtr<Binary64Backend> Src(std::vector<double> v) {
  return std::make_unique<Source>(kBe, std::move(v));
}

std::vector<double> DrainValues(adapt::Stream<Binary64Backend>& s) {
  std::vector<double> out;
  Item it;
  while (s.pull(&it) == PullStatus::kItem) out.push_back(it.value);
  return out;
}

// Counts pulls made on the wrapped stream.
class Counting : public adapt::Stream<Binary64Backend> {
 public:
  Counting(StreamPtr<Binary64Backend> s, int* n) : s_(std::move(s)), n_(n) {}
  PullStatus pull(Item* out) override {
    ++*n_;
    return s_->pull(out);
  }
  std::optional<ExactRational> tail_bound() const override { return s_->tail_bound(); }

 private:
  StreamPtr<Binary64Backend> s_;
  int* n_;
};

TEST(PriorityQueueTest, Examples) {
  adapt::PriorityQueue<int, std::less<int>> q;
  q.insert(7);
  EXPECT_EQ(q.pop_max(), 7);
  EXPECT_THROW(q.pop_max(), std::out_of_range);
  for (int k : {5, 1, 3}) q.insert(k);
  EXPECT_EQ(q.pop_max(), 5);
  EXPECT_EQ(q.pop_max(), 3);
  EXPECT_EQ(q.pop_max(), 1);
}

TEST(PriorityQueueTest, RandomAgainstSort) {
  std::mt19937 rng(3);
  for (int t = 0; t < 200; ++t) {
    adapt::PriorityQueue<int, std::less<int>> q;
    std::vector<int> all;
    int n = rng() % 64;
    for (int i = 0; i < n; ++i) {
      int k = rng() % 100;
      q.insert(k);
      all.push_back(k);
    }
    // Exercise update_top as the partial-product generator does.
    if (!q.empty()) {
      int k = rng() % 100;
      all.erase(std::find(all.begin(), all.end(), q.top()));
      all.push_back(k);
      q.update_top(k);
    }
    std::sort(all.rbegin(), all.rend());
    std::vector<int> got;
    while (!q.empty()) got.push_back(q.pop_max());
    ASSERT_EQ(got, all);
  }
}

TEST(MergeQueueTest, Examples) {
  adapt::MergeQueue<Binary64Backend> a(kBe, Src({4, 1}), Src({}), KeyPolicy::kMagnitude, nullptr);
  EXPECT_EQ(DrainValues(a), (std::vector<double>{4, 1}));
  adapt::MergeQueue<Binary64Backend> b(kBe, Src({4, 1}), Src({3, 2}), KeyPolicy::kMagnitude,
                                       nullptr);
  EXPECT_EQ(DrainValues(b), (std::vector<double>{4, 3, 2, 1}));
  // Ties go to the first input.
  adapt::MergeQueue<Binary64Backend> c(kBe, Src({2}), Src({-2}), KeyPolicy::kMagnitude, nullptr);
  EXPECT_EQ(DrainValues(c), (std::vector<double>{2, -2}));
}

TEST(MergeQueueTest, RandomIsSortedPermutationAndLazy) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 300; ++t) {
    std::vector<double> x(rng() % 8), y(rng() % 8);
    for (auto& v : x) v = u(rng);
    for (auto& v : y) v = u(rng);
    auto by_mag = [](double p, double q) { return std::fabs(p) > std::fabs(q); };
    std::sort(x.begin(), x.end(), by_mag);
    std::sort(y.begin(), y.end(), by_mag);
    int n1 = 0, n2 = 0;
    Instrumentation instr;
    adapt::MergeQueue<Binary64Backend> mq(kBe, std::make_unique<Counting>(Src(x), &n1),
                                          std::make_unique<Counting>(Src(y), &n2),
                                          KeyPolicy::kMagnitude, &instr);
    std::vector<double> got;
    Item it;
    while (mq.pull(&it) == PullStatus::kItem) {
      got.push_back(it.value);
      // One output never pulls more than one fresh item per input beyond
      // the two initial heads.
      ASSERT_LE(n1 + n2, static_cast<int>(got.size()) + 2);
    }
    ASSERT_TRUE(std::is_sorted(got.begin(), got.end(), by_mag));
    std::vector<double> all = x;
    all.insert(all.end(), y.begin(), y.end());
    std::sort(all.begin(), all.end());
    std::sort(got.begin(), got.end());
    ASSERT_EQ(got, all);
    ASSERT_EQ(instr.count("mq"), all.size());
  }
}

TEST(MergeQueueTest, FreezesUntilBothInputsSpeak) {
  auto push = std::make_unique<adapt::PushSource<Binary64Backend>>(kBe);
  auto* ch = push.get();
  adapt::MergeQueue<Binary64Backend> mq(kBe, Src({4, 1}), std::move(push),
                                        KeyPolicy::kMagnitude, nullptr);
  Item it;
  EXPECT_EQ(mq.pull(&it), PullStatus::kFrozen);
  EXPECT_FALSE(mq.tail_bound().has_value());
  ch->push(2);
  ASSERT_EQ(mq.pull(&it), PullStatus::kItem);
  EXPECT_EQ(it.value, 4);
  ASSERT_EQ(mq.pull(&it), PullStatus::kItem);
  EXPECT_EQ(it.value, 2);
  EXPECT_EQ(mq.pull(&it), PullStatus::kFrozen);
  ch->close();
  ASSERT_EQ(mq.pull(&it), PullStatus::kItem);
  EXPECT_EQ(it.value, 1);
  EXPECT_EQ(mq.pull(&it), PullStatus::kExhausted);
  EXPECT_EQ(*mq.tail_bound(), ExactRational(0));
}

TEST(MergeQueueTest, TailBoundCoversRemainder) {
  adapt::MergeQueue<Binary64Backend> mq(kBe, Src({4, -1}), Src({3, 0.5}),
                                        KeyPolicy::kMagnitude, nullptr);
  EXPECT_EQ(*mq.tail_bound(), ExactRational(17, 2));
  Item it;
  mq.pull(&it);
  EXPECT_EQ(*mq.tail_bound(), ExactRational(9, 2));
}

TEST(RerepresentTest, MagnitudeSortedBecomesAmplitudeSorted) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_int_distribution<int> ex(-60, 60);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> x(1 + rng() % 10);
    for (auto& v : x) v = std::ldexp(u(rng), ex(rng));
    // Include runs of equal magnitude, where canonical amplitudes tie.
    if (x.size() > 2) x[1] = -x[0];
    std::sort(x.begin(), x.end(), [](double p, double q) { return std::fabs(p) > std::fabs(q); });
    adapt::Rerepresent<Binary64Backend> rr(kBe, Src(x), nullptr);
    Item it;
    int64_t prev = adapt::kZeroAmplitude;
    size_t k = 0;
    while (rr.pull(&it) == PullStatus::kItem) {
      ASSERT_EQ(it.value, x[k++]);
      ASSERT_LE(it.amplitude, prev);
      ASSERT_TRUE(adapt::representable_at(it.value, it.amplitude));
      prev = it.amplitude;
    }
    ASSERT_EQ(k, x.size());
  }
}

TEST(RerepresentTest, RejectsUnsortedInput) {
  adapt::Rerepresent<Binary64Backend> rr(kBe, Src({1.0, 1e10}), nullptr);
  Item it;
  rr.pull(&it);
  EXPECT_THROW(rr.pull(&it), adapt::DomainError);
}

// --- Sigma3 ------------------------------------------------------------------

TEST(Sigma3Test, Examples) {
  adapt::ThreeSumState<double> s{{0.0, adapt::kZeroAmplitude}, {0.0, adapt::kZeroAmplitude}};
  auto r = adapt::sigma3_step(kBe, s, Item{1.5, adapt::canonical_exponent(1.5)});
  EXPECT_FALSE(r.emitted.has_value());
  EXPECT_EQ(r.state.a.value, 1.5);
  // Inserting zero changes nothing.
  auto z = adapt::sigma3_step(kBe, r.state, Item{0.0, adapt::kZeroAmplitude});
  EXPECT_FALSE(z.emitted.has_value());
  EXPECT_EQ(z.state.a.value + z.state.b.value, 1.5);
  EXPECT_THROW(adapt::sigma3_step(kBe, r.state, Item{4.0, 2}), adapt::DomainError);

  adapt::Sigma3<Binary64Backend> one(kBe, Src({3.0}), nullptr);
  EXPECT_EQ(DrainValues(one), (std::vector<double>{3.0}));
  adapt::Sigma3<Binary64Backend> none(kBe, Src({}), nullptr);
  EXPECT_TRUE(DrainValues(none).empty());
}

// The conclusions checked for one step, with exact arithmetic.
template <class Backend>
::testing::AssertionResult StepHolds(const Backend& be, const adapt::ThreeSumState<double>& s,
                                     const Item& c, const adapt::Sigma3Result<double>& r) {
  auto R = [&](double x) { return be.to_rational(x); };
  ExactRational before = R(s.a.value) + R(s.b.value) + R(c.value);
  ExactRational after = R(r.state.a.value) + R(r.state.b.value) +
                        (r.emitted ? R(r.emitted->value) : ExactRational());
  if (before != after) return ::testing::AssertionFailure() << "sum not conserved";
  auto ok_rep = [&](const Item& x) {
    return be.is_zero(x.value) || be.representable_at(x.value, x.amplitude);
  };
  if (!ok_rep(r.state.a) || !ok_rep(r.state.b))
    return ::testing::AssertionFailure() << "state amplitude is not a representation";
  if (r.emitted) {
    const ExactRational ulp = be.format().ulp();
    ExactRational a1 = R(r.emitted->value).abs();
    ExactRational bc = (R(r.state.a.value) + R(r.state.b.value)).abs();
    if (bc > ulp * 3 * a1) return ::testing::AssertionFailure() << "|b'+c'| > 3 ulp |a'|";
    if (ExactRational::Power(2, c.amplitude) > ulp * ulp * 3 / (ExactRational(2) - ulp) * a1)
      return ::testing::AssertionFailure() << "beta^e_c too large";
    if (r.state.b.amplitude != c.amplitude)
      return ::testing::AssertionFailure() << "e'_c != e_c";
    if (!ok_rep(*r.emitted)) return ::testing::AssertionFailure() << "bad a' amplitude";
    if (r.emitted->amplitude < r.state.a.amplitude || r.state.a.amplitude < r.state.b.amplitude)
      return ::testing::AssertionFailure() << "amplitudes out of order";
  }
  return ::testing::AssertionSuccess();
}

TEST(Sigma3Test, ExhaustiveOrderedTriplesOnSmallFormat) {
  // Scaling by a power of two maps every admissible triple onto one with
  // e_c = -e_min, so c ranges over all significands at that amplitude and
  // a, b over every float representable at or above it.
  const SmallBinaryBackend be(4, 20);
  const int64_t ec = -20, top = ec + 9;
  std::vector<double> values{0.0};
  for (int64_t e = ec; e <= top; ++e)
    for (int n = -15; n <= 15; ++n)
      if (n != 0 && (e == ec || std::abs(n) >= 8)) values.push_back(std::ldexp(n, static_cast<int>(e)));
  auto widest = [&](double x) {
    int64_t e = be.canonical_exponent(x);
    while (be.representable_at(x, e + 1)) ++e;
    return e;
  };
  long emitted = 0, steps = 0;
  for (double a : values) {
    for (double b : values) {
      int64_t eb = b == 0 ? adapt::kZeroAmplitude : std::max(be.canonical_exponent(b), ec);
      int64_t ea = a == 0 ? adapt::kZeroAmplitude : widest(a);
      if (a != 0 && b != 0 && ea < eb) continue;
      for (int n = -15; n <= 15; ++n) {
        Item ia{a, ea}, ib{b, eb}, ic{std::ldexp(n, static_cast<int>(ec)), ec};
        if (n == 0) ic.amplitude = adapt::kZeroAmplitude;
        adapt::ThreeSumState<double> s{ia, ib};
        auto r = adapt::sigma3_step(be, s, ic);
        ASSERT_TRUE(StepHolds(be, s, ic, r))
            << a << "@" << ea << " " << b << "@" << eb << " " << ic.value << "@" << ec;
        emitted += r.emitted.has_value();
        ++steps;
      }
    }
  }
  EXPECT_GT(steps, 100000);
  EXPECT_GT(emitted, 1000);
}

TEST(Sigma3Test, RandomBinary64Steps) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_int_distribution<int> gap(0, 120);
  long emitted = 0;
  for (int t = 0; t < 20000; ++t) {
    double a = std::ldexp(u(rng), 0);
    double b = std::ldexp(u(rng), -gap(rng));
    double c = std::ldexp(u(rng), -gap(rng));
    if (std::fabs(b) > std::fabs(a)) std::swap(a, b);
    if (std::fabs(c) > std::fabs(b)) std::swap(b, c);
    if (std::fabs(b) > std::fabs(a)) std::swap(a, b);
    Item ia{a, adapt::canonical_exponent(a)}, ib{b, adapt::canonical_exponent(b)},
        ic{c, adapt::canonical_exponent(c)};
    adapt::ThreeSumState<double> s{ia, ib};
    auto r = adapt::sigma3_step(kBe, s, ic);
    ASSERT_TRUE(StepHolds(kBe, s, ic, r));
    emitted += r.emitted.has_value();
  }
  EXPECT_GT(emitted, 0);
}

TEST(Sigma3Test, FlushConservesSum) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> x(1 + rng() % 12);
    double scale = 1;
    for (auto& v : x) {
      v = u(rng) * scale;
      scale *= 0.3;
    }
    std::sort(x.begin(), x.end(), [](double p, double q) { return std::fabs(p) > std::fabs(q); });
    auto s3 = std::make_unique<adapt::Sigma3<Binary64Backend>>(
        kBe, std::make_unique<adapt::Rerepresent<Binary64Backend>>(kBe, Src(x), nullptr), nullptr);
    ExactRational in, out;
    for (double v : x) in += ExactRational::FromDouble(v);
    for (double v : DrainValues(*s3)) out += ExactRational::FromDouble(v);
    ASSERT_EQ(in, out);
  }
}

// --- PP ----------------------------------------------------------------------

TEST(PartialProductTest, ToyKeysPopInOrder) {
  adapt::PartialProductStats stats;
  auto [hi, lo] = adapt::pp_generate(kBe, Src({4, 1}), Src({4, 1}), nullptr, &stats);
  EXPECT_EQ(DrainValues(*hi), (std::vector<double>{16, 4, 4, 1}));
  Item it;
  EXPECT_EQ(lo->pull(&it), PullStatus::kExhausted);
}

TEST(PartialProductTest, SingletonScalesOtherOperand) {
  auto [hi, lo] = adapt::pp_generate(kBe, Src({3}), Src({8, 0.5, 0.125}), nullptr);
  EXPECT_EQ(DrainValues(*hi), (std::vector<double>{24, 1.5, 0.375}));
}

TEST(PartialProductTest, RandomMultisetAndWaitingQueueBound) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 300; ++t) {
    auto make = [&](int n) {
      std::vector<double> v;
      double s = 1;
      for (int i = 0; i < n; ++i) {
        v.push_back(u(rng) * s);
        s = std::fabs(v.back()) * 0.4;
      }
      return v;
    };
    std::vector<double> a = make(1 + rng() % 5), b = make(1 + rng() % 5);
    adapt::PartialProductStats stats;
    auto [hi, lo] = adapt::pp_generate(kBe, Src(a), Src(b), nullptr, &stats);
    ExactRational expected = hi->tail_bound().value();
    std::vector<ExactRational> got, want;
    Item it;
    double prev = INFINITY;
    while (hi->pull(&it) == PullStatus::kItem) {
      ASSERT_LE(std::fabs(it.value), prev);
      prev = std::fabs(it.value);
      got.push_back(ExactRational::FromDouble(it.value));
      Item l;
      // Drain lo parts as they appear, pairing by order.
      if (lo->pull(&l) == PullStatus::kItem) got.back() += ExactRational::FromDouble(l.value);
    }
    for (double x : a)
      for (double y : b) want.push_back(ExactRational::FromDouble(x) * ExactRational::FromDouble(y));
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    ASSERT_EQ(got, want);
    ASSERT_LE(stats.lo_high_water, 2 * b.size());
    ExactRational total;
    for (const auto& w : want) total += w;
    ASSERT_LE(total.abs(), expected);
  }
}

}  // namespace
