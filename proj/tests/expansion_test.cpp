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

#include "adapt/expansion.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace {

using ::adapt::BFloat;
using ::adapt::Expansion;
using ::adapt::ExactRational;
using ::adapt::GenericFormat;
using ::adapt::PseudoExpansion;

const GenericFormat kB64 = GenericFormat::Binary64();
const GenericFormat kTiny(2, 4, 8);

BFloat F(double d) { return adapt::from_double(d); }

TEST(ValidateTest, Examples) {
  EXPECT_TRUE(adapt::validate(Expansion{{F(1.0)}}, kB64));
  EXPECT_TRUE(adapt::validate(Expansion{{F(1.0), F(std::ldexp(1.0, -60))}}, kB64));
  EXPECT_FALSE(adapt::validate(Expansion{{F(1.0), F(1.0)}}, kB64));
  EXPECT_TRUE(adapt::validate(Expansion{{F(1.0), F(0.0), F(0.5)}}, kB64));
  EXPECT_TRUE(adapt::validate(PseudoExpansion{{F(1.0), F(0.125)}, ExactRational(1, 4)}, kB64));
  EXPECT_FALSE(adapt::validate(PseudoExpansion{{F(1.0), F(0.125)}, ExactRational(1, 16)}, kB64));
  EXPECT_FALSE(adapt::validate(PseudoExpansion{{F(1.0)}, ExactRational(1, 2)}, kB64));
  EXPECT_FALSE(adapt::validate(Expansion{{BFloat(16, 0)}}, kTiny));
}

// The definition read literally: some bounded representation (n, e) of
// x[i] has |x[i+1]| < beta^e.
bool OracleNonOverlap(const std::vector<BFloat>& xs, const GenericFormat& fmt) {
  std::vector<ExactRational> nz;
  for (const BFloat& x : xs) {
    if (!adapt::is_bounded(x, fmt)) return false;
    if (!x.is_zero()) nz.push_back(adapt::value(x, fmt));
  }
  for (size_t i = 0; i + 1 < nz.size(); ++i) {
    bool found = false;
    for (const BFloat& r : adapt::bounded_representations(nz[i], fmt, 12))
      found = found || nz[i + 1].abs() < ExactRational::Power(fmt.beta(), r.e);
    if (!found) return false;
  }
  return true;
}

TEST(ValidateTest, ExpansionMatchesDefinitionExhaustively) {
  auto fs = adapt::enumerate_bounded(kTiny, -4);
  int accepted = 0;
  for (const BFloat& a : fs) {
    for (const BFloat& b : fs) {
      std::vector<BFloat> xs{a, b};
      bool v = adapt::validate(Expansion{xs}, kTiny);
      ASSERT_EQ(v, OracleNonOverlap(xs, kTiny)) << adapt::serialize(xs);
      accepted += v;
    }
  }
  EXPECT_GT(accepted, 0);
}

TEST(ValueOfTest, Examples) {
  EXPECT_EQ(adapt::value_of(Expansion{}, kB64), ExactRational(0));
  EXPECT_EQ(adapt::value_of(Expansion{{F(1.5), F(0.25)}}, kB64), ExactRational(7, 4));
}

TEST(TailBoundTest, Examples) {
  PseudoExpansion x{{F(1.0), F(0.25)}, ExactRational(1, 4)};
  EXPECT_EQ(adapt::tail_bound(x, 0, kB64), ExactRational(1, 3));
  EXPECT_EQ(adapt::tail_bound(x, 1, kB64), ExactRational(1, 12));
  EXPECT_THROW(adapt::tail_bound(x, 2, kB64), std::out_of_range);
}

TEST(FromTailBoundTest, Examples) {
  EXPECT_EQ(adapt::from_tail_bound({F(1.0)}, ExactRational(1, 5)).epsilon, ExactRational(1, 4));
  EXPECT_THROW(adapt::from_tail_bound({F(1.0)}, ExactRational(1, 3)), adapt::DomainError);
  EXPECT_THROW(adapt::from_tail_bound({F(1.0)}, ExactRational(1, 2)), adapt::DomainError);
  auto x = adapt::from_tail_bound({F(1.0), F(0.0), F(0.125)}, ExactRational(1, 5));
  EXPECT_EQ(x.components.size(), 2u);
}

PseudoExpansion RandomPseudo(std::mt19937_64& rng, const ExactRational& eps, int max_len) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> len(1, max_len), ex(-20, 20);
  PseudoExpansion x{{}, eps};
  double cur = std::ldexp(u(rng), ex(rng));
  int n = len(rng);
  double e = eps.to_double();
  for (int i = 0; i < n && cur != 0; ++i) {
    x.components.push_back(F(cur));
    // A little slack so rounding of the product never breaks the ratio.
    cur = cur * e * 0.999 * u(rng);
  }
  return x;
}

TEST(TailBoundTest, SoundOnRandomPseudoExpansions) {
  std::mt19937_64 rng(11);
  for (ExactRational eps : {ExactRational(1, 3), ExactRational(1, 8), ExactRational(49, 100)}) {
    for (int t = 0; t < 500; ++t) {
      PseudoExpansion x = RandomPseudo(rng, eps, 8);
      ASSERT_TRUE(adapt::validate(x, kB64));
      for (size_t i = 0; i < x.components.size(); ++i) {
        std::vector<BFloat> tail(x.components.begin() + i + 1, x.components.end());
        ASSERT_LE(adapt::value_of(tail, kB64).abs(), adapt::tail_bound(x, i, kB64));
        // Geometric decay.
        ExactRational head = adapt::value(x.components[i], kB64).abs();
        ExactRational ek = 1;
        for (size_t j = i + 1; j < x.components.size(); ++j) {
          ek *= eps;
          ASSERT_LE(adapt::value(x.components[j], kB64).abs(), ek * head);
        }
      }
    }
  }
}

TEST(TailBoundTest, AdversarialAlternatingTail) {
  // Every component at the ratio limit with the same sign: the tail is as
  // large as the geometric series allows.
  PseudoExpansion x{{}, ExactRational(1, 4)};
  for (int i = 0; i < 10; ++i) x.components.push_back(F(std::ldexp(1.0, -2 * i)));
  ASSERT_TRUE(adapt::validate(x, kB64));
  std::vector<BFloat> tail(x.components.begin() + 1, x.components.end());
  EXPECT_LE(adapt::value_of(tail, kB64), adapt::tail_bound(x, 0, kB64));
}

TEST(RenormalizeTest, Examples) {
  Expansion plain{{F(1.0), F(std::ldexp(1.0, -60))}};
  Expansion r = adapt::renormalize(PseudoExpansion{plain.components, ExactRational(1, 4)}, kB64);
  EXPECT_EQ(adapt::value_of(r, kB64), adapt::value_of(plain, kB64));
  // 1 + ulp/2 overlaps at the ratio level but is a tie; it must split.
  PseudoExpansion tie{{F(1.0), F(std::ldexp(1.0, -53))}, ExactRational(1, 4)};
  Expansion t = adapt::renormalize(tie, kB64);
  EXPECT_TRUE(adapt::validate(t, kB64));
  EXPECT_EQ(t.components.size(), 2u);
  EXPECT_EQ(adapt::value_of(t, kB64), adapt::value_of(tie, kB64));
  EXPECT_THROW(adapt::renormalize(PseudoExpansion{{BFloat(1, 0)}, ExactRational(1, 4)},
                                  GenericFormat(3, 3, 4)),
               adapt::DomainError);
}

TEST(RenormalizeTest, RandomPreservesValueAndRemovesOverlap) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 2000; ++t) {
    PseudoExpansion x = RandomPseudo(rng, ExactRational(2, 5), 7);
    Expansion r = adapt::renormalize(x, kB64);
    ASSERT_EQ(adapt::value_of(r, kB64), adapt::value_of(x, kB64));
    ASSERT_TRUE(adapt::validate(r, kB64));
    ASSERT_LE(r.components.size(), x.components.size());
  }
}

TEST(RenormalizeTest, ExhaustiveTriplesOnTinyFormat) {
  auto fs = adapt::enumerate_bounded(kTiny, -3);
  const ExactRational eps(7, 16);
  long n = 0;
  for (const BFloat& a : fs) {
    for (const BFloat& b : fs) {
      if (adapt::value(b, kTiny).abs() > eps * adapt::value(a, kTiny).abs()) continue;
      for (const BFloat& c : fs) {
        PseudoExpansion x{{a, b, c}, eps};
        if (!adapt::validate(x, kTiny)) continue;
        Expansion r = adapt::renormalize(x, kTiny);
        ASSERT_EQ(adapt::value_of(r, kTiny), adapt::value_of(x, kTiny));
        ASSERT_TRUE(OracleNonOverlap(r.components, kTiny));
        ++n;
      }
    }
  }
  EXPECT_GT(n, 1000);
}

TEST(TextTest, RoundTrip) {
  std::vector<BFloat> xs{BFloat(3, 5), BFloat(-1, -2)};
  std::string s = adapt::serialize(xs, ExactRational(1, 4));
  EXPECT_EQ(s, "eps=1/4 (3,5) (-1,-2)");
  auto p = adapt::parse_expansion(s, kB64);
  ASSERT_TRUE(p.epsilon.has_value());
  EXPECT_EQ(*p.epsilon, ExactRational(1, 4));
  EXPECT_EQ(p.components, xs);
  auto h = adapt::parse_expansion(adapt::serialize(xs, std::nullopt, true), kB64);
  EXPECT_FALSE(h.epsilon.has_value());
  EXPECT_EQ(adapt::value_of(h.components, kB64), adapt::value_of(xs, kB64));
}

}  // namespace
