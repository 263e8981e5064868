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

#include "adapt/oracle.hpp"

#include <random>
#include <set>

#include "gtest/gtest.h"

namespace {

using adapt::BFloat;
using adapt::ExactRational;
using adapt::GenericFormat;
using adapt::RoundingMode;

const GenericFormat kP4(2, 4, 8);

TEST(ExactRationalTest, AlgebraicIdentities) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long> d(-1000, 1000);
  auto draw = [&] {
    long den = d(rng);
    return ExactRational(adapt::BigInt(d(rng)), adapt::BigInt(den == 0 ? 7 : den));
  };
  for (int i = 0; i < 2000; ++i) {
    ExactRational a = draw(), b = draw(), c = draw();
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a - b) + b, a);
    EXPECT_GT(a.den(), 0);
  }
}

TEST(RefRoundTest, RepresentableValueGivesItsClass) {
  auto cls = adapt::ref_round(ExactRational(3, 4), RoundingMode::kNearestEven, kP4, 4);
  std::set<int64_t> amps;
  for (const BFloat& f : cls) {
    EXPECT_EQ(adapt::value(f, kP4), ExactRational(3, 4));
    amps.insert(f.e);
  }
  // 3/4 = (3,-2) = (6,-3) = (12,-4).
  EXPECT_EQ(amps, (std::set<int64_t>{-4, -3, -2}));
}

TEST(RefRoundTest, MidpointGoesToEvenSignificand) {
  // 17/16 sits between (8,-3) and (9,-3).
  auto cls = adapt::ref_round(ExactRational(17, 16), RoundingMode::kNearestEven, kP4, 4);
  ASSERT_FALSE(cls.empty());
  for (const BFloat& f : cls) EXPECT_EQ(adapt::value(f, kP4), ExactRational(1));
  auto down = adapt::ref_round(ExactRational(17, 16), RoundingMode::kDown, kP4, 4);
  EXPECT_EQ(adapt::value(down.front(), kP4), ExactRational(1));
  auto up = adapt::ref_round(ExactRational(17, 16), RoundingMode::kUp, kP4, 4);
  EXPECT_EQ(adapt::value(up.front(), kP4), ExactRational(9, 8));
}

TEST(RefRoundTest, AgreesWithModelOnMidpointsAndRepresentables) {
  adapt::ReferenceUniverse u(kP4, 4);
  const auto& v = u.values();
  for (size_t i = 0; i + 1 < v.size(); ++i) {
    for (const ExactRational& x : {v[i], (v[i] + v[i + 1]) / 2}) {
      for (RoundingMode mode : adapt::kAllRoundingModes) {
        auto cls = u.round_class(x, mode);
        BFloat m = adapt::round(x, mode, kP4);
        bool member = false;
        for (const BFloat& f : cls) member |= f == m;
        ASSERT_TRUE(member) << x << " " << adapt::ToString(mode);
        for (const BFloat& f : cls) ASSERT_EQ(adapt::value(f, kP4), adapt::value(m, kP4));
      }
    }
  }
}

TEST(RefRoundTest, OutOfRangeIsRejected) {
  EXPECT_THROW(adapt::ref_round(ExactRational(1000), RoundingMode::kUp, kP4, 2),
               adapt::DomainError);
}

TEST(RepresentabilityTest, Basics) {
  EXPECT_TRUE(adapt::has_bounded_representation(ExactRational(15, 8), kP4));
  EXPECT_FALSE(adapt::has_bounded_representation(ExactRational(17, 8), kP4));
  EXPECT_TRUE(adapt::has_bounded_representation(ExactRational(1 << 20), kP4));
  EXPECT_FALSE(adapt::has_bounded_representation(ExactRational(1, 1024), kP4));
  EXPECT_TRUE(adapt::representable_with_amplitude(ExactRational(3, 4), -3, kP4));
  EXPECT_FALSE(adapt::representable_with_amplitude(ExactRational(3, 4), -1, kP4));
  EXPECT_FALSE(adapt::representable_with_amplitude(ExactRational(0), -9, kP4));
}

TEST(CheckTheoremTest, SterbenzHoldsInRadixTen) {
  auto r = adapt::check_theorem("Sterbenz", GenericFormat(10, 2, 0));
  EXPECT_TRUE(r.passed) << adapt::to_string(r);
  EXPECT_GT(r.trials, 1000u);
}

TEST(CheckTheoremTest, RawThreeOpFailsInRadixTen) {
  auto r = adapt::check_theorem("ExtDekker-raw3op", GenericFormat(10, 2, 1));
  EXPECT_FALSE(r.passed);
  EXPECT_TRUE(r.expect_failure);
  EXPECT_TRUE(r.ok());
  EXPECT_NE(r.counterexample.find("a=(99,-1) b=(99,-1)"), std::string::npos);
  EXPECT_NE(r.counterexample.find("two_sum=exact"), std::string::npos);
}

TEST(CheckTheoremTest, RawThreeOpFailsInRadixFour) {
  auto r = adapt::check_theorem("ExtDekker-raw3op", GenericFormat(4, 1, 1));
  EXPECT_FALSE(r.passed);
  EXPECT_NE(r.counterexample.find("a=(3,0) b=(3,0)"), std::string::npos);
}

TEST(CheckTheoremTest, RawThreeOpHoldsInRadixThree) {
  auto r = adapt::check_theorem("Thm9", GenericFormat(3, 3, 3));
  EXPECT_TRUE(r.passed) << adapt::to_string(r);
}

TEST(CheckTheoremTest, ModelTagsPassOnDefaultFormat) {
  for (const char* tag : {"Thm1", "Thm2", "Thm3", "Thm4", "Thm5", "Thm6", "Thm7", "Thm8",
                          "Thm9", "Thm10", "TwoSum"}) {
    auto r = adapt::check_theorem(tag);
    EXPECT_TRUE(r.ok()) << adapt::to_string(r);
    EXPECT_GT(r.trials, 0u) << tag;
  }
}

TEST(CheckTheoremTest, OtherFormats) {
  for (const GenericFormat& f : {GenericFormat(2, 3, 4), GenericFormat(2, 5, 4)}) {
    for (const char* tag : {"Thm2", "Thm3", "Thm7", "TwoSum", "Thm10"}) {
      auto r = adapt::check_theorem(tag, f);
      EXPECT_TRUE(r.passed) << adapt::to_string(r);
    }
  }
}

TEST(CheckTheoremTest, Sigma3ExhaustiveSweep) {
  auto r = adapt::check_theorem("Thm12");
  EXPECT_TRUE(r.passed) << adapt::to_string(r);
  EXPECT_GT(r.trials, 10000000u);
}

TEST(CheckTheoremTest, DivisionSteps) {
  auto r = adapt::check_theorem("Thm14");
  EXPECT_TRUE(r.passed) << adapt::to_string(r);
  EXPECT_GE(r.trials, 10000u);
}

TEST(CheckTheoremTest, ReportLine) {
  adapt::TheoremReport r;
  r.tag = "Thm1";
  r.domain = "d";
  r.trials = 3;
  EXPECT_EQ(adapt::to_string(r), "tag=Thm1 domain=d trials=3 result=pass");
  r.passed = false;
  r.counterexample = "x";
  EXPECT_EQ(adapt::to_string(r), "tag=Thm1 domain=d trials=3 result=fail counterexample=\"x\"");
}

TEST(CheckTheoremTest, Errors) {
  EXPECT_THROW(adapt::check_theorem("Thm99"), std::invalid_argument);
  EXPECT_THROW(adapt::check_theorem("Thm6", GenericFormat(10, 2, 0)), adapt::DomainError);
  EXPECT_THROW(adapt::check_theorem("Thm14", GenericFormat(2, 4, 8)), adapt::DomainError);
  EXPECT_THROW(adapt::check_theorem("Thm12", GenericFormat(2, 40, 8)), adapt::DomainError);
}

}  // namespace
