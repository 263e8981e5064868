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

// Ground truth for the float model: brute-force rounding classes over an
// enumerated universe, and exhaustive or randomized sweeps that check each
// theorem of the arithmetic core against exact rationals.

#ifndef ADAPT_ORACLE_HPP_
#define ADAPT_ORACLE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adapt/fmodel.hpp"
#include "adapt/rational.hpp"

namespace adapt {

// Every bounded pair with amplitude in [-e_min, e_top], grouped by value.
// Rounding queries are answered straight from the class definitions
// (largest float below, smallest above, nearest set, even tie-break),
// never through fmodel::round.
class ReferenceUniverse {
 public:
  ReferenceUniverse(const GenericFormat& fmt, int64_t e_top, size_t budget = 1u << 22);

  const GenericFormat& format() const { return fmt_; }
  int64_t e_top() const { return e_top_; }
  // Distinct values, ascending.
  const std::vector<ExactRational>& values() const { return values_; }
  // All representations of values()[i], ascending amplitude; the first one
  // is the canonical representation.
  const std::vector<BFloat>& reps(size_t i) const { return reps_[i]; }
  size_t size() const { return values_.size(); }

  // Index of the value, if present.
  std::optional<size_t> find(const ExactRational& v) const;
  // The rounding class of x. Throws DomainError when x lies outside the
  // range the universe can answer for.
  std::vector<BFloat> round_class(const ExactRational& x, RoundingMode mode) const;
  // Indices of the distinct values making up the class.
  std::vector<size_t> round_values(const ExactRational& x, RoundingMode mode) const;
  // The nearest set, ignoring the tie-break.
  std::vector<size_t> nearest_values(const ExactRational& x) const;

 private:
  GenericFormat fmt_;
  int64_t e_top_;
  std::vector<ExactRational> values_;
  std::vector<std::vector<BFloat>> reps_;
};

// The full rounding class of x among bounded floats with amplitude at most
// e_top, by brute force.
std::vector<BFloat> ref_round(const ExactRational& x, RoundingMode mode, const GenericFormat& fmt,
                              int64_t e_top);

// Whether v has any bounded representation in fmt (no upper amplitude cap).
bool has_bounded_representation(const ExactRational& v, const GenericFormat& fmt);
// Whether v is n * beta^e for some |n| <= n_max (e >= -e_min required).
bool representable_with_amplitude(const ExactRational& v, int64_t e, const GenericFormat& fmt);

struct TheoremReport {
  std::string tag;
  std::string domain;
  uint64_t trials = 0;
  bool passed = true;
  std::string counterexample;
  // Tags that document a failing algorithm expect result=fail.
  bool expect_failure = false;

  bool ok() const { return passed != expect_failure; }
};

// One line: tag=<id> domain=<desc> trials=<n> result=pass|fail [...].
std::string to_string(const TheoremReport& report);

// Known tags: Thm1 .. Thm14, Sterbenz, TwoSum, ExtDekker-raw3op.
std::vector<std::string> theorem_tags();
// The format a tag sweeps when none is given.
GenericFormat default_format(std::string_view tag);
// The small format a tag sweeps in radix beta: the default for radix 2,
// otherwise the formats of the regression suite. Throws std::invalid_argument
// for beta < 2.
GenericFormat format_for_radix(std::string_view tag, int beta);

constexpr uint64_t kDefaultSeed = 20260101;

// Throws std::invalid_argument for an unknown tag and DomainError when the
// format does not suit the tag or exceeds the enumeration budget.
TheoremReport check_theorem(std::string_view tag, const std::optional<GenericFormat>& fmt = {},
                            uint64_t seed = kDefaultSeed);

// The regression suite: every tag on its designated sweep, Sterbenz on
// radices 2, 3 and 10, and the raw three-operation sum on radices 10 and 4.
std::vector<TheoremReport> check_all(uint64_t seed = kDefaultSeed);

}  // namespace adapt

#endif  // ADAPT_ORACLE_HPP_
