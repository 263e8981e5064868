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

// Expansions are unevaluated sums of floats, most significant first.
// A plain expansion is non-overlapping. A pseudo-expansion only promises
// |x[i+1]| <= eps |x[i]| for some eps < 1/2, which is what the streaming
// operators produce.

#ifndef ADAPT_EXPANSION_HPP_
#define ADAPT_EXPANSION_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adapt/fmodel.hpp"

namespace adapt {

struct Expansion {
  std::vector<BFloat> components;
};

struct PseudoExpansion {
  std::vector<BFloat> components;
  ExactRational epsilon;
};

// Zero components are allowed anywhere and skipped by the chain checks.
bool validate(const Expansion& x, const GenericFormat& fmt);
// Also requires 0 < epsilon < 1/2.
bool validate(const PseudoExpansion& x, const GenericFormat& fmt);

ExactRational value_of(const std::vector<BFloat>& components, const GenericFormat& fmt);
inline ExactRational value_of(const Expansion& x, const GenericFormat& fmt) {
  return value_of(x.components, fmt);
}
inline ExactRational value_of(const PseudoExpansion& x, const GenericFormat& fmt) {
  return value_of(x.components, fmt);
}

// eps/(1-eps) * |x[i]|, a bound on |sum of x[j] for j > i|. Throws
// std::out_of_range for a bad index.
ExactRational tail_bound(const PseudoExpansion& x, size_t i, const GenericFormat& fmt);

// Builds a pseudo-expansion from components whose tails satisfy
// |sum_{j>i} x[j]| <= lambda |x[i]|; eps = lambda/(1-lambda). Requires
// 0 < lambda < 1/3 so that eps < 1/2. Zero components are dropped.
PseudoExpansion from_tail_bound(std::vector<BFloat> components, const ExactRational& lambda);

// Exact conversion to a non-overlapping expansion with no zero components.
// Radix 2 only.
Expansion renormalize(const PseudoExpansion& x, const GenericFormat& fmt);

// Text form: optional "eps=<p>/<q>" header, then components separated by
// whitespace, each "(n,e)" or a hex-float literal.
struct ParsedExpansion {
  std::vector<BFloat> components;
  std::optional<ExactRational> epsilon;
};
ParsedExpansion parse_expansion(std::string_view text, const GenericFormat& fmt);
std::string serialize(const std::vector<BFloat>& components,
                      const std::optional<ExactRational>& epsilon = std::nullopt,
                      bool hex = false);

}  // namespace adapt

#endif  // ADAPT_EXPANSION_HPP_
