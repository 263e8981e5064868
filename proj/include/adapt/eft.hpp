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

// Error-free transformations. Each returns a pair (hi, lo) with
// hi = round-to-nearest-even of the exact result and hi + lo equal to the
// exact result. Two flavours exist: over the software model for any format,
// and over hardware binary64.

#ifndef ADAPT_EFT_HPP_
#define ADAPT_EFT_HPP_

#include <cstdint>

#include "adapt/fmodel.hpp"

namespace adapt {

template <class V>
struct EftPair {
  V hi;
  V lo;
};

// --- Software model -------------------------------------------------------

// x - y, exact when y/2 <= x <= 2y. Throws DomainError otherwise.
BFloat sterbenz_exact(const BFloat& x, const BFloat& y, const GenericFormat& fmt);

// Six-operation exact sum; every step rounded to nearest even.
EftPair<BFloat> two_sum(const BFloat& a, const BFloat& b, const GenericFormat& fmt);

// Three-operation exact sum. Requires radix 2 or 3 and e_b <= e_a on the
// representations passed in; throws DomainError otherwise.
EftPair<BFloat> fast_two_sum(const BFloat& a, const BFloat& b, const GenericFormat& fmt);

// The bare three-operation sequence without any precondition check. Used to
// reproduce the radix-4 and radix-10 failures.
EftPair<BFloat> fast_two_sum_unchecked(const BFloat& a, const BFloat& b,
                                       const GenericFormat& fmt);

// Exact product. Requires e_a + e_b >= -e_min + p for the given
// representations. lo is returned with amplitude canonical(hi).e - p.
// Radix 2 uses the Veltkamp/Dekker split (7 mul, 5 add, 5 sub); other
// radices use the fused path.
EftPair<BFloat> two_product(const BFloat& a, const BFloat& b, const GenericFormat& fmt);
// hi = round(a*b); lo = exact a*b - hi as one correctly rounded step.
EftPair<BFloat> two_product_fused(const BFloat& a, const BFloat& b,
                                  const GenericFormat& fmt);

// Radix 2 only: when x + y is inexact, |x (+) y| >= max(|x|,|y|)/2; and for a
// nonzero rounded sum s, |x + y - s| <= |s| ulp/2 <= max(|x|,|y|) ulp.
bool plus_lower_bound_check(const BFloat& x, const BFloat& y, const GenericFormat& fmt);

// --- Hardware binary64 -----------------------------------------------------

// Amplitude of the canonical decomposition (-1074 for zero and subnormals).
int64_t canonical_exponent(double x);
// Largest amplitude of a bounded representation (trailing zeros stripped).
int64_t max_exponent(double x);
// Whether x = n * 2^e with |n| <= 2^53 - 1 and e >= -1074.
bool representable_at(double x, int64_t e);

EftPair<double> two_sum(double a, double b);
// Checks that some pair of representations has e_b <= e_a; a zero operand is
// representable at every amplitude and never violates the precondition.
EftPair<double> fast_two_sum(double a, double b);
// Same with caller-supplied representation amplitudes, which must be valid.
EftPair<double> fast_two_sum(double a, int64_t ea, double b, int64_t eb);
// Dekker product with the Veltkamp split.
EftPair<double> two_product(double a, double b);
// std::fma path.
EftPair<double> two_product_fma(double a, double b);

}  // namespace adapt

#endif  // ADAPT_EFT_HPP_
