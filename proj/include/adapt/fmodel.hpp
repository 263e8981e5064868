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

// Software model of radix-independent bounded floating point.
//
// A float is any integer pair (n, e) read as n * beta^e. A format fixes the
// radix, the precision and the underflow bound; a float is bounded when
// |n| <= n_max and e >= -e_min. There is no overflow bound: the model is
// unbounded above, so overflow can only arise when converting to hardware.

#ifndef ADAPT_FMODEL_HPP_
#define ADAPT_FMODEL_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "adapt/rational.hpp"

namespace adapt {

// Thrown when an operation leaves the modelled domain (unbounded input,
// overflow on conversion, a violated theorem precondition).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GenericFormat {
 public:
  // beta >= 2, p >= 1, e_min >= 0.
  GenericFormat(int beta, int p, int64_t e_min);

  // Derives e_min = ceil(beta^r / 2) + p - 3 from an exponent field width.
  static GenericFormat FromExponentWidth(int beta, int p, int r);
  static GenericFormat Binary64() { return GenericFormat(2, 53, 1074); }
  static GenericFormat Binary32() { return GenericFormat(2, 24, 149); }

  // "beta=2 p=53 emin=1074" or "beta=2 p=53 r=11"; also "binary64"/"binary32".
  static GenericFormat Parse(std::string_view text);
  std::string to_string() const;

  int beta() const { return beta_; }
  int p() const { return p_; }
  int64_t e_min() const { return e_min_; }
  const BigInt& n_max() const { return n_max_; }
  // beta^(p-1), the smallest normal significand.
  const BigInt& n_min_normal() const { return n_min_normal_; }
  const ExactRational& ulp() const { return ulp_; }

  bool is_binary64() const { return beta_ == 2 && p_ == 53 && e_min_ == 1074; }

  friend bool operator==(const GenericFormat& a, const GenericFormat& b) {
    return a.beta_ == b.beta_ && a.p_ == b.p_ && a.e_min_ == b.e_min_;
  }

 private:
  int beta_;
  int p_;
  int64_t e_min_;
  BigInt n_max_;
  BigInt n_min_normal_;
  ExactRational ulp_;
};

struct BFloat {
  BigInt n = 0;
  int64_t e = 0;

  BFloat() = default;
  BFloat(BigInt n_, int64_t e_) : n(std::move(n_)), e(e_) {}
  BFloat(long n_, int64_t e_) : n(n_), e(e_) {}

  bool is_zero() const { return sgn(n) == 0; }
  int sign() const { return sgn(n); }
  BFloat operator-() const { return BFloat(BigInt(-n), e); }

  // Structural equality of the pair, not of the value.
  friend bool operator==(const BFloat& a, const BFloat& b) {
    return a.e == b.e && a.n == b.n;
  }
};

enum class RoundingMode { kDown, kUp, kTowardZero, kNearestEven };

inline constexpr RoundingMode kAllRoundingModes[] = {
    RoundingMode::kDown, RoundingMode::kUp, RoundingMode::kTowardZero,
    RoundingMode::kNearestEven};

std::string_view ToString(RoundingMode mode);

ExactRational value(const BFloat& f, const GenericFormat& fmt);

bool is_bounded(const BFloat& f, const GenericFormat& fmt);
bool is_normal(const BFloat& f, const GenericFormat& fmt);
bool is_subnormal(const BFloat& f, const GenericFormat& fmt);
bool is_canonical(const BFloat& f, const GenericFormat& fmt);

// Unique normal-or-subnormal equivalent of a bounded float. Zero maps to
// (0, -e_min). Throws DomainError on unbounded input.
BFloat canonicalize(const BFloat& f, const GenericFormat& fmt);

// Canonical representative of the rounding class of x.
BFloat round(const ExactRational& x, RoundingMode mode, const GenericFormat& fmt);

// Rounds the exact value of an arbitrary (possibly unbounded) pair. This is
// the fast path used by the arithmetic operations below; it agrees with
// round(value(f)).
BFloat round_pair(const BFloat& exact, RoundingMode mode, const GenericFormat& fmt);

// Rounded arithmetic. Every result is the canonical member of the rounding
// class of the exact result.
BFloat add(const BFloat& a, const BFloat& b, const GenericFormat& fmt,
           RoundingMode mode = RoundingMode::kNearestEven);
BFloat sub(const BFloat& a, const BFloat& b, const GenericFormat& fmt,
           RoundingMode mode = RoundingMode::kNearestEven);
BFloat mul(const BFloat& a, const BFloat& b, const GenericFormat& fmt,
           RoundingMode mode = RoundingMode::kNearestEven);
BFloat div(const BFloat& a, const BFloat& b, const GenericFormat& fmt,
           RoundingMode mode = RoundingMode::kNearestEven);

// Exact (unrounded) pair arithmetic; results are generally unbounded.
BFloat exact_add(const BFloat& a, const BFloat& b, int beta);
BFloat exact_mul(const BFloat& a, const BFloat& b);

// Three-way comparison of values (a < b: -1).
int compare_values(const BFloat& a, const BFloat& b, int beta);
int compare_magnitudes(const BFloat& a, const BFloat& b, int beta);

// Rounding class membership: f is bounded and value-equal to round(x).
bool in_rounding_class(const BFloat& f, const ExactRational& x, RoundingMode mode,
                       const GenericFormat& fmt);

// Largest amplitude of a bounded representation of v, if v has one.
std::optional<int64_t> max_bounded_amplitude(const ExactRational& v,
                                             const GenericFormat& fmt);
// Whether v has a bounded representation with amplitude exactly e.
bool representable_at(const ExactRational& v, int64_t e, const GenericFormat& fmt);
// The same value as f written with amplitude e, if that pair is bounded.
std::optional<BFloat> with_amplitude(const BFloat& f, int64_t e, const GenericFormat& fmt);
// All bounded representations of a value, ordered by amplitude; empty when
// the value has none. Zero yields (0, e) for e in [-e_min, e_cap].
std::vector<BFloat> bounded_representations(const ExactRational& v,
                                            const GenericFormat& fmt,
                                            int64_t e_cap);

// Checks the nearest-rounding error bound |x - f| <= beta^e/2 when f is a
// nearest float of x, and that every bounded representation (n', e') of a
// nonzero error x - f has e' < f.e (any rounding). Returns true when every
// applicable claim holds.
bool round_error_amplitude_bound(const ExactRational& x, const BFloat& f,
                                 const GenericFormat& fmt);

// Every canonical bounded float with amplitude in [-e_min, e_top], once,
// ordered by amplitude then significand (zero first). Throws DomainError
// when the count would exceed `budget`.
std::vector<BFloat> enumerate_bounded(const GenericFormat& fmt, int64_t e_top,
                                      size_t budget = 1u << 22);
// Every bounded pair (canonical or not) with amplitude in [-e_min, e_top].
std::vector<BFloat> enumerate_representations(const GenericFormat& fmt,
                                              int64_t e_top,
                                              size_t budget = 1u << 22);

// Number of base-beta digits of |n| (0 for n = 0).
int64_t digit_count(const BigInt& n, int beta);

// binary64 bridge through the IEEE bit fields.
BFloat from_double(double d);
double to_double(const BFloat& f);  // throws DomainError on overflow/unbounded

// "(n,e)" text form and, for beta = 2, hex-float literals.
std::string to_string(const BFloat& f);
std::string to_hex_string(const BFloat& f);
// Accepts either form; hex literals require beta = 2.
BFloat parse_bfloat(std::string_view text, const GenericFormat& fmt);

}  // namespace adapt

#endif  // ADAPT_FMODEL_HPP_
