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

// Arithmetic backends for the stream pipelines. The pipelines are templates
// over a backend so the same code runs on hardware doubles and on the
// software model of any radix-2 format.

#ifndef ADAPT_BACKEND_HPP_
#define ADAPT_BACKEND_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "adapt/eft.hpp"
#include "adapt/fmodel.hpp"

namespace adapt {

// Amplitude used for zero, which is representable at every amplitude.
inline constexpr int64_t kZeroAmplitude = std::numeric_limits<int32_t>::max();

namespace internal {

// |b| + n_max 2^ec <= n_max 2^ea with n_max = 2^p - 1, for a nonzero double
// b written with amplitude eb and ea >= eb >= ec. When eb < ea the test
// always holds: |b| + n_max 2^ec <= n_max (2^(ea-1) + 2^ec).
inline bool EarlyExitBinary(double b, int64_t eb, int64_t ea, int64_t ec, int p) {
  if (eb < ea) return true;
  int64_t d = ea - ec;
  if (d == 0) return false;
  const uint64_t n_max = (uint64_t{1} << p) - 1;
  auto nb = static_cast<uint64_t>(std::ldexp(std::fabs(b), static_cast<int>(-eb)));
  if (nb >= n_max) return false;
  if (d >= 64) return true;
  return (static_cast<unsigned __int128>(n_max - nb) << d) >= n_max;
}

}  // namespace internal

class Binary64Backend {
 public:
  using value_type = double;

  const GenericFormat& format() const { return fmt_; }
  int p() const { return 53; }

  static bool is_zero(double x) { return x == 0; }
  static double negate(double x) { return -x; }
  static int sign(double x) { return (x > 0) - (x < 0); }
  static int compare_magnitude(double x, double y) {
    double ax = std::fabs(x), ay = std::fabs(y);
    return (ax > ay) - (ax < ay);
  }
  static int64_t canonical_exponent(double x) {
    return x == 0 ? kZeroAmplitude : adapt::canonical_exponent(x);
  }
  static bool representable_at(double x, int64_t e) { return adapt::representable_at(x, e); }

  static EftPair<double> two_sum(double a, double b) { return adapt::two_sum(a, b); }
  static EftPair<double> fast_two_sum(double a, int64_t ea, double b, int64_t eb) {
    return adapt::fast_two_sum(a, ea, b, eb);
  }
  static EftPair<double> two_product(double a, double b) { return adapt::two_product(a, b); }
  // |b| + n_max 2^ec <= n_max 2^ea for nonzero b written with amplitude
  // eb, given ea >= eb >= ec.
  static bool early_exit(double b, int64_t eb, int64_t ea, int64_t ec) {
    return internal::EarlyExitBinary(b, eb, ea, ec, 53);
  }
  static double divide(double a, double b) {
    double q = a / b;
    if (!std::isfinite(q)) throw DomainError("divide: overflow or zero divisor");
    return q;
  }

  // x * 2^k; exact unless it leaves the normal range.
  static double scale2(double x, int64_t k) { return std::ldexp(x, static_cast<int>(k)); }
  static ExactRational to_rational(double x) { return ExactRational::FromDouble(x); }
  static BFloat to_bfloat(double x) { return from_double(x); }
  double from_bfloat(const BFloat& f) const { return to_double(canonicalize(f, fmt_)); }
  // Nearest double; throws DomainError on overflow.
  double round(const ExactRational& x) const {
    return to_double(adapt::round(x, RoundingMode::kNearestEven, fmt_));
  }
  static std::string to_text(double x) { return to_hex_string(from_double(x)); }

 private:
  GenericFormat fmt_ = GenericFormat::Binary64();
};

// The software model. Values are kept canonical.
class ModelBackend {
 public:
  using value_type = BFloat;

  explicit ModelBackend(GenericFormat fmt) : fmt_(std::move(fmt)) {}

  const GenericFormat& format() const { return fmt_; }
  int p() const { return fmt_.p(); }

  static bool is_zero(const BFloat& x) { return x.is_zero(); }
  static BFloat negate(const BFloat& x) { return -x; }
  static int sign(const BFloat& x) { return x.sign(); }
  int compare_magnitude(const BFloat& x, const BFloat& y) const {
    return compare_magnitudes(x, y, fmt_.beta());
  }
  int64_t canonical_exponent(const BFloat& x) const {
    return x.is_zero() ? kZeroAmplitude : canonicalize(x, fmt_).e;
  }
  bool representable_at(const BFloat& x, int64_t e) const {
    if (e < -fmt_.e_min()) return false;
    return x.is_zero() || with_amplitude(x, e, fmt_).has_value();
  }

  EftPair<BFloat> two_sum(const BFloat& a, const BFloat& b) const {
    return Canon(adapt::two_sum(a, b, fmt_));
  }
  EftPair<BFloat> fast_two_sum(const BFloat& a, int64_t ea, const BFloat& b, int64_t eb) const {
    return Canon(adapt::fast_two_sum(At(a, ea), At(b, eb), fmt_));
  }
  EftPair<BFloat> two_product(const BFloat& a, const BFloat& b) const {
    return Canon(adapt::two_product(a, b, fmt_));
  }
  bool early_exit(const BFloat& b, int64_t, int64_t ea, int64_t ec) const {
    const int beta = fmt_.beta();
    ExactRational nmax(fmt_.n_max());
    return value(b, fmt_).abs() + nmax * ExactRational::Power(beta, ec) <=
           nmax * ExactRational::Power(beta, ea);
  }
  BFloat divide(const BFloat& a, const BFloat& b) const {
    if (b.is_zero()) throw DomainError("divide: zero divisor");
    return canonicalize(div(a, b, fmt_), fmt_);
  }

  // x * 2^k rounded to the format (radix 2).
  BFloat scale2(const BFloat& x, int64_t k) const {
    return canonicalize(round_pair(BFloat(x.n, x.e + k), RoundingMode::kNearestEven, fmt_), fmt_);
  }
  ExactRational to_rational(const BFloat& x) const { return value(x, fmt_); }
  static BFloat to_bfloat(const BFloat& x) { return x; }
  BFloat from_bfloat(const BFloat& f) const { return canonicalize(f, fmt_); }
  BFloat round(const ExactRational& x) const {
    return canonicalize(adapt::round(x, RoundingMode::kNearestEven, fmt_), fmt_);
  }
  std::string to_text(const BFloat& x) const {
    return fmt_.beta() == 2 ? to_hex_string(x) : to_string(x);
  }

 private:
  EftPair<BFloat> Canon(EftPair<BFloat> r) const {
    return {canonicalize(r.hi, fmt_), canonicalize(r.lo, fmt_)};
  }
  // The representation of x with amplitude e; e = kZeroAmplitude on a zero
  // stands for "any", which becomes the top of the window.
  BFloat At(const BFloat& x, int64_t e) const {
    if (x.is_zero()) return BFloat(BigInt(0), e == kZeroAmplitude ? -fmt_.e_min() : e);
    auto r = with_amplitude(x, e, fmt_);
    if (!r) throw DomainError("amplitude is not a bounded representation");
    return *r;
  }

  GenericFormat fmt_;
};

// A fast stand-in for the model on small radix-2 formats (p <= 26): values
// are doubles and every operation is the exact double result rounded to p
// bits. Exhaustive sweeps use it; tests pin it to the model. Sums must stay
// exact in double, which holds while operand amplitudes differ by less than
// 53 - p; a violation throws std::logic_error.
class SmallBinaryBackend {
 public:
  using value_type = double;

  SmallBinaryBackend(int p, int64_t e_min);

  const GenericFormat& format() const { return fmt_; }
  int p() const { return p_; }

  static bool is_zero(double x) { return x == 0; }
  static double negate(double x) { return -x; }
  static int sign(double x) { return (x > 0) - (x < 0); }
  static int compare_magnitude(double x, double y) {
    return Binary64Backend::compare_magnitude(x, y);
  }
  int64_t canonical_exponent(double x) const;
  bool representable_at(double x, int64_t e) const;
  bool early_exit(double b, int64_t eb, int64_t ea, int64_t ec) const {
    return internal::EarlyExitBinary(b, eb, ea, ec, p_);
  }

  // Nearest-even rounding of an exact double to the format.
  double round_exact(double x) const;
  double add(double a, double b) const;
  double sub(double a, double b) const { return add(a, -b); }

  EftPair<double> two_sum(double a, double b) const;
  EftPair<double> fast_two_sum(double a, int64_t ea, double b, int64_t eb) const;
  EftPair<double> two_product(double a, double b) const;
  double divide(double a, double b) const;
  double scale2(double x, int64_t k) const { return round_exact(std::ldexp(x, static_cast<int>(k))); }

  static ExactRational to_rational(double x) { return ExactRational::FromDouble(x); }
  static BFloat to_bfloat(double x) { return from_double(x); }
  double from_bfloat(const BFloat& f) const;
  double round(const ExactRational& x) const;
  std::string to_text(double x) const;

 private:
  GenericFormat fmt_;
  int p_;
  int64_t e_min_;
};

}  // namespace adapt

#endif  // ADAPT_BACKEND_HPP_
