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

#include "adapt/eft.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace adapt {

namespace {

void RequireBounded(const BFloat& f, const GenericFormat& fmt, const char* what) {
  if (!is_bounded(f, fmt)) throw DomainError(std::string(what) + ": operand is not bounded");
}

EftPair<BFloat> FinishProduct(const BFloat& hi, const BFloat& lo_canonical,
                              const GenericFormat& fmt) {
  if (hi.is_zero()) return {hi, BFloat(BigInt(0), -fmt.e_min())};
  // An exact product can sit low enough that e - p falls under -e_min; a
  // zero error term is then reported at the smallest amplitude.
  if (lo_canonical.is_zero())
    return {hi, BFloat(BigInt(0), std::max<int64_t>(hi.e - fmt.p(), -fmt.e_min()))};
  auto lo = with_amplitude(lo_canonical, hi.e - fmt.p(), fmt);
  if (!lo) throw DomainError("two_product: error term has no bounded form at amplitude e - p");
  return {hi, *lo};
}

void CheckProductGuard(const BFloat& a, const BFloat& b, const GenericFormat& fmt) {
  RequireBounded(a, fmt, "two_product");
  RequireBounded(b, fmt, "two_product");
  if (a.e + b.e < -fmt.e_min() + fmt.p())
    throw DomainError("two_product: underflow guard e_a + e_b >= -e_min + p violated");
}

}  // namespace

BFloat sterbenz_exact(const BFloat& x, const BFloat& y, const GenericFormat& fmt) {
  RequireBounded(x, fmt, "sterbenz_exact");
  RequireBounded(y, fmt, "sterbenz_exact");
  const int beta = fmt.beta();
  // y/2 <= x <= 2y, compared exactly as 2x >= y and x <= 2y.
  BFloat two_x = exact_mul(x, BFloat(2, 0));
  BFloat two_y = exact_mul(y, BFloat(2, 0));
  if (compare_values(two_x, y, beta) < 0 || compare_values(x, two_y, beta) > 0)
    throw DomainError("sterbenz_exact: requires y/2 <= x <= 2y");
  BFloat d = sub(x, y, fmt);
  if (compare_values(d, exact_add(x, -y, beta), beta) != 0)
    throw std::logic_error("sterbenz_exact: rounded difference is inexact");
  return d;
}

EftPair<BFloat> two_sum(const BFloat& a, const BFloat& b, const GenericFormat& fmt) {
  RequireBounded(a, fmt, "two_sum");
  RequireBounded(b, fmt, "two_sum");
  BFloat s = add(a, b, fmt);
  BFloat bb = sub(s, a, fmt);
  BFloat aa = sub(s, bb, fmt);
  BFloat db = sub(b, bb, fmt);
  BFloat da = sub(a, aa, fmt);
  BFloat t = add(da, db, fmt);
  return {s, t};
}

EftPair<BFloat> fast_two_sum_unchecked(const BFloat& a, const BFloat& b,
                                       const GenericFormat& fmt) {
  BFloat s = add(a, b, fmt);
  BFloat z = sub(s, a, fmt);
  BFloat t = sub(b, z, fmt);
  return {s, t};
}

EftPair<BFloat> fast_two_sum(const BFloat& a, const BFloat& b, const GenericFormat& fmt) {
  RequireBounded(a, fmt, "fast_two_sum");
  RequireBounded(b, fmt, "fast_two_sum");
  if (fmt.beta() != 2 && fmt.beta() != 3)
    throw DomainError("fast_two_sum: only radix 2 and 3 are supported");
  if (b.e > a.e) throw DomainError("fast_two_sum: requires e_b <= e_a");
  return fast_two_sum_unchecked(a, b, fmt);
}

EftPair<BFloat> two_product_fused(const BFloat& a, const BFloat& b,
                                  const GenericFormat& fmt) {
  CheckProductGuard(a, b, fmt);
  BFloat hi = mul(a, b, fmt);
  BFloat lo = round_pair(exact_add(exact_mul(a, b), -hi, fmt.beta()),
                         RoundingMode::kNearestEven, fmt);
  return FinishProduct(hi, lo, fmt);
}

EftPair<BFloat> two_product(const BFloat& a, const BFloat& b, const GenericFormat& fmt) {
  if (fmt.beta() != 2 || fmt.p() < 2) return two_product_fused(a, b, fmt);
  CheckProductGuard(a, b, fmt);
  const BFloat split_factor(BigInt(IntPow(2, static_cast<unsigned long>((fmt.p() + 1) / 2)) + 1), 0);
  auto split = [&](const BFloat& v) {
    BFloat c = mul(split_factor, v, fmt);
    BFloat big = sub(c, v, fmt);
    BFloat h = sub(c, big, fmt);
    BFloat l = sub(v, h, fmt);
    return EftPair<BFloat>{h, l};
  };
  BFloat x = mul(a, b, fmt);
  auto [ah, al] = split(a);
  auto [bh, bl] = split(b);
  BFloat e1 = sub(x, mul(ah, bh, fmt), fmt);
  BFloat e2 = sub(e1, mul(al, bh, fmt), fmt);
  BFloat e3 = sub(e2, mul(ah, bl, fmt), fmt);
  BFloat y = sub(mul(al, bl, fmt), e3, fmt);
  return FinishProduct(x, y, fmt);
}

bool plus_lower_bound_check(const BFloat& x, const BFloat& y, const GenericFormat& fmt) {
  if (fmt.beta() != 2) throw DomainError("plus_lower_bound_check: radix 2 only");
  ExactRational vx = value(x, fmt), vy = value(y, fmt);
  ExactRational exact = vx + vy;
  ExactRational s = value(add(x, y, fmt), fmt);
  ExactRational m = max(vx.abs(), vy.abs());
  bool ok = exact == s || s.abs() >= m / 2;
  if (!s.is_zero()) {
    ExactRational half_ulp = s.abs() * fmt.ulp() / 2;
    ok = ok && (exact - s).abs() <= half_ulp && half_ulp <= m * fmt.ulp();
  }
  return ok;
}

// --- binary64 ---------------------------------------------------------------

int64_t canonical_exponent(double x) {
  if (x == 0) return -1074;
  int k = 0;
  std::frexp(x, &k);
  return std::max<int64_t>(k - 53, -1074);
}

int64_t max_exponent(double x) {
  if (x == 0) return std::numeric_limits<int32_t>::max();
  int64_t e = canonical_exponent(x);
  auto n = static_cast<uint64_t>(std::fabs(std::ldexp(x, static_cast<int>(-e))));
  return e + std::countr_zero(n);
}

bool representable_at(double x, int64_t e) {
  if (e < -1074) return false;
  if (x == 0) return true;
  return canonical_exponent(x) <= e && e <= max_exponent(x);
}

EftPair<double> two_sum(double a, double b) {
  double s = a + b;
  if (!std::isfinite(s)) throw DomainError("two_sum: overflow");
  double bb = s - a;
  double aa = s - bb;
  double db = b - bb;
  double da = a - aa;
  return {s, da + db};
}

EftPair<double> fast_two_sum(double a, double b) {
  if (a != 0 && b != 0 && canonical_exponent(b) > max_exponent(a))
    throw DomainError("fast_two_sum: requires e_b <= e_a");
  double s = a + b;
  if (!std::isfinite(s)) throw DomainError("fast_two_sum: overflow");
  double z = s - a;
  return {s, b - z};
}

EftPair<double> fast_two_sum(double a, int64_t ea, double b, int64_t eb) {
  if (a != 0 && eb > ea) throw DomainError("fast_two_sum: requires e_b <= e_a");
  if (!representable_at(a, ea) || !representable_at(b, eb))
    throw DomainError("fast_two_sum: amplitude is not a bounded representation");
  double s = a + b;
  if (!std::isfinite(s)) throw DomainError("fast_two_sum: overflow");
  double z = s - a;
  return {s, b - z};
}

namespace {

void CheckProductGuard(double a, double b) {
  if (a == 0 || b == 0) return;
  if (max_exponent(a) + max_exponent(b) < -1074 + 53)
    throw DomainError("two_product: underflow guard e_a + e_b >= -e_min + p violated");
}

}  // namespace

EftPair<double> two_product(double a, double b) {
  CheckProductGuard(a, b);
  double x = a * b;
  if (!std::isfinite(x)) throw DomainError("two_product: overflow");
  if (a == 0 || b == 0) return {x, 0.0};
  constexpr double kSplit = 134217729.0;  // 2^27 + 1
  auto split = [](double v) {
    double c = kSplit * v;
    double big = c - v;
    double h = c - big;
    return EftPair<double>{h, v - h};
  };
  auto [ah, al] = split(a);
  auto [bh, bl] = split(b);
  double y = al * bl - (((x - ah * bh) - al * bh) - ah * bl);
  return {x, y};
}

EftPair<double> two_product_fma(double a, double b) {
  CheckProductGuard(a, b);
  double x = a * b;
  if (!std::isfinite(x)) throw DomainError("two_product: overflow");
  return {x, std::fma(a, b, -x)};
}

}  // namespace adapt
