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

#include "adapt/backend.hpp"

#include <cfenv>
#include <stdexcept>

namespace adapt {

SmallBinaryBackend::SmallBinaryBackend(int p, int64_t e_min)
    : fmt_(2, p, e_min), p_(p), e_min_(e_min) {
  if (p < 2 || p > 26) throw DomainError("SmallBinaryBackend: precision must be in [2, 26]");
  if (e_min > 900) throw DomainError("SmallBinaryBackend: e_min too large for doubles");
}

int64_t SmallBinaryBackend::canonical_exponent(double x) const {
  if (x == 0) return kZeroAmplitude;
  int k = 0;
  std::frexp(x, &k);
  return std::max<int64_t>(k - p_, -e_min_);
}

bool SmallBinaryBackend::representable_at(double x, int64_t e) const {
  if (e < -e_min_) return false;
  if (x == 0) return true;
  double n = std::ldexp(x, static_cast<int>(-e));
  return n == std::trunc(n) && std::fabs(n) <= std::ldexp(1.0, p_) - 1;
}

double SmallBinaryBackend::round_exact(double x) const {
  if (x == 0 || !std::isfinite(x)) return x;
  int64_t t = canonical_exponent(x);
  // rint honours the current mode, which is round-to-nearest-even.
  return std::ldexp(std::rint(std::ldexp(x, static_cast<int>(-t))), static_cast<int>(t));
}

double SmallBinaryBackend::add(double a, double b) const {
  auto [s, err] = adapt::two_sum(a, b);
  if (err != 0) throw std::logic_error("SmallBinaryBackend: sum is not exact in double");
  return round_exact(s);
}

EftPair<double> SmallBinaryBackend::two_sum(double a, double b) const {
  double s = add(a, b);
  double bb = sub(s, a);
  double aa = sub(s, bb);
  double db = sub(b, bb);
  double da = sub(a, aa);
  return {s, add(da, db)};
}

EftPair<double> SmallBinaryBackend::fast_two_sum(double a, int64_t ea, double b,
                                                 int64_t eb) const {
  if (a != 0 && eb > ea) throw DomainError("fast_two_sum: requires e_b <= e_a");
  if (!representable_at(a, ea) || !representable_at(b, eb))
    throw DomainError("fast_two_sum: amplitude is not a bounded representation");
  double s = add(a, b);
  double z = sub(s, a);
  return {s, sub(b, z)};
}

EftPair<double> SmallBinaryBackend::two_product(double a, double b) const {
  if (a == 0 || b == 0) return {a * b, 0.0};
  auto max_amp = [&](double x) {
    int64_t e = canonical_exponent(x);
    while (representable_at(x, e + 1)) ++e;
    return e;
  };
  if (max_amp(a) + max_amp(b) < -e_min_ + p_)
    throw DomainError("two_product: underflow guard e_a + e_b >= -e_min + p violated");
  double x = a * b;  // exact: at most 52 significant bits
  double hi = round_exact(x);
  return {hi, round_exact(x - hi)};
}

double SmallBinaryBackend::divide(double a, double b) const {
  if (b == 0) throw DomainError("divide: zero divisor");
  return round(to_rational(a) / to_rational(b));
}

double SmallBinaryBackend::from_bfloat(const BFloat& f) const {
  return to_double(canonicalize(f, fmt_));
}

double SmallBinaryBackend::round(const ExactRational& x) const {
  return to_double(adapt::round(x, RoundingMode::kNearestEven, fmt_));
}

std::string SmallBinaryBackend::to_text(double x) const { return to_hex_string(from_double(x)); }

}  // namespace adapt
