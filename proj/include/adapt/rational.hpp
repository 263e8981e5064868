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

#ifndef ADAPT_RATIONAL_HPP_
#define ADAPT_RATIONAL_HPP_

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace adapt {

using BigInt = mpz_class;

// Exact rational number in canonical reduced form (denominator > 0).
// This is the ground-truth value type: every theorem check and every
// certified bound is expressed with it.
class ExactRational {
 public:
  ExactRational() = default;
  ExactRational(long v) : q_(v) {}  // NOLINT(runtime/explicit)
  ExactRational(int v) : q_(v) {}   // NOLINT(runtime/explicit)
  ExactRational(const BigInt& v) : q_(v) {}  // NOLINT(runtime/explicit)
  ExactRational(const BigInt& num, const BigInt& den);
  explicit ExactRational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  // Exact value of a finite double. Throws std::domain_error on inf/nan.
  static ExactRational FromDouble(double d);

  // Parses "p", "p/q", decimal "[-]123.456[e[+-]7]" or a hex-float
  // literal "[-]0x1.8p-3". Throws std::invalid_argument.
  static ExactRational Parse(std::string_view text);

  // b^k for any integer k.
  static ExactRational Power(long base, long exponent);

  BigInt num() const { return q_.get_num(); }
  BigInt den() const { return q_.get_den(); }
  const mpq_class& raw() const { return q_; }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }

  ExactRational abs() const { return ExactRational(::abs(q_)); }
  ExactRational operator-() const { return ExactRational(mpq_class(-q_)); }

  ExactRational& operator+=(const ExactRational& o) { q_ += o.q_; return *this; }
  ExactRational& operator-=(const ExactRational& o) { q_ -= o.q_; return *this; }
  ExactRational& operator*=(const ExactRational& o) { q_ *= o.q_; return *this; }
  ExactRational& operator/=(const ExactRational& o);

  friend ExactRational operator+(ExactRational a, const ExactRational& b) { return a += b; }
  friend ExactRational operator-(ExactRational a, const ExactRational& b) { return a -= b; }
  friend ExactRational operator*(ExactRational a, const ExactRational& b) { return a *= b; }
  friend ExactRational operator/(ExactRational a, const ExactRational& b) { return a /= b; }

  friend bool operator==(const ExactRational& a, const ExactRational& b) {
    return a.q_ == b.q_;
  }
  friend std::strong_ordering operator<=>(const ExactRational& a,
                                          const ExactRational& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater
                          : std::strong_ordering::equal);
  }

  // Floor and ceiling as integers.
  BigInt floor() const;
  BigInt ceil() const;

  // Nearest double (round-to-nearest-even via GMP + correction); used
  // only for display.
  double to_double() const { return q_.get_d(); }

  // "p/q" or "p" when integral.
  std::string to_string() const;
  // Decimal rendering with `digits` significant fraction digits (truncated).
  std::string to_decimal(int digits) const;

 private:
  mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const ExactRational& r);

inline ExactRational min(const ExactRational& a, const ExactRational& b) {
  return a < b ? a : b;
}
inline ExactRational max(const ExactRational& a, const ExactRational& b) {
  return a < b ? b : a;
}

// Integer helpers shared by the float model.
BigInt IntPow(long base, unsigned long exponent);

}  // namespace adapt

#endif  // ADAPT_RATIONAL_HPP_
