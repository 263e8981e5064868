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

#include "adapt/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace adapt {

namespace {

int HexDigit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

[[noreturn]] void BadLiteral(std::string_view text) {
  throw std::invalid_argument("malformed number: '" + std::string(text) + "'");
}

long ParseExponent(std::string_view text, std::string_view whole) {
  if (text.empty()) BadLiteral(whole);
  bool neg = false;
  size_t i = 0;
  if (text[0] == '+' || text[0] == '-') {
    neg = text[0] == '-';
    ++i;
  }
  if (i == text.size()) BadLiteral(whole);
  long v = 0;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) BadLiteral(whole);
    v = v * 10 + (text[i] - '0');
    if (v > 100000000) BadLiteral(whole);
  }
  return neg ? -v : v;
}

}  // namespace

BigInt IntPow(long base, unsigned long exponent) {
  BigInt r;
  BigInt b = base;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), exponent);
  return r;
}

ExactRational::ExactRational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

ExactRational& ExactRational::operator/=(const ExactRational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  q_ /= o.q_;
  return *this;
}

ExactRational ExactRational::FromDouble(double d) {
  if (!std::isfinite(d)) throw std::domain_error("non-finite double");
  if (d == 0) return ExactRational();
  int exp = 0;
  double m = std::frexp(d, &exp);  // d = m * 2^exp, 0.5 <= |m| < 1
  // 2^53 * m is an exact integer for every finite double.
  auto mant = static_cast<long long>(std::ldexp(m, 53));
  BigInt n = static_cast<long>(mant);
  return ExactRational(n) * Power(2, exp - 53);
}

ExactRational ExactRational::Power(long base, long exponent) {
  if (base == 0 && exponent < 0) throw std::domain_error("0^negative");
  BigInt p = IntPow(base, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0) return ExactRational(p);
  return ExactRational(BigInt(1), p);
}

ExactRational ExactRational::Parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) BadLiteral(text);
  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) BadLiteral(text);
  ExactRational out;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    // Hexadecimal significand, binary exponent.
    s.remove_prefix(2);
    BigInt n = 0;
    long frac_digits = 0;
    bool seen_point = false, any = false;
    size_t i = 0;
    for (; i < s.size(); ++i) {
      char c = s[i];
      if (c == '.') {
        if (seen_point) BadLiteral(text);
        seen_point = true;
        continue;
      }
      int d = HexDigit(c);
      if (d < 0) break;
      n = n * 16 + d;
      any = true;
      if (seen_point) ++frac_digits;
    }
    if (!any) BadLiteral(text);
    long exp = 0;
    if (i < s.size()) {
      if (s[i] != 'p' && s[i] != 'P') BadLiteral(text);
      exp = ParseExponent(s.substr(i + 1), text);
    }
    out = ExactRational(n) * Power(2, exp - 4 * frac_digits);
  } else if (s.find('/') != std::string_view::npos) {
    size_t slash = s.find('/');
    std::string a(s.substr(0, slash)), b(s.substr(slash + 1));
    if (a.empty() || b.empty()) BadLiteral(text);
    for (char c : a) if (!std::isdigit(static_cast<unsigned char>(c))) BadLiteral(text);
    for (char c : b) if (!std::isdigit(static_cast<unsigned char>(c))) BadLiteral(text);
    out = ExactRational(BigInt(a), BigInt(b));
  } else {
    BigInt n = 0;
    long frac_digits = 0;
    bool seen_point = false, any = false;
    size_t i = 0;
    for (; i < s.size(); ++i) {
      char c = s[i];
      if (c == '.') {
        if (seen_point) BadLiteral(text);
        seen_point = true;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(c))) break;
      n = n * 10 + (c - '0');
      any = true;
      if (seen_point) ++frac_digits;
    }
    if (!any) BadLiteral(text);
    long exp = 0;
    if (i < s.size()) {
      if (s[i] != 'e' && s[i] != 'E') BadLiteral(text);
      exp = ParseExponent(s.substr(i + 1), text);
    }
    out = ExactRational(n) * Power(10, exp - frac_digits);
  }
  return neg ? -out : out;
}

BigInt ExactRational::floor() const {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

BigInt ExactRational::ceil() const {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

std::string ExactRational::to_string() const { return q_.get_str(); }

std::string ExactRational::to_decimal(int digits) const {
  ExactRational a = abs();
  BigInt ip = a.floor();
  ExactRational frac = a - ExactRational(ip);
  std::string out = (sign() < 0 ? "-" : "") + ip.get_str();
  if (digits > 0) {
    out += '.';
    for (int i = 0; i < digits; ++i) {
      frac *= 10;
      BigInt d = frac.floor();
      out += static_cast<char>('0' + d.get_si());
      frac -= ExactRational(d);
    }
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const ExactRational& r) {
  return os << r.to_string();
}

}  // namespace adapt
