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

#include "adapt/fmodel.hpp"

#include <bit>
#include <cctype>
#include <cstring>
#include <sstream>

namespace adapt {

namespace {

BigInt AbsInt(const BigInt& n) { return BigInt(::abs(n)); }

// n * beta^k for k >= 0.
BigInt ScaleUp(const BigInt& n, int beta, int64_t k) {
  if (k == 0) return n;
  if (beta == 2) {
    BigInt r;
    mpz_mul_2exp(r.get_mpz_t(), n.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
    return r;
  }
  return n * IntPow(beta, static_cast<unsigned long>(k));
}

ExactRational BetaPower(int beta, int64_t k) {
  return ExactRational::Power(beta, static_cast<long>(k));
}

// Decides whether the magnitude q (already truncated) must be incremented.
// `cmp_half` is the comparison of the discarded fraction with one half
// (-1 below, 0 tie, +1 above); `inexact` says whether anything was dropped.
bool RoundUpMagnitude(RoundingMode mode, int sign, bool inexact, int cmp_half,
                      const BigInt& q) {
  if (!inexact) return false;
  switch (mode) {
    case RoundingMode::kDown:
      return sign < 0;
    case RoundingMode::kUp:
      return sign > 0;
    case RoundingMode::kTowardZero:
      return false;
    case RoundingMode::kNearestEven:
      if (cmp_half != 0) return cmp_half > 0;
      return mpz_odd_p(q.get_mpz_t()) != 0;
  }
  return false;
}

// Assembles sign * q * beta^t after a possible carry into beta^p.
BFloat Finish(int sign, BigInt q, int64_t t, const GenericFormat& fmt) {
  if (q == 0) return BFloat(BigInt(0), -fmt.e_min());
  if (q > fmt.n_max()) {  // carried to beta^p
    q = fmt.n_min_normal();
    t += 1;
  }
  if (sign < 0) q = -q;
  return BFloat(std::move(q), t);
}

}  // namespace

std::string_view ToString(RoundingMode mode) {
  switch (mode) {
    case RoundingMode::kDown:
      return "down";
    case RoundingMode::kUp:
      return "up";
    case RoundingMode::kTowardZero:
      return "toward-zero";
    case RoundingMode::kNearestEven:
      return "nearest-even";
  }
  return "?";
}

GenericFormat::GenericFormat(int beta, int p, int64_t e_min)
    : beta_(beta), p_(p), e_min_(e_min) {
  if (beta < 2) throw std::invalid_argument("format radix must be >= 2");
  if (p < 1) throw std::invalid_argument("format precision must be >= 1");
  if (e_min < 0) throw std::invalid_argument("format e_min must be >= 0");
  BigInt bp = IntPow(beta, static_cast<unsigned long>(p));
  n_max_ = bp - 1;
  n_min_normal_ = IntPow(beta, static_cast<unsigned long>(p - 1));
  ulp_ = ExactRational(BigInt(beta), bp);
}

GenericFormat GenericFormat::FromExponentWidth(int beta, int p, int r) {
  if (r < 1) throw std::invalid_argument("exponent width must be >= 1");
  BigInt half_ceil;
  BigInt br = IntPow(beta, static_cast<unsigned long>(r));
  mpz_cdiv_q_ui(half_ceil.get_mpz_t(), br.get_mpz_t(), 2);
  BigInt e_min = half_ceil + p - 3;
  if (e_min < 0) throw std::invalid_argument("derived e_min is negative");
  if (!e_min.fits_slong_p()) throw std::invalid_argument("derived e_min too large");
  return GenericFormat(beta, p, e_min.get_si());
}

GenericFormat GenericFormat::Parse(std::string_view text) {
  std::string s(text);
  if (s == "binary64" || s == "double") return Binary64();
  if (s == "binary32" || s == "single") return Binary32();
  std::istringstream in(s);
  std::string tok;
  std::optional<long> beta, p, emin, r;
  while (in >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("bad format token '" + tok + "'");
    std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    long v;
    try {
      size_t used = 0;
      v = std::stol(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad format value '" + tok + "'");
    }
    if (key == "beta") beta = v;
    else if (key == "p") p = v;
    else if (key == "emin") emin = v;
    else if (key == "r") r = v;
    else throw std::invalid_argument("unknown format key '" + key + "'");
  }
  if (!beta || !p || (emin.has_value() == r.has_value()))
    throw std::invalid_argument("format needs beta, p and exactly one of emin / r");
  if (*beta < 2 || *beta > 1 << 16 || *p < 1 || *p > 1 << 16)
    throw std::invalid_argument("format parameters out of range");
  if (r) return FromExponentWidth(static_cast<int>(*beta), static_cast<int>(*p), static_cast<int>(*r));
  return GenericFormat(static_cast<int>(*beta), static_cast<int>(*p), *emin);
}

std::string GenericFormat::to_string() const {
  return "beta=" + std::to_string(beta_) + " p=" + std::to_string(p_) +
         " emin=" + std::to_string(e_min_);
}

int64_t digit_count(const BigInt& n, int beta) {
  if (n == 0) return 0;
  BigInt a = AbsInt(n);
  auto d = static_cast<int64_t>(mpz_sizeinbase(a.get_mpz_t(), beta));
  if ((beta & (beta - 1)) == 0) return d;
  // mpz_sizeinbase may overshoot by one for other radices.
  if (a < IntPow(beta, static_cast<unsigned long>(d - 1))) --d;
  return d;
}

ExactRational value(const BFloat& f, const GenericFormat& fmt) {
  return ExactRational(f.n) * BetaPower(fmt.beta(), f.e);
}

bool is_bounded(const BFloat& f, const GenericFormat& fmt) {
  return f.e >= -fmt.e_min() && AbsInt(f.n) <= fmt.n_max();
}

bool is_normal(const BFloat& f, const GenericFormat& fmt) {
  return is_bounded(f, fmt) && AbsInt(f.n) * fmt.beta() > fmt.n_max();
}

bool is_subnormal(const BFloat& f, const GenericFormat& fmt) {
  return is_bounded(f, fmt) && AbsInt(f.n) * fmt.beta() <= fmt.n_max() &&
         f.e == -fmt.e_min();
}

bool is_canonical(const BFloat& f, const GenericFormat& fmt) {
  return is_normal(f, fmt) || is_subnormal(f, fmt);
}

BFloat canonicalize(const BFloat& f, const GenericFormat& fmt) {
  if (!is_bounded(f, fmt)) throw DomainError("canonicalize: float is not bounded");
  if (f.is_zero()) return BFloat(BigInt(0), -fmt.e_min());
  int64_t d = digit_count(f.n, fmt.beta());
  int64_t shift = std::min<int64_t>(fmt.p() - d, f.e + fmt.e_min());
  if (shift <= 0) return f;
  return BFloat(ScaleUp(f.n, fmt.beta(), shift), f.e - shift);
}

BFloat round_pair(const BFloat& exact, RoundingMode mode, const GenericFormat& fmt) {
  if (exact.is_zero()) return BFloat(BigInt(0), -fmt.e_min());
  const int beta = fmt.beta();
  int64_t d = digit_count(exact.n, beta);
  int64_t t = std::max<int64_t>(-fmt.e_min(), exact.e + d - fmt.p());
  if (t <= exact.e) return BFloat(ScaleUp(exact.n, beta, exact.e - t), t);
  int64_t k = t - exact.e;
  int sign = exact.sign();
  BigInt mag = AbsInt(exact.n);
  BigInt q, r;
  if (beta == 2) {
    mpz_fdiv_q_2exp(q.get_mpz_t(), mag.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
    mpz_fdiv_r_2exp(r.get_mpz_t(), mag.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
    bool inexact = r != 0;
    int cmp_half = 0;
    if (inexact) {
      // Compare r with 2^(k-1).
      size_t top = mpz_sizeinbase(r.get_mpz_t(), 2);
      if (static_cast<int64_t>(top) < k) cmp_half = -1;
      else cmp_half = (mpz_scan1(r.get_mpz_t(), 0) == static_cast<mp_bitcnt_t>(k - 1)) ? 0 : 1;
    }
    if (RoundUpMagnitude(mode, sign, inexact, cmp_half, q)) q += 1;
  } else {
    BigInt scale = IntPow(beta, static_cast<unsigned long>(k));
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), mag.get_mpz_t(), scale.get_mpz_t());
    bool inexact = r != 0;
    int cmp_half = inexact ? cmp(BigInt(2 * r), scale) : 0;
    if (cmp_half != 0) cmp_half = cmp_half < 0 ? -1 : 1;
    if (RoundUpMagnitude(mode, sign, inexact, cmp_half, q)) q += 1;
  }
  return Finish(sign, std::move(q), t, fmt);
}

BFloat round(const ExactRational& x, RoundingMode mode, const GenericFormat& fmt) {
  if (x.is_zero()) return BFloat(BigInt(0), -fmt.e_min());
  if (x.is_integer()) return round_pair(BFloat(x.num(), 0), mode, fmt);
  const int beta = fmt.beta();
  int sign = x.sign();
  ExactRational ax = x.abs();
  // L = floor(log_beta |x|), estimated from digit counts then corrected.
  int64_t lead = digit_count(ax.num(), beta) - digit_count(ax.den(), beta);
  while (ax < BetaPower(beta, lead)) --lead;
  while (ax >= BetaPower(beta, lead + 1)) ++lead;
  int64_t t = std::max<int64_t>(-fmt.e_min(), lead - fmt.p() + 1);
  ExactRational scaled = ax * BetaPower(beta, -t);
  BigInt q = scaled.floor();
  ExactRational frac = scaled - ExactRational(q);
  bool inexact = !frac.is_zero();
  int cmp_half = 0;
  if (inexact) {
    auto c = frac * 2 <=> ExactRational(1);
    cmp_half = c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  if (RoundUpMagnitude(mode, sign, inexact, cmp_half, q)) q += 1;
  return Finish(sign, std::move(q), t, fmt);
}

BFloat exact_add(const BFloat& a, const BFloat& b, int beta) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  int64_t m = std::min(a.e, b.e);
  return BFloat(ScaleUp(a.n, beta, a.e - m) + ScaleUp(b.n, beta, b.e - m), m);
}

BFloat exact_mul(const BFloat& a, const BFloat& b) {
  return BFloat(BigInt(a.n * b.n), a.e + b.e);
}

BFloat add(const BFloat& a, const BFloat& b, const GenericFormat& fmt, RoundingMode mode) {
  return round_pair(exact_add(a, b, fmt.beta()), mode, fmt);
}

BFloat sub(const BFloat& a, const BFloat& b, const GenericFormat& fmt, RoundingMode mode) {
  return round_pair(exact_add(a, -b, fmt.beta()), mode, fmt);
}

BFloat mul(const BFloat& a, const BFloat& b, const GenericFormat& fmt, RoundingMode mode) {
  return round_pair(exact_mul(a, b), mode, fmt);
}

BFloat div(const BFloat& a, const BFloat& b, const GenericFormat& fmt, RoundingMode mode) {
  if (b.is_zero()) throw DomainError("division by zero");
  return round(value(a, fmt) / value(b, fmt), mode, fmt);
}

int compare_values(const BFloat& a, const BFloat& b, int beta) {
  return exact_add(a, -b, beta).sign();
}

int compare_magnitudes(const BFloat& a, const BFloat& b, int beta) {
  return compare_values(BFloat(AbsInt(a.n), a.e), BFloat(AbsInt(b.n), b.e), beta);
}

bool in_rounding_class(const BFloat& f, const ExactRational& x, RoundingMode mode,
                       const GenericFormat& fmt) {
  return is_bounded(f, fmt) && value(f, fmt) == value(round(x, mode, fmt), fmt);
}

namespace {

// Writes a nonzero v as m * beta^k with k maximal (m not divisible by beta).
// Returns false when v is not a finite beta-adic number.
bool BetaAdicDecompose(const ExactRational& v, int beta, BigInt& m, int64_t& k) {
  BigInt num = v.num(), den = v.den();
  k = 0;
  if (beta == 2) {
    if (mpz_popcount(den.get_mpz_t()) != 1) return false;
    auto dz = static_cast<int64_t>(mpz_scan1(den.get_mpz_t(), 0));
    BigInt an = AbsInt(num);
    auto nz = static_cast<int64_t>(mpz_scan1(an.get_mpz_t(), 0));
    mpz_fdiv_q_2exp(m.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(nz));
    k = nz - dz;
    return true;
  }
  BigInt b = beta;
  while (den != 1) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), b.get_mpz_t());
    if (g == 1) return false;
    num *= beta;
    --k;
    ExactRational re(num, den);
    num = re.num();
    den = re.den();
  }
  m = num;
  while (m % beta == 0) {
    m /= beta;
    ++k;
  }
  return true;
}

}  // namespace

std::optional<int64_t> max_bounded_amplitude(const ExactRational& v,
                                             const GenericFormat& fmt) {
  if (v.is_zero()) return std::nullopt;
  BigInt m;
  int64_t k;
  if (!BetaAdicDecompose(v, fmt.beta(), m, k)) return std::nullopt;
  if (AbsInt(m) > fmt.n_max() || k < -fmt.e_min()) return std::nullopt;
  return k;
}

bool representable_at(const ExactRational& v, int64_t e, const GenericFormat& fmt) {
  if (e < -fmt.e_min()) return false;
  if (v.is_zero()) return true;
  ExactRational s = v * BetaPower(fmt.beta(), -e);
  return s.is_integer() && AbsInt(s.num()) <= fmt.n_max();
}

std::optional<BFloat> with_amplitude(const BFloat& f, int64_t e, const GenericFormat& fmt) {
  if (e < -fmt.e_min()) return std::nullopt;
  if (f.is_zero()) return BFloat(BigInt(0), e);
  BigInt n;
  if (f.e >= e) {
    n = f.n * IntPow(fmt.beta(), static_cast<unsigned long>(f.e - e));
  } else {
    BigInt scale = IntPow(fmt.beta(), static_cast<unsigned long>(e - f.e));
    BigInt r;
    mpz_tdiv_qr(n.get_mpz_t(), r.get_mpz_t(), f.n.get_mpz_t(), scale.get_mpz_t());
    if (r != 0) return std::nullopt;
  }
  if (BigInt(::abs(n)) > fmt.n_max()) return std::nullopt;
  return BFloat(std::move(n), e);
}

std::vector<BFloat> bounded_representations(const ExactRational& v,
                                            const GenericFormat& fmt,
                                            int64_t e_cap) {
  std::vector<BFloat> out;
  if (v.is_zero()) {
    for (int64_t e = -fmt.e_min(); e <= e_cap; ++e) out.emplace_back(BigInt(0), e);
    return out;
  }
  auto top = max_bounded_amplitude(v, fmt);
  if (!top) return out;
  BigInt m = (v * BetaPower(fmt.beta(), -*top)).num();
  BFloat canon = canonicalize(BFloat(m, *top), fmt);
  for (int64_t e = canon.e; e <= *top; ++e)
    out.emplace_back(ScaleUp(m, fmt.beta(), *top - e), e);
  return out;
}

bool round_error_amplitude_bound(const ExactRational& x, const BFloat& f,
                                 const GenericFormat& fmt) {
  if (!is_bounded(f, fmt)) return false;
  ExactRational fv = value(f, fmt);
  ExactRational err = x - fv;
  bool ok = true;
  ExactRational best = (x - value(round(x, RoundingMode::kNearestEven, fmt), fmt)).abs();
  if (err.abs() == best) {
    ok = ok && err.abs() <= BetaPower(fmt.beta(), f.e) / 2;
  }
  if (!err.is_zero()) {
    bool is_rounded = fv == value(round(x, RoundingMode::kDown, fmt), fmt) ||
                      fv == value(round(x, RoundingMode::kUp, fmt), fmt);
    if (is_rounded) {
      auto k = max_bounded_amplitude(err, fmt);
      if (k) ok = ok && *k < f.e;
    }
  }
  return ok;
}

std::vector<BFloat> enumerate_bounded(const GenericFormat& fmt, int64_t e_top,
                                      size_t budget) {
  std::vector<BFloat> out;
  const int64_t lo = -fmt.e_min();
  BigInt count = 1;
  if (e_top >= lo) {
    count += 2 * fmt.n_max();
    count += BigInt(2 * (fmt.n_max() - fmt.n_min_normal() + 1)) * BigInt(static_cast<long>(e_top - lo));
  }
  if (count > BigInt(static_cast<unsigned long>(budget)))
    throw DomainError("enumerate_bounded: " + count.get_str() + " floats exceed budget");
  out.reserve(count.get_ui());
  out.emplace_back(BigInt(0), lo);
  for (int64_t e = lo; e <= e_top; ++e) {
    BigInt start = e == lo ? BigInt(1) : fmt.n_min_normal();
    for (BigInt n = -fmt.n_max(); n <= -start; ++n) out.emplace_back(n, e);
    for (BigInt n = start; n <= fmt.n_max(); ++n) out.emplace_back(n, e);
  }
  return out;
}

std::vector<BFloat> enumerate_representations(const GenericFormat& fmt, int64_t e_top,
                                              size_t budget) {
  std::vector<BFloat> out;
  const int64_t lo = -fmt.e_min();
  if (e_top < lo) return out;
  BigInt count = (2 * fmt.n_max() + 1) * BigInt(static_cast<long>(e_top - lo + 1));
  if (count > BigInt(static_cast<unsigned long>(budget)))
    throw DomainError("enumerate_representations: budget exceeded");
  for (int64_t e = lo; e <= e_top; ++e)
    for (BigInt n = -fmt.n_max(); n <= fmt.n_max(); ++n) out.emplace_back(n, e);
  return out;
}

BFloat from_double(double d) {
  auto bits = std::bit_cast<uint64_t>(d);
  bool neg = bits >> 63;
  auto biased = static_cast<int64_t>((bits >> 52) & 0x7ff);
  uint64_t frac = bits & ((uint64_t{1} << 52) - 1);
  if (biased == 0x7ff) throw DomainError("from_double: infinity or NaN");
  BigInt n;
  int64_t e;
  if (biased == 0) {
    n = static_cast<unsigned long>(frac);
    e = -1074;
  } else {
    n = static_cast<unsigned long>(frac | (uint64_t{1} << 52));
    e = biased - 1075;
  }
  if (n == 0) e = -1074;
  if (neg) n = -n;
  return BFloat(std::move(n), e);
}

double to_double(const BFloat& f) {
  static const GenericFormat kB64 = GenericFormat::Binary64();
  BFloat c = canonicalize(f, kB64);
  bool neg = c.sign() < 0;
  BigInt mag = AbsInt(c.n);
  uint64_t bits = 0;
  if (mag != 0) {
    uint64_t m = mag.get_ui();
    if (c.e == -1074 && m < (uint64_t{1} << 52)) {
      bits = m;
    } else {
      int64_t biased = c.e + 1075;
      if (biased >= 0x7ff) throw DomainError("to_double: overflow");
      bits = (static_cast<uint64_t>(biased) << 52) | (m & ((uint64_t{1} << 52) - 1));
    }
  }
  if (neg) bits |= uint64_t{1} << 63;
  return std::bit_cast<double>(bits);
}

std::string to_string(const BFloat& f) {
  return "(" + f.n.get_str() + "," + std::to_string(f.e) + ")";
}

std::string to_hex_string(const BFloat& f) {
  std::string out = f.sign() < 0 ? "-0x" : "0x";
  out += AbsInt(f.n).get_str(16);
  out += "p";
  if (f.e >= 0) out += "+";
  out += std::to_string(f.e);
  return out;
}

BFloat parse_bfloat(std::string_view text, const GenericFormat& fmt) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  auto bad = [&]() -> BFloat {
    throw std::invalid_argument("malformed float '" + std::string(text) + "'");
  };
  if (s.size() >= 5 && s.front() == '(' && s.back() == ')') {
    auto comma = s.find(',');
    if (comma == std::string::npos) return bad();
    std::string ns = s.substr(1, comma - 1), es = s.substr(comma + 1, s.size() - comma - 2);
    BigInt n;
    if (n.set_str(ns[0] == '+' ? ns.substr(1) : ns, 10) != 0) return bad();
    try {
      size_t used = 0;
      long long e = std::stoll(es, &used);
      if (used != es.size()) return bad();
      return BFloat(std::move(n), e);
    } catch (const std::exception&) {
      return bad();
    }
  }
  std::string body = s;
  bool neg = false;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    neg = body[0] == '-';
    body.erase(0, 1);
  }
  if (body.size() < 3 || body[0] != '0' || (body[1] != 'x' && body[1] != 'X')) return bad();
  if (fmt.beta() != 2) throw std::invalid_argument("hex-float literals require beta = 2");
  auto pos = body.find_first_of("pP");
  std::string mant = body.substr(2, pos == std::string::npos ? std::string::npos : pos - 2);
  int64_t e = 0;
  if (pos != std::string::npos) {
    try {
      size_t used = 0;
      std::string es = body.substr(pos + 1);
      e = std::stoll(es, &used);
      if (used != es.size()) return bad();
    } catch (const std::exception&) {
      return bad();
    }
  }
  auto dot = mant.find('.');
  if (dot != std::string::npos) {
    e -= 4 * static_cast<int64_t>(mant.size() - dot - 1);
    mant.erase(dot, 1);
  }
  if (mant.empty()) return bad();
  BigInt n;
  if (n.set_str(mant, 16) != 0) return bad();
  if (neg) n = -n;
  return BFloat(std::move(n), e);
}

}  // namespace adapt
