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

#include "adapt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "adapt/arith.hpp"
#include "adapt/backend.hpp"
#include "adapt/eft.hpp"
#include "adapt/toolset.hpp"

namespace adapt {

namespace {

std::string FmtTag(const GenericFormat& fmt) {
  return "fmt(" + std::to_string(fmt.beta()) + "," + std::to_string(fmt.p()) + "," +
         std::to_string(fmt.e_min()) + ")";
}

std::string Range(int64_t lo, int64_t hi) {
  return "[" + std::to_string(lo) + "," + std::to_string(hi) + "]";
}

// Amplitude window swept by the pair tags.
int64_t WindowTop(const GenericFormat& fmt) { return std::max<int64_t>(fmt.e_min(), 2); }

bool IsNormalOrSubnormal(const BFloat& f, const GenericFormat& fmt) {
  BigInt a = abs(f.n);
  if (a > fmt.n_max()) return false;
  if (a >= fmt.n_min_normal()) return f.e >= -fmt.e_min();
  return f.e == -fmt.e_min();
}

// Collects the first failure and counts trials.
class Sweep {
 public:
  Sweep(std::string tag, std::string domain) {
    r_.tag = std::move(tag);
    r_.domain = std::move(domain);
  }
  void trial() { ++r_.trials; }
  void fail(const std::string& what) {
    if (r_.passed) r_.counterexample = what;
    r_.passed = false;
  }
  bool failed() const { return !r_.passed; }
  TheoremReport done() { return std::move(r_); }
  TheoremReport& report() { return r_; }

 private:
  TheoremReport r_;
};

std::string S(const BFloat& f) { return to_string(f); }
std::string S(const ExactRational& q) { return q.to_string(); }

void RequireBinary(const GenericFormat& fmt, std::string_view tag) {
  if (fmt.beta() != 2)
    throw DomainError(std::string(tag) + ": radix 2 only");
}

// Sample points for the rounding tags: every value of the universe below
// the window top, plus the midpoint and quarter points between neighbours.
std::vector<ExactRational> SamplePoints(const ReferenceUniverse& u) {
  std::vector<ExactRational> xs;
  const auto& v = u.values();
  for (size_t i = 0; i < v.size(); ++i) {
    xs.push_back(v[i]);
    if (i + 1 < v.size()) {
      ExactRational gap = v[i + 1] - v[i];
      for (int k = 1; k <= 3; ++k) xs.push_back(v[i] + gap * ExactRational(k, 4));
    }
  }
  return xs;
}

std::vector<BFloat> AllReps(const ReferenceUniverse& u) {
  std::vector<BFloat> out;
  for (size_t i = 0; i < u.size(); ++i)
    for (const BFloat& f : u.reps(i)) out.push_back(f);
  return out;
}

std::vector<BFloat> Canonicals(const ReferenceUniverse& u) {
  std::vector<BFloat> out;
  for (size_t i = 0; i < u.size(); ++i) out.push_back(u.reps(i).front());
  return out;
}

// --- Float model -------------------------------------------------------------

TheoremReport CheckCanonical(const GenericFormat& fmt) {
  const int64_t top = WindowTop(fmt);
  ReferenceUniverse u(fmt, top);
  Sweep sw("Thm1", FmtTag(fmt) + ":amp" + Range(-fmt.e_min(), top) + ":all-representations");
  for (size_t i = 0; i < u.size() && !sw.failed(); ++i) {
    const auto& reps = u.reps(i);
    int count = 0;
    const BFloat* canon = nullptr;
    for (const BFloat& f : reps)
      if (IsNormalOrSubnormal(f, fmt)) {
        ++count;
        canon = &f;
      }
    if (count != 1) {
      sw.fail("value=" + S(u.values()[i]) + " normal_or_subnormal=" + std::to_string(count));
      break;
    }
    for (const BFloat& f : reps) {
      sw.trial();
      BFloat c = canonicalize(f, fmt);
      if (!(c == *canon) || !(canonicalize(c, fmt) == c) || is_canonical(f, fmt) != (f == *canon)) {
        sw.fail("f=" + S(f) + " canonicalize=" + S(c) + " expected=" + S(*canon));
        break;
      }
    }
  }
  return sw.done();
}

TheoremReport CheckRoundingModes(const GenericFormat& fmt) {
  const int64_t top = WindowTop(fmt);
  ReferenceUniverse u(fmt, top);
  auto xs = SamplePoints(u);
  Sweep sw("Thm2", FmtTag(fmt) + ":amp" + Range(-fmt.e_min(), top) +
                       ":values+quarter-points:all-modes");
  for (RoundingMode mode : kAllRoundingModes) {
    std::optional<ExactRational> prev;
    for (const ExactRational& x : xs) {
      sw.trial();
      auto idx = u.round_values(x, mode);
      std::string where = std::string(ToString(mode)) + " x=" + S(x);
      if (idx.size() != 1) {
        sw.fail(where + " classes=" + std::to_string(idx.size()));
        return sw.done();
      }
      const ExactRational& v = u.values()[idx[0]];
      BFloat m = round(x, mode, fmt);
      if (!is_bounded(m, fmt) || value(m, fmt) != v) {
        sw.fail(where + " round=" + S(m) + " reference=" + S(v));
        return sw.done();
      }
      bool representable = u.find(x).has_value();
      if ((representable && v != x) || (mode == RoundingMode::kDown && v > x) ||
          (mode == RoundingMode::kUp && v < x) || (prev && *prev > v)) {
        sw.fail(where + " value=" + S(v));
        return sw.done();
      }
      prev = v;
    }
  }
  return sw.done();
}

TheoremReport CheckNearestError(const GenericFormat& fmt) {
  const int64_t top = WindowTop(fmt);
  ReferenceUniverse u(fmt, top);
  Sweep sw("Thm3", FmtTag(fmt) + ":amp" + Range(-fmt.e_min(), top) + ":values+quarter-points");
  for (const ExactRational& x : SamplePoints(u)) {
    sw.trial();
    auto even = u.round_values(x, RoundingMode::kNearestEven);
    for (size_t i : u.nearest_values(x)) {
      ExactRational err = (x - u.values()[i]).abs();
      bool in_even = std::find(even.begin(), even.end(), i) != even.end();
      for (const BFloat& f : u.reps(i)) {
        ExactRational half = ExactRational::Power(fmt.beta(), f.e) / 2;
        if (err > half) {
          sw.fail("x=" + S(x) + " f=" + S(f) + " error=" + S(err));
          return sw.done();
        }
        if (in_even && err == half && f.n % 2 != 0) {
          sw.fail("x=" + S(x) + " tie kept odd significand " + S(f));
          return sw.done();
        }
      }
    }
  }
  return sw.done();
}

TheoremReport CheckErrorAmplitude(const GenericFormat& fmt) {
  const int64_t top = WindowTop(fmt);
  ReferenceUniverse u(fmt, top);
  Sweep sw("Thm4", FmtTag(fmt) + ":amp" + Range(-fmt.e_min(), top) +
                       ":values+quarter-points:all-modes");
  for (RoundingMode mode : kAllRoundingModes) {
    for (const ExactRational& x : SamplePoints(u)) {
      sw.trial();
      for (size_t i : u.round_values(x, mode)) {
        ExactRational err = x - u.values()[i];
        if (err.is_zero()) continue;
        auto j = u.find(err);
        if (!j) {
          if (has_bounded_representation(err, fmt)) {
            sw.fail("x=" + S(x) + " error outside universe " + S(err));
            return sw.done();
          }
          continue;
        }
        int64_t e_low = u.reps(i).front().e;  // smallest amplitude in the class
        int64_t e_err = u.reps(*j).back().e;  // largest amplitude of the error
        if (e_err >= e_low) {
          sw.fail(std::string(ToString(mode)) + " x=" + S(x) + " f=" + S(u.reps(i).front()) +
                  " error_rep=" + S(u.reps(*j).back()));
          return sw.done();
        }
      }
    }
  }
  return sw.done();
}

// --- Exact operations ----------------------------------------------------------

TheoremReport CheckSterbenz(const GenericFormat& fmt, std::string tag) {
  const int64_t top = WindowTop(fmt);
  ReferenceUniverse u(fmt, top);
  auto floats = Canonicals(u);
  Sweep sw(std::move(tag), FmtTag(fmt) + ":amp" + Range(-fmt.e_min(), top) +
                               ":canonical-pairs:y/2<=x<=2y");
  for (size_t i = 0; i < floats.size(); ++i) {
    const ExactRational& x = u.values()[i];
    for (size_t j = 0; j < floats.size(); ++j) {
      const ExactRational& y = u.values()[j];
      if (!(y <= x * 2 && x <= y * 2)) continue;
      sw.trial();
      ExactRational d = x - y;
      bool ok = has_bounded_representation(d, fmt) &&
                value(sterbenz_exact(floats[i], floats[j], fmt), fmt) == d &&
                value(sub(floats[i], floats[j], fmt), fmt) == d;
      if (!ok) {
        sw.fail("x=" + S(floats[i]) + " y=" + S(floats[j]));
        return sw.done();
      }
    }
  }
  return sw.done();
}

TheoremReport CheckPlusLowerBound(const GenericFormat& fmt) {
  RequireBinary(fmt, "Thm6");
  const int64_t top = WindowTop(fmt);
  ReferenceUniverse u(fmt, top), big(fmt, top + 2);
  auto floats = Canonicals(u);
  Sweep sw("Thm6", FmtTag(fmt) + ":amp" + Range(-fmt.e_min(), top) + ":canonical-pairs");
  for (size_t i = 0; i < floats.size(); ++i) {
    for (size_t j = 0; j < floats.size(); ++j) {
      sw.trial();
      const ExactRational &x = u.values()[i], &y = u.values()[j];
      ExactRational exact = x + y;
      auto idx = big.round_values(exact, RoundingMode::kNearestEven);
      const ExactRational& s = big.values()[idx[0]];
      if (value(add(floats[i], floats[j], fmt), fmt) != s) {
        sw.fail("x=" + S(floats[i]) + " y=" + S(floats[j]) + " model sum disagrees");
        return sw.done();
      }
      if (s != exact && s.abs() * 2 < max(x.abs(), y.abs())) {
        sw.fail("x=" + S(floats[i]) + " y=" + S(floats[j]) + " sum=" + S(s));
        return sw.done();
      }
    }
  }
  return sw.done();
}

TheoremReport CheckSumRepresentation(const GenericFormat& fmt) {
  const int64_t top = WindowTop(fmt);
  ReferenceUniverse u(fmt, top), big(fmt, top + 2);
  auto reps = AllReps(u);
  Sweep sw("Thm7", FmtTag(fmt) + ":amp" + Range(-fmt.e_min(), top) +
                       ":all-representation-pairs:all-nearest");
  for (const BFloat& a : reps) {
    ExactRational va = value(a, fmt);
    for (const BFloat& b : reps) {
      sw.trial();
      ExactRational exact = va + value(b, fmt);
      int64_t lo = std::min(a.e, b.e), hi = std::max(a.e, b.e) + 1;
      for (size_t k : big.nearest_values(exact)) {
        const ExactRational& s = big.values()[k];
        bool ok = representable_with_amplitude(exact - s, lo, fmt);
        bool found = false;
        for (int64_t e = lo; ok && !found && e <= hi; ++e)
          found = representable_with_amplitude(s, e, fmt);
        if (!ok || !found) {
          sw.fail("a=" + S(a) + " b=" + S(b) + " sum=" + S(s));
          return sw.done();
        }
      }
    }
  }
  return sw.done();
}

TheoremReport CheckSumErrorBound(const GenericFormat& fmt) {
  const int64_t top = WindowTop(fmt);
  ReferenceUniverse u(fmt, top), big(fmt, top + 2);
  auto floats = Canonicals(u);
  Sweep sw("Thm8", FmtTag(fmt) + ":amp" + Range(-fmt.e_min(), top) +
                       ":canonical-pairs:all-nearest");
  const ExactRational& ulp = fmt.ulp();
  for (size_t i = 0; i < floats.size(); ++i) {
    for (size_t j = 0; j < floats.size(); ++j) {
      sw.trial();
      const ExactRational &x = u.values()[i], &y = u.values()[j];
      ExactRational exact = x + y;
      for (size_t k : big.nearest_values(exact)) {
        const ExactRational& s = big.values()[k];
        if (s.is_zero()) continue;
        ExactRational err = (exact - s).abs();
        bool ok = err <= s.abs() * ulp / 2;
        if (fmt.beta() == 2) ok = ok && s.abs() * ulp / 2 <= max(x.abs(), y.abs()) * ulp;
        if (!ok) {
          sw.fail("x=" + S(floats[i]) + " y=" + S(floats[j]) + " sum=" + S(s));
          return sw.done();
        }
      }
      if (fmt.beta() == 2 && !plus_lower_bound_check(floats[i], floats[j], fmt)) {
        sw.fail("x=" + S(floats[i]) + " y=" + S(floats[j]) + " plus_lower_bound_check");
        return sw.done();
      }
    }
  }
  return sw.done();
}

// Checks one exact-sum pair against the nearest-even class of a + b.
bool ExactPairOk(const ReferenceUniverse& big, const BFloat& a, const BFloat& b,
                 const EftPair<BFloat>& r, const GenericFormat& fmt) {
  ExactRational exact = value(a, fmt) + value(b, fmt);
  if (!is_bounded(r.hi, fmt) || !is_bounded(r.lo, fmt)) return false;
  if (value(r.hi, fmt) + value(r.lo, fmt) != exact) return false;
  auto idx = big.round_values(exact, RoundingMode::kNearestEven);
  return idx.size() == 1 && big.values()[idx[0]] == value(r.hi, fmt);
}

std::string PairText(const BFloat& a, const BFloat& b, const EftPair<BFloat>& r) {
  return "a=" + S(a) + " b=" + S(b) + " hi=" + S(r.hi) + " lo=" + S(r.lo);
}

TheoremReport CheckTwoSum(const GenericFormat& fmt) {
  const int64_t top = WindowTop(fmt);
  ReferenceUniverse u(fmt, top), big(fmt, top + 2);
  auto reps = AllReps(u);
  Sweep sw("TwoSum", FmtTag(fmt) + ":amp" + Range(-fmt.e_min(), top) + ":all-representation-pairs");
  for (const BFloat& a : reps)
    for (const BFloat& b : reps) {
      sw.trial();
      auto r = two_sum(a, b, fmt);
      if (!ExactPairOk(big, a, b, r, fmt)) {
        sw.fail(PairText(a, b, r));
        return sw.done();
      }
    }
  return sw.done();
}

// The raw three-operation sum over every pair with e_b <= e_a. For radix
// 2 and 3 this is the early-exit theorem; elsewhere the failure is the
// expected outcome, probed first on the documented n_max + n_max input.
TheoremReport CheckRawThreeOp(const GenericFormat& fmt, std::string tag) {
  const int64_t top = WindowTop(fmt);
  ReferenceUniverse u(fmt, top), big(fmt, top + 2);
  Sweep sw(std::move(tag), FmtTag(fmt) + ":amp" + Range(-fmt.e_min(), top) +
                               ":representation-pairs:e_b<=e_a");
  const bool proven = fmt.beta() == 2 || fmt.beta() == 3;
  sw.report().expect_failure = !proven;
  if (!proven) {
    int64_t e0 = std::max<int64_t>(fmt.beta() == 10 ? -1 : 0, -fmt.e_min());
    BFloat probe(fmt.n_max(), e0);
    auto raw = fast_two_sum_unchecked(probe, probe, fmt);
    auto ref = two_sum(probe, probe, fmt);
    sw.trial();
    if (!ExactPairOk(big, probe, probe, raw, fmt)) {
      std::string two_sum_state = ExactPairOk(big, probe, probe, ref, fmt) ? "exact" : "inexact";
      sw.fail(PairText(probe, probe, raw) + " exact=" + S(value(probe, fmt) * 2) +
              " got=" + S(value(raw.hi, fmt) + value(raw.lo, fmt)) + " two_sum=" + two_sum_state);
    }
  }
  for (const BFloat& a : AllReps(u)) {
    for (const BFloat& b : AllReps(u)) {
      if (b.e > a.e) continue;
      sw.trial();
      auto r = fast_two_sum_unchecked(a, b, fmt);
      if (!ExactPairOk(big, a, b, r, fmt)) {
        sw.fail(PairText(a, b, r));
        if (proven) return sw.done();
        continue;
      }
      if (proven) {
        auto checked = fast_two_sum(a, b, fmt);
        if (!(checked.hi == r.hi) || !(checked.lo == r.lo)) {
          sw.fail(PairText(a, b, r) + " checked variant differs");
          return sw.done();
        }
      }
    }
  }
  return sw.done();
}

TheoremReport CheckExactProduct(const GenericFormat& fmt) {
  const int64_t top = WindowTop(fmt);
  ReferenceUniverse u(fmt, top), big(fmt, 2 * top + fmt.p());
  auto reps = AllReps(u);
  Sweep sw("Thm10", FmtTag(fmt) + ":amp" + Range(-fmt.e_min(), top) +
                        ":representation-pairs:e_a+e_b>=-emin+p");
  for (const BFloat& a : reps) {
    ExactRational va = value(a, fmt);
    for (const BFloat& b : reps) {
      if (a.e + b.e < -fmt.e_min() + fmt.p()) continue;
      sw.trial();
      ExactRational exact = va * value(b, fmt);
      for (size_t k : big.nearest_values(exact)) {
        const BFloat& canon = big.reps(k).front();
        ExactRational err = exact - big.values()[k];
        // A zero error has every amplitude; canonical zero sits at -e_min,
        // so e - p would fall outside the format.
        if (!err.is_zero() && !representable_with_amplitude(err, canon.e - fmt.p(), fmt)) {
          sw.fail("a=" + S(a) + " b=" + S(b) + " product=" + S(canon));
          return sw.done();
        }
      }
      auto r = two_product(a, b, fmt);
      auto idx = big.round_values(exact, RoundingMode::kNearestEven);
      bool ok = is_bounded(r.hi, fmt) && is_bounded(r.lo, fmt) &&
                value(r.hi, fmt) + value(r.lo, fmt) == exact &&
                value(r.hi, fmt) == big.values()[idx[0]] &&
                (r.lo.is_zero() || r.lo.e == canonicalize(r.hi, fmt).e - fmt.p());
      if (!ok) {
        sw.fail(PairText(a, b, r));
        return sw.done();
      }
    }
  }
  return sw.done();
}

// --- Stream operators on a small binary format -------------------------------
//
// Every value below is a multiple of 2^-e_min far inside double range, so
// sums and the bound products are exact in double arithmetic.

void RequireSmallBinary(const GenericFormat& fmt, std::string_view tag) {
  RequireBinary(fmt, tag);
  if (fmt.p() > 12 || fmt.e_min() > 900)
    throw DomainError(std::string(tag) + ": exhaustive sweep needs p <= 12");
}

bool RepresentableAt(double x, int64_t e, const GenericFormat& fmt) {
  if (x == 0) return true;
  if (e < -fmt.e_min()) return false;
  double m = std::ldexp(x, static_cast<int>(-e));
  return m == std::trunc(m) && std::fabs(m) <= std::ldexp(1.0, fmt.p()) - 1;
}

// Positive canonical floats with amplitude in [-e_min, -e_min + width],
// descending. `pick` filters significands.
std::vector<double> Magnitudes(const GenericFormat& fmt, int width,
                               const std::function<bool(int64_t, int64_t)>& pick) {
  std::vector<double> out;
  const int64_t n_max = (int64_t{1} << fmt.p()) - 1, half = int64_t{1} << (fmt.p() - 1);
  for (int64_t e = -fmt.e_min(); e <= -fmt.e_min() + width; ++e)
    for (int64_t n = e == -fmt.e_min() ? 1 : half; n <= n_max; ++n)
      if (pick(n, e)) out.push_back(std::ldexp(static_cast<double>(n), static_cast<int>(e)));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

// Calls f on every non-increasing list of 1..max_len magnitudes.
void ForEachSortedList(const std::vector<double>& mags, size_t max_len,
                       const std::function<void(const std::vector<double>&)>& f) {
  std::vector<double> cur;
  std::function<void(size_t)> rec = [&](size_t start) {
    if (!cur.empty()) f(cur);
    if (cur.size() == max_len) return;
    for (size_t i = start; i < mags.size(); ++i) {
      cur.push_back(mags[i]);
      rec(i);
      cur.pop_back();
    }
  };
  rec(0);
}

std::string ListText(const std::vector<double>& xs) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < xs.size(); ++i) os << (i ? " " : "") << std::hexfloat << xs[i];
  os << "]";
  return os.str();
}

TheoremReport CheckRerepresent(const GenericFormat& fmt) {
  RequireSmallBinary(fmt, "Thm11");
  const SmallBinaryBackend be(fmt.p(), fmt.e_min());
  const int width = 1;
  auto mags = Magnitudes(fmt, width, [](int64_t, int64_t) { return true; });
  Sweep sw("Thm11", FmtTag(fmt) + ":amp" + Range(-fmt.e_min(), -fmt.e_min() + width) +
                        ":magnitude-sorted-lists-len<=4:sign-free");
  ForEachSortedList(mags, 4, [&](const std::vector<double>& xs) {
    if (sw.failed()) return;
    sw.trial();
    Rerepresent<SmallBinaryBackend> rr(
        be, std::make_unique<VectorSource<SmallBinaryBackend>>(be, xs), nullptr);
    StreamItem<double> it;
    int64_t last = kZeroAmplitude;
    size_t k = 0;
    try {
      while (rr.pull(&it) == PullStatus::kItem) {
        if (k >= xs.size() || it.value != xs[k] || it.amplitude > last ||
            !RepresentableAt(it.value, it.amplitude, fmt)) {
          sw.fail("list=" + ListText(xs) + " at=" + std::to_string(k));
          return;
        }
        last = it.amplitude;
        ++k;
      }
    } catch (const DomainError& e) {
      sw.fail("list=" + ListText(xs) + " " + e.what());
      return;
    }
    if (k != xs.size()) sw.fail("list=" + ListText(xs) + " lost items");
  });
  return sw.done();
}

TheoremReport CheckSigma3(const GenericFormat& fmt) {
  RequireSmallBinary(fmt, "Thm12");
  const SmallBinaryBackend be(fmt.p(), fmt.e_min());
  const int64_t ec = -fmt.e_min(), width = 4;
  const int64_t n_max = (int64_t{1} << fmt.p()) - 1;
  const double ulp = std::ldexp(1.0, 1 - fmt.p());
  // Every (n, e) pair in the window; zero once, at the wildcard amplitude.
  using Item = StreamItem<double>;
  std::vector<Item> reps{Item{0.0, kZeroAmplitude}};
  for (int64_t e = ec; e <= ec + width; ++e)
    for (int64_t n = -n_max; n <= n_max; ++n)
      if (n != 0) reps.push_back(Item{std::ldexp(static_cast<double>(n), static_cast<int>(e)), e});
  // Scaling by a power of two maps any admissible triple onto one with
  // e_c = -e_min; subnormal results stay exact after the shift.
  Sweep sw("Thm12", FmtTag(fmt) + ":e_c=" + std::to_string(ec) + ":a,b-all-reps-amp" +
                        Range(ec, ec + width) + ":c-all-significands");
  auto amp_ok = [&](const Item& x) {
    return x.value == 0 || (x.amplitude >= ec && RepresentableAt(x.value, x.amplitude, fmt));
  };
  auto le = [](int64_t x, int64_t y) {  // amplitude order with zero wildcards
    return x == kZeroAmplitude || y == kZeroAmplitude || x <= y;
  };
  for (const Item& a : reps) {
    for (const Item& b : reps) {
      if (!le(b.amplitude, a.amplitude)) continue;
      for (int64_t n = -n_max; n <= n_max; ++n) {
        Item c{std::ldexp(static_cast<double>(n), static_cast<int>(ec)), n ? ec : kZeroAmplitude};
        sw.trial();
        ThreeSumState<double> s{a, b};
        Sigma3Result<double> r;
        try {
          r = sigma3_step(be, s, c);
        } catch (const std::exception& e) {
          sw.fail("a=" + ListText({a.value}) + " b=" + ListText({b.value}) + " " + e.what());
          return sw.done();
        }
        double before = a.value + b.value + c.value;
        double after = r.state.a.value + r.state.b.value + (r.emitted ? r.emitted->value : 0.0);
        bool ok = before == after && amp_ok(r.state.a) && amp_ok(r.state.b) &&
                  le(r.state.b.amplitude, r.state.a.amplitude);
        if (ok && r.emitted) {
          double a1 = std::fabs(r.emitted->value);
          ok = std::fabs(r.state.a.value + r.state.b.value) <= 3 * ulp * a1 &&
               std::ldexp(2 - ulp, static_cast<int>(ec)) <= 3 * ulp * ulp * a1 &&
               r.state.b.amplitude == ec && amp_ok(*r.emitted) &&
               le(r.state.a.amplitude, r.emitted->amplitude);
        }
        if (!ok) {
          std::ostringstream os;
          os << std::hexfloat << "a=" << a.value << "@" << a.amplitude << " b=" << b.value << "@"
             << b.amplitude << " c=" << c.value << "@" << ec;
          sw.fail(os.str());
          return sw.done();
        }
      }
    }
  }
  return sw.done();
}

TheoremReport CheckAdder(const GenericFormat& fmt) {
  RequireSmallBinary(fmt, "Thm13");
  const SmallBinaryBackend be(fmt.p(), fmt.e_min());
  const int64_t n_max = (int64_t{1} << fmt.p()) - 1, half = int64_t{1} << (fmt.p() - 1);
  const double ulp = std::ldexp(1.0, 1 - fmt.p());
  // Short lists sweep a three-amplitude window; length 4 uses the boundary
  // significands of a wider window.
  auto wide = Magnitudes(fmt, 2, [](int64_t, int64_t) { return true; });
  auto edges = Magnitudes(fmt, 5, [&](int64_t n, int64_t e) {
    if (e == -fmt.e_min()) return n <= 3 || n == half - 1 || n == half || n == n_max;
    return n == half || n == half + 1 || n == n_max - 1 || n == n_max;
  });
  Sweep sw("Thm13", FmtTag(fmt) + ":signed-magnitude-sorted-lists:len<=3-amp" +
                        Range(-fmt.e_min(), -fmt.e_min() + 2) + ":len4-boundary-significands-amp" +
                        Range(-fmt.e_min(), -fmt.e_min() + 5));
  auto run = [&](const std::vector<double>& mags) {
    const size_t len = mags.size();
    const int64_t den = n_max - 1 - 6 * static_cast<int64_t>(len);
    const double num = 6.0 * static_cast<double>(len) + 6;
    for (unsigned signs = 0; signs < (1u << len) && !sw.failed(); ++signs) {
      std::vector<double> xs(mags);
      double total = 0;
      for (size_t i = 0; i < len; ++i) {
        if (signs >> i & 1) xs[i] = -xs[i];
        total += xs[i];
      }
      sw.trial();
      std::vector<double> c;
      try {
        c = drain(*add(be, xs, std::vector<double>{}, nullptr));
      } catch (const std::exception& e) {
        sw.fail("list=" + ListText(xs) + " " + e.what());
        return;
      }
      double sum = 0;
      for (double v : c) sum += v;
      bool ok = sum == total && c.size() <= len + 1;
      for (size_t i = 0; ok && i + 1 < c.size(); ++i) {
        ok = std::fabs(c[i + 1]) * static_cast<double>(den) <= num * std::fabs(c[i]);
        double rest = 0;
        for (size_t j = i + 1; j < c.size(); ++j) rest += c[j];
        ok = ok && std::fabs(rest) <= 3 * (1 + 2 * static_cast<double>(len)) * ulp * std::fabs(c[i]);
      }
      if (!ok) sw.fail("list=" + ListText(xs) + " out=" + ListText(c));
    }
  };
  ForEachSortedList(wide, 3, run);
  ForEachSortedList(edges, 4, [&](const std::vector<double>& m) {
    if (m.size() == 4) run(m);
  });
  return sw.done();
}

// --- Division ----------------------------------------------------------------

std::vector<double> RandomPseudo(std::mt19937_64& rng, int n, double ratio, int spread) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_int_distribution<int> ex(-spread, spread);
  std::vector<double> v;
  double x = std::ldexp(u(rng), ex(rng));
  for (int i = 0; i < n && x != 0; ++i) {
    v.push_back(x);
    x = x * ratio * u(rng);
  }
  return v;
}

ExactRational SumOf(const std::vector<double>& xs) {
  ExactRational s;
  for (double x : xs) s += ExactRational::FromDouble(x);
  return s;
}

TheoremReport CheckDivisionStep(const GenericFormat& fmt, uint64_t seed) {
  if (!fmt.is_binary64()) throw DomainError("Thm14: binary64 only");
  const Binary64Backend be;
  std::mt19937_64 rng(seed);
  Sweep sw("Thm14", "binary64:random-pseudo-expansions-len1-4+corners:seed=" +
                        std::to_string(seed) + ":digits<=6");
  const double half_ulp = std::ldexp(1.0, -53);
  uint64_t steps = 0;
  for (int run = 0; steps < 12000; ++run) {
    std::vector<double> r, d;
    switch (run % 5) {
      case 0:  // divisor whose head pair sits on a rounding tie
        d = {1.5, 1.5 * half_ulp};
        r = RandomPseudo(rng, 1 + run % 4, 0.45, 30);
        break;
      case 1:  // self quotient
        r = RandomPseudo(rng, 1 + run % 3, std::ldexp(1.0, -50), 30);
        d = r;
        break;
      case 2:  // adjacent floats
        r = {1.0, std::ldexp(1.0, -60)};
        d = {std::nextafter(1.0, 2.0), -std::ldexp(1.0, -70)};
        if (rng() & 1) std::swap(r, d);
        break;
      default:
        r = RandomPseudo(rng, 1 + static_cast<int>(rng() % 4), 0.45, 40);
        d = RandomPseudo(rng, 1 + static_cast<int>(rng() % 4), 0.45, 40);
    }
    if (r.empty() || d.empty()) continue;
    ExactRational R = SumOf(r), D = SumOf(d);
    if (D.is_zero()) continue;
    auto s = div(be, StreamPtr<Binary64Backend>(std::make_unique<VectorSource<Binary64Backend>>(be, r)),
                 d, nullptr);
    ExactRational Q;
    StreamItem<double> it;
    for (int k = 0; k < 6; ++k) {
      ExactRational W = R - Q * D;
      PullStatus st;
      try {
        st = s->pull(&it);
      } catch (const DomainError&) {
        break;  // underflow guard reached on a long quotient; not a step
      }
      if (st != PullStatus::kItem) {
        if (!W.is_zero()) sw.fail("r=" + ListText(r) + " d=" + ListText(d) + " early exhaustion");
        break;
      }
      ++steps;
      sw.trial();
      const DivStep& step = s->steps().back();
      Q += ExactRational::FromDouble(it.value);
      ExactRational W1 = R - Q * D;
      // Relative errors measured against the exact quantities.
      ExactRational e_w = (step.w - W).abs() / W.abs();
      ExactRational e_d = (step.d - D.abs()).abs() / D.abs();
      ExactRational ratio = step.w / step.d;
      ExactRational e_q = (step.q - ratio).abs() / ratio.abs();
      ExactRational e = max(e_w, max(e_d, e_q));
      bool ok = e < 1 && W1.abs() * (ExactRational(1) - e) <= e * (e + 3) * W.abs();
      if (ok && step.certified) ok = e <= step.eps && W1.abs() <= step.kappa * W.abs();
      if (!ok) {
        sw.fail("r=" + ListText(r) + " d=" + ListText(d) + " digit=" + std::to_string(k) +
                " eps=" + e.to_string());
        return sw.done();
      }
    }
  }
  return sw.done();
}

}  // namespace

// --- ReferenceUniverse -------------------------------------------------------

ReferenceUniverse::ReferenceUniverse(const GenericFormat& fmt, int64_t e_top, size_t budget)
    : fmt_(fmt), e_top_(e_top) {
  std::vector<std::pair<ExactRational, BFloat>> all;
  for (BFloat& f : enumerate_representations(fmt, e_top, budget)) {
    ExactRational v = value(f, fmt);
    all.emplace_back(std::move(v), std::move(f));
  }
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first < y.first;
    return x.second.e < y.second.e;
  });
  for (auto& [v, f] : all) {
    if (values_.empty() || values_.back() != v) {
      values_.push_back(v);
      reps_.emplace_back();
    }
    reps_.back().push_back(std::move(f));
  }
}

std::optional<size_t> ReferenceUniverse::find(const ExactRational& v) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), v);
  if (it == values_.end() || *it != v) return std::nullopt;
  return static_cast<size_t>(it - values_.begin());
}

std::vector<size_t> ReferenceUniverse::nearest_values(const ExactRational& x) const {
  if (values_.empty() || x < values_.front() || x > values_.back())
    throw DomainError("reference rounding: x outside the enumerated range");
  auto it = std::lower_bound(values_.begin(), values_.end(), x);
  auto up = static_cast<size_t>(it - values_.begin());
  if (*it == x) return {up};
  size_t down = up - 1;
  ExactRational dd = x - values_[down], du = values_[up] - x;
  if (dd < du) return {down};
  if (du < dd) return {up};
  return {down, up};
}

std::vector<size_t> ReferenceUniverse::round_values(const ExactRational& x,
                                                    RoundingMode mode) const {
  auto near = nearest_values(x);  // also range-checks x
  auto it = std::lower_bound(values_.begin(), values_.end(), x);
  auto ceil = static_cast<size_t>(it - values_.begin());
  size_t floor = *it == x ? ceil : ceil - 1;
  switch (mode) {
    case RoundingMode::kDown:
      return {floor};
    case RoundingMode::kUp:
      return {ceil};
    case RoundingMode::kTowardZero:
      return {x.sign() >= 0 ? floor : ceil};
    case RoundingMode::kNearestEven: {
      if (near.size() == 1) return near;
      std::vector<size_t> even;
      for (size_t i : near)
        if (reps_[i].front().n % 2 == 0) even.push_back(i);
      return even.size() == 1 ? even : near;
    }
  }
  return near;
}

std::vector<BFloat> ReferenceUniverse::round_class(const ExactRational& x,
                                                   RoundingMode mode) const {
  std::vector<BFloat> out;
  for (size_t i : round_values(x, mode))
    out.insert(out.end(), reps_[i].begin(), reps_[i].end());
  return out;
}

std::vector<BFloat> ref_round(const ExactRational& x, RoundingMode mode, const GenericFormat& fmt,
                              int64_t e_top) {
  return ReferenceUniverse(fmt, e_top).round_class(x, mode);
}

bool has_bounded_representation(const ExactRational& v, const GenericFormat& fmt) {
  if (v.is_zero()) return true;
  ExactRational scaled = v * ExactRational::Power(fmt.beta(), fmt.e_min());
  if (!scaled.is_integer()) return false;
  BigInt n = abs(scaled.num());
  while (n > fmt.n_max() && n % fmt.beta() == 0) n /= fmt.beta();
  return n <= fmt.n_max();
}

bool representable_with_amplitude(const ExactRational& v, int64_t e, const GenericFormat& fmt) {
  if (e < -fmt.e_min()) return false;
  if (v.is_zero()) return true;
  ExactRational n = v / ExactRational::Power(fmt.beta(), e);
  return n.is_integer() && abs(n.num()) <= fmt.n_max();
}

// --- Reports -----------------------------------------------------------------

std::string to_string(const TheoremReport& r) {
  std::string line = "tag=" + r.tag + " domain=" + r.domain + " trials=" +
                     std::to_string(r.trials) + " result=" + (r.passed ? "pass" : "fail");
  if (r.expect_failure) line += " expected=fail";
  if (!r.counterexample.empty()) line += " counterexample=\"" + r.counterexample + "\"";
  return line;
}

std::vector<std::string> theorem_tags() {
  std::vector<std::string> tags;
  for (int i = 1; i <= 14; ++i) tags.push_back("Thm" + std::to_string(i));
  tags.insert(tags.end(), {"Sterbenz", "TwoSum", "ExtDekker-raw3op"});
  return tags;
}

GenericFormat default_format(std::string_view tag) {
  if (tag == "Thm11" || tag == "Thm12" || tag == "Thm13") return GenericFormat(2, 6, 20);
  if (tag == "Thm14") return GenericFormat::Binary64();
  if (tag == "ExtDekker-raw3op") return GenericFormat(10, 2, 1);
  return GenericFormat(2, 4, 8);
}

GenericFormat format_for_radix(std::string_view tag, int beta) {
  if (beta < 2) throw std::invalid_argument("radix must be at least 2");
  if (beta == 2 && tag != "ExtDekker-raw3op") return default_format(tag);
  if (tag == "Thm14") throw DomainError("Thm14 runs on binary64 only");
  if (tag == "ExtDekker-raw3op" || tag == "Thm9") {
    if (beta == 10) return GenericFormat(10, 2, 1);
    if (beta == 4) return GenericFormat(4, 1, 1);
    return GenericFormat(beta, 3, 3);
  }
  if (beta == 10) return GenericFormat(10, 2, 0);
  return GenericFormat(beta, 3, 4);
}

TheoremReport check_theorem(std::string_view tag, const std::optional<GenericFormat>& fmt_in,
                            uint64_t seed) {
  const auto known = theorem_tags();
  if (std::find(known.begin(), known.end(), tag) == known.end())
    throw std::invalid_argument("unknown theorem tag: " + std::string(tag));
  const GenericFormat fmt = fmt_in ? *fmt_in : default_format(tag);
  if (tag == "Thm1") return CheckCanonical(fmt);
  if (tag == "Thm2") return CheckRoundingModes(fmt);
  if (tag == "Thm3") return CheckNearestError(fmt);
  if (tag == "Thm4") return CheckErrorAmplitude(fmt);
  if (tag == "Thm5" || tag == "Sterbenz") return CheckSterbenz(fmt, std::string(tag));
  if (tag == "Thm6") return CheckPlusLowerBound(fmt);
  if (tag == "Thm7") return CheckSumRepresentation(fmt);
  if (tag == "Thm8") return CheckSumErrorBound(fmt);
  if (tag == "Thm9") {
    if (fmt.beta() != 2 && fmt.beta() != 3) throw DomainError("Thm9: radix 2 or 3 only");
    return CheckRawThreeOp(fmt, "Thm9");
  }
  if (tag == "Thm10") return CheckExactProduct(fmt);
  if (tag == "Thm11") return CheckRerepresent(fmt);
  if (tag == "Thm12") return CheckSigma3(fmt);
  if (tag == "Thm13") return CheckAdder(fmt);
  if (tag == "Thm14") return CheckDivisionStep(fmt, seed);
  if (tag == "TwoSum") return CheckTwoSum(fmt);
  return CheckRawThreeOp(fmt, "ExtDekker-raw3op");
}

std::vector<TheoremReport> check_all(uint64_t seed) {
  std::vector<TheoremReport> out;
  for (int i = 1; i <= 14; ++i) out.push_back(check_theorem("Thm" + std::to_string(i), {}, seed));
  out.push_back(check_theorem("Sterbenz", GenericFormat(3, 3, 4), seed));
  out.push_back(check_theorem("Sterbenz", GenericFormat(10, 2, 0), seed));
  out.push_back(check_theorem("TwoSum", {}, seed));
  out.push_back(check_theorem("ExtDekker-raw3op", GenericFormat(10, 2, 1), seed));
  out.push_back(check_theorem("ExtDekker-raw3op", GenericFormat(4, 1, 1), seed));
  return out;
}

}  // namespace adapt
