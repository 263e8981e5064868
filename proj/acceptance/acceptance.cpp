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

// Release acceptance run. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Case counts and tolerances are pinned below.

#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adapt/arith.hpp"
#include "adapt/backend.hpp"
#include "adapt/eft.hpp"
#include "adapt/expr.hpp"
#include "adapt/fmodel.hpp"
#include "adapt/oracle.hpp"

#ifndef ADAPT_CLI_PATH
#error "ADAPT_CLI_PATH must point at the adapt executable"
#endif

namespace {

using adapt::BFloat;
using adapt::Binary64Backend;
using adapt::ExactRational;
using adapt::GenericFormat;

// --- Pinned thresholds ---------------------------------------------------------
constexpr double kPerTagSeconds = 60.0;       // each exhaustive sweep
constexpr int kEftCases = 100000;             // randomized EFT operand pairs
constexpr int kPipelineCases = 100000;        // add and mul runs, each
constexpr int kAdderRunsPerLength = 2000;     // L = 2..8, 14000 total
constexpr int kDivisionCases = 1500;
constexpr int kDivisionDigits = 6;
constexpr int kDetCasesPerDim = 6000;         // 2x2 and 3x3, 12000 total
constexpr int kHardwareCases = 100000;        // plus the tie and subnormal sets
constexpr int kHardwareTieCases = 20000;
constexpr int kHardwareSubnormalCases = 20000;
const char kMilesExpr[] = "4.995*1.609344 - 8";

const Binary64Backend kBe;
using Src = adapt::VectorSource<Binary64Backend>;

ExactRational Q(double x) { return ExactRational::FromDouble(x); }
ExactRational Sum(const std::vector<double>& v) {
  ExactRational s;
  for (double x : v) s += Q(x);
  return s;
}
adapt::StreamPtr<Binary64Backend> Stream(std::vector<double> v) {
  return std::make_unique<Src>(kBe, std::move(v));
}

struct Line {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

void Print(const Line& l) {
  std::cout << "criterion " << l.id << ": " << (l.pass ? "PASS" : "FAIL") << " " << l.name
            << " " << l.detail << std::endl;
}

// Random double with a full random significand and exponent in [-spread, spread].
double RandomDouble(std::mt19937_64& rng, int spread) {
  std::uniform_int_distribution<int> ex(-spread, spread);
  uint64_t frac = rng() & ((uint64_t{1} << 52) - 1);
  double m = std::bit_cast<double>((uint64_t{1023} << 52) | frac);  // [1, 2)
  if (rng() & 1) m = -m;
  return std::ldexp(m, ex(rng));
}

// Pseudo-expansion of n terms with chain ratio at most `ratio`, starting
// from `head`.
std::vector<double> PseudoFrom(std::mt19937_64& rng, double head, int n, double ratio) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> v;
  double x = head;
  for (int i = 0; i < n && x != 0; ++i) {
    v.push_back(x);
    x = x * ratio * u(rng);
  }
  return v;
}

std::vector<double> RandomPseudo(std::mt19937_64& rng, int n, double ratio, int spread = 40) {
  return PseudoFrom(rng, RandomDouble(rng, spread), n, ratio);
}

std::string RunCommand(const std::string& cmd, int* status) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    *status = -1;
    return out;
  }
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  int rc = pclose(p);
  *status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return out;
}

std::string Quote(const std::string& s) { return "'" + s + "'"; }

// --- 1. Theorem sweep --------------------------------------------------------------

Line TheoremSweep(uint64_t seed) {
  // The same invocations `check all` makes, one process per tag so each
  // can be timed.
  std::vector<std::string> runs;
  for (const auto& tag : adapt::theorem_tags()) {
    if (tag == "ExtDekker-raw3op") continue;
    runs.push_back(tag);
  }
  runs.push_back("Sterbenz --beta 3");
  runs.push_back("Sterbenz --beta 10");
  runs.push_back("ExtDekker-raw3op --beta 10");
  runs.push_back("ExtDekker-raw3op --beta 4");
  bool ok = true;
  double slowest = 0;
  std::string slowest_tag, failures;
  for (const auto& run : runs) {
    auto t0 = std::chrono::steady_clock::now();
    int status = 0;
    std::string out = RunCommand(std::string(ADAPT_CLI_PATH) + " check " + run + " --seed " +
                                     std::to_string(seed) + " 2>&1",
                                 &status);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "  " << out;
    bool expected = out.find("result=pass") != std::string::npos ||
                    out.find("result=fail expected=fail") != std::string::npos;
    if (status != 0 || !expected || secs >= kPerTagSeconds) {
      ok = false;
      failures += " [" + run + " status=" + std::to_string(status) + "]";
    }
    if (secs > slowest) {
      slowest = secs;
      slowest_tag = run;
    }
  }
  char d[160];
  std::snprintf(d, sizeof d, "runs=%zu slowest=%.1fs(%s) limit=%.0fs", runs.size(), slowest,
                slowest_tag.c_str(), kPerTagSeconds);
  return {1, "theorem-sweep", ok, d + failures};
}

// --- 2. Counterexample reproduction ----------------------------------------------

Line Counterexamples() {
  struct Case {
    GenericFormat fmt;
    BFloat input;
    const char* label;
  };
  // 9.9 + 9.9 with two decimal digits; 3 + 3 with one base-4 digit.
  const Case cases[] = {{GenericFormat(10, 2, 1), BFloat(99, -1), "radix10 9.9+9.9"},
                        {GenericFormat(4, 1, 1), BFloat(3, 0), "radix4 3+3"}};
  bool ok = true;
  std::string detail;
  for (const Case& c : cases) {
    ExactRational exact = adapt::value(c.input, c.fmt) * 2;
    auto raw = adapt::fast_two_sum_unchecked(c.input, c.input, c.fmt);
    ExactRational got = adapt::value(raw.hi, c.fmt) + adapt::value(raw.lo, c.fmt);
    auto ts = adapt::two_sum(c.input, c.input, c.fmt);
    bool ts_exact = adapt::value(ts.hi, c.fmt) + adapt::value(ts.lo, c.fmt) == exact;
    // The sweep must find the same pair as its first counterexample.
    auto rep = adapt::check_theorem("ExtDekker-raw3op", c.fmt);
    std::string probe = "a=" + adapt::to_string(c.input) + " b=" + adapt::to_string(c.input);
    bool found = !rep.passed && rep.counterexample.rfind(probe, 0) == 0;
    bool this_ok = got != exact && ts_exact && found;
    ok &= this_ok;
    detail += std::string(" [") + c.label + " hi=" + adapt::to_string(raw.hi) +
              " lo=" + adapt::to_string(raw.lo) + " got=" + got.to_string() +
              " exact=" + exact.to_string() + " two_sum=" + (ts_exact ? "exact" : "inexact") +
              " sweep=" + (found ? "reproduced" : "missing") + "]";
  }
  return {2, "counterexamples", ok, detail.substr(1)};
}

// --- 3. Exactness identities -------------------------------------------------------

Line Exactness(uint64_t seed) {
  std::mt19937_64 rng(seed);
  uint64_t eft = 0, adds = 0, muls = 0, corners = 0, guarded = 0;
  std::string bad;
  auto check_eft = [&](double a, double b) {
    auto s = adapt::two_sum(a, b);
    if (Q(s.hi) + Q(s.lo) != Q(a) + Q(b)) bad = "two_sum";
    double big = std::fabs(a) >= std::fabs(b) ? a : b, small = big == a ? b : a;
    auto f = adapt::fast_two_sum(big, small);
    if (Q(f.hi) + Q(f.lo) != Q(a) + Q(b)) bad = "fast_two_sum";
    auto p = adapt::two_product(a, b);
    if (Q(p.hi) + Q(p.lo) != Q(a) * Q(b)) bad = "two_product";
    auto pf = adapt::two_product_fma(a, b);
    if (pf.hi != p.hi || pf.lo != p.lo) bad = "two_product_fma";
  };
  for (int i = 0; i < kEftCases && bad.empty(); ++i) {
    double a = RandomDouble(rng, 200), b;
    switch (i % 4) {
      case 0: b = RandomDouble(rng, 200); break;
      case 1: b = -a * (1 + std::ldexp(RandomDouble(rng, 0), -30)); break;  // cancellation
      case 2: b = std::ldexp(a, -53 - static_cast<int>(rng() % 4)); break;  // tie region
      default: b = std::nextafter(a, 0.0); break;
    }
    check_eft(a, b);
    ++eft;
  }
  const double corner_values[] = {0.0, 1.0, -1.0, 0x1p-52, 1.0 + 0x1p-52, 0x1.fffffffffffffp0,
                                  9007199254740991.0, 0x1p-500, 0x1.8p+500, 3.0, 0.1, -0.3};
  for (double a : corner_values)
    for (double b : corner_values) {
      try {
        check_eft(a, b);
        ++corners;
      } catch (const adapt::DomainError&) {
        ++guarded;  // outside the documented no-underflow/no-overflow domain
      }
    }
  for (int i = 0; i < kPipelineCases && bad.empty(); ++i) {
    auto a = RandomPseudo(rng, 1 + rng() % 4, 0.45), b = RandomPseudo(rng, 1 + rng() % 4, 0.45);
    if (i % 3 == 0) {  // heavy cancellation
      b = a;
      for (double& x : b) x = -x;
      b.push_back(std::ldexp(a.front(), -70));
    }
    auto s = adapt::drain(*adapt::add(kBe, Stream(a), Stream(b), nullptr));
    if (Sum(s) != Sum(a) + Sum(b)) bad = "add pipeline";
    ++adds;
    auto c = RandomPseudo(rng, 1 + rng() % 4, 0.45, 100), d = RandomPseudo(rng, 1 + rng() % 4, 0.45, 100);
    auto m = adapt::drain(*adapt::mul(kBe, Stream(c), Stream(d), nullptr));
    if (Sum(m) != Sum(c) * Sum(d)) bad = "mul pipeline";
    ++muls;
  }
  std::string detail = "eft_cases=" + std::to_string(eft) + " corners=" + std::to_string(corners) +
                       " corners_guarded=" + std::to_string(guarded) +
                       " add_runs=" + std::to_string(adds) + " mul_runs=" + std::to_string(muls) +
                       " violations=" + (bad.empty() ? "0" : "1(" + bad + ")");
  return {3, "exactness", bad.empty() && eft >= 100000, detail};
}

// --- 4. Adder chain ratio ----------------------------------------------------------

Line AdderChain(uint64_t seed) {
  std::mt19937_64 rng(seed + 4);
  const GenericFormat b64 = GenericFormat::Binary64();
  uint64_t runs = 0, violations = 0;
  size_t longest = 0;
  for (int len = 2; len <= 8; ++len) {
    const ExactRational eps = *adapt::sum_chain_ratio(len, b64);
    for (int t = 0; t < kAdderRunsPerLength; ++t) {
      int la = 1 + static_cast<int>(rng() % (len - 1));
      static const double kRatios[] = {0.45, 0x1p-20, 0x1p-53};
      double ratio = kRatios[t % 3];
      auto a = RandomPseudo(rng, la, ratio);
      // Every fifth run cancels the heads.
      auto b = t % 5 == 0 ? PseudoFrom(rng, -a[0], len - la, ratio)
                          : RandomPseudo(rng, len - la, ratio);
      const size_t l = a.size() + b.size();
      auto c = adapt::drain(*adapt::add(kBe, a, b, nullptr));
      bool ok = c.size() <= l + 1 && Sum(c) == Sum(a) + Sum(b);
      for (size_t i = 0; ok && i + 1 < c.size(); ++i)
        ok = Q(c[i + 1]).abs() <= eps * Q(c[i]).abs();
      violations += ok ? 0 : 1;
      longest = std::max(longest, c.size());
      ++runs;
    }
  }
  return {4, "adder-chain-ratio", violations == 0 && runs >= 10000,
          "runs=" + std::to_string(runs) + " L=2..8 violations=" + std::to_string(violations) +
              " longest_output=" + std::to_string(longest)};
}

// --- 5. Division contraction -------------------------------------------------------

Line Division(uint64_t seed) {
  std::mt19937_64 rng(seed + 5);
  uint64_t cases = 0, steps = 0, violations = 0, uncertified = 0;
  std::string first_bad;
  for (int t = 0; t < kDivisionCases; ++t) {
    auto r = RandomPseudo(rng, 1 + rng() % 4, 0.45), d = RandomPseudo(rng, 1 + rng() % 4, 0.45);
    const ExactRational R = Sum(r), D = Sum(d);
    auto s = adapt::div(kBe, Stream(r), d, nullptr);
    std::vector<double> q;
    ExactRational eps_max;
    adapt::StreamItem<double> it;
    for (int k = 1; k <= kDivisionDigits; ++k) {
      ExactRational W = R - Sum(q) * D;
      if (s->pull(&it) != adapt::PullStatus::kItem) {
        if (!W.is_zero()) ++violations;
        break;
      }
      q.push_back(it.value);
      ++steps;
      const adapt::DivStep& st = s->steps().back();
      if (!st.certified) {
        ++uncertified;
        break;
      }
      // The certified budget must cover the measured error of this step.
      // The divisor head is kept as a magnitude.
      ExactRational ew = (st.w - W).abs() / W.abs();
      ExactRational ed = (st.d - D.abs()).abs() / D.abs();
      ExactRational eq = (st.q - st.w / st.d).abs() / (st.w / st.d).abs();
      bool ok = std::max(ew, std::max(ed, eq)) <= st.eps;
      // Per-step inequality.
      ExactRational W1 = R - Sum(q) * D;
      ok &= W1.abs() <= st.kappa * W.abs();
      if (st.eps > eps_max) eps_max = st.eps;
      ExactRational kappa = eps_max * (eps_max + 3) / (1 - eps_max);
      ExactRational kappa_k = 1;
      for (int j = 0; j < k; ++j) kappa_k *= kappa;
      ok &= W1.abs() / R.abs() <= kappa_k;
      if (!ok) {
        ++violations;
        if (first_bad.empty()) first_bad = " first_bad_case=" + std::to_string(t);
        break;
      }
    }
    ++cases;
  }
  return {5, "division-contraction",
          violations == 0 && uncertified == 0 && cases >= 1000,
          "cases=" + std::to_string(cases) + " steps=" + std::to_string(steps) +
              " k<=" + std::to_string(kDivisionDigits) + " uncertified=" +
              std::to_string(uncertified) + " violations=" + std::to_string(violations) + first_bad};
}

// --- 6. Predicate coherency --------------------------------------------------------

Line Predicates(uint64_t seed) {
  std::mt19937_64 rng(seed + 6);
  std::uniform_real_distribution<double> u(-1, 1);
  auto nudge = [&](double x) {
    switch (rng() % 3) {
      case 0: return std::nextafter(x, INFINITY);
      case 1: return std::nextafter(x, -INFINITY);
      default: return x;
    }
  };
  using M = std::vector<std::vector<ExactRational>>;
  uint64_t cases = 0, disagreements = 0;
  std::array<uint64_t, 3> signs{};
  auto run = [&](const M& m) {
    int got = adapt::sign_det(kBe, m), want = adapt::sign_det_exact(m);
    disagreements += got != want;
    ++signs[want + 1];
    ++cases;
  };
  for (int t = 0; t < kDetCasesPerDim; ++t) {
    // Rows nearly proportional.
    double a = u(rng), b = u(rng), s = u(rng) * 1e3;
    if (t % 3 == 0) s = std::ldexp(1.0, static_cast<int>(rng() % 21) - 10);  // exact rows
    double c = nudge(a * s), d = nudge(b * s);
    run({{Q(a), Q(b)}, {Q(c), Q(d)}});
  }
  for (int t = 0; t < kDetCasesPerDim; ++t) {
    // Orientation of nearly collinear points.
    double px = u(rng), py = u(rng), qx = u(rng), qy = u(rng), s = u(rng) * 4;
    double rx = nudge(px + s * (qx - px)), ry = nudge(py + s * (qy - py));
    if (t % 3 == 0) {  // integer grid, so unperturbed points are exactly collinear
      std::uniform_int_distribution<int> g(-1000, 1000), k(-5, 5);
      px = g(rng), py = g(rng), qx = g(rng), qy = g(rng);
      int m = k(rng);
      rx = nudge(px + m * (qx - px));
      ry = nudge(py + m * (qy - py));
    }
    if (t % 2) {
      rx = std::ldexp(rx, 30);  // spread magnitudes
      px = std::ldexp(px, 30);
      qx = std::ldexp(qx, 30);
    }
    run({{Q(px), Q(py), 1}, {Q(qx), Q(qy), 1}, {Q(rx), Q(ry), 1}});
  }
  return {6, "predicate-coherency", disagreements == 0 && cases >= 10000,
          "cases=" + std::to_string(cases) + " oracle_signs(-/0/+)=" + std::to_string(signs[0]) +
              "/" + std::to_string(signs[1]) + "/" + std::to_string(signs[2]) +
              " disagreements=" + std::to_string(disagreements)};
}

// --- 7. Adaptivity -----------------------------------------------------------------

struct EvalRun {
  int status = 0;
  long firings = -1;
  long trace_lines = 0;
  std::string sign;
};

EvalRun CliEval(const std::string& format, const std::string& target) {
  EvalRun r;
  std::string out = RunCommand(std::string(ADAPT_CLI_PATH) + " eval " + Quote(kMilesExpr) +
                                   " --trace --target " + target + " --format " + format,
                               &r.status);
  std::istringstream in(out);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("trace stage=", 0) == 0) ++r.trace_lines;
    if (line.rfind("firings=", 0) == 0) r.firings = std::stol(line.substr(8));
    if (line.rfind("sign=", 0) == 0) r.sign = line.substr(5);
  }
  return r;
}

Line Adaptivity() {
  const int oracle = adapt::eval_exact(*adapt::parse_expr(kMilesExpr)).sign();
  const std::string want = oracle > 0 ? "+" : oracle < 0 ? "-" : "0";
  std::string detail;
  bool ok = true;
  // binary64 answers both targets with its first digit, so only the
  // narrower format can show the difference; both are reported.
  for (const char* fmt : {"binary32", "binary64"}) {
    EvalRun loose = CliEval(fmt, "1e-1"), tight = CliEval(fmt, "1e-9");
    bool signs = loose.status == 0 && tight.status == 0 && loose.sign == want && tight.sign == want;
    bool traced = loose.trace_lines > 0 && tight.trace_lines > 0;
    bool strict = loose.firings < tight.firings;
    if (std::string(fmt) == "binary32") ok = signs && traced && strict;
    else ok &= signs && traced;  // equal counts here are expected
    detail += std::string(detail.empty() ? "" : " ") + "[" + fmt +
              " firings(1e-1)=" + std::to_string(loose.firings) +
              " firings(1e-9)=" + std::to_string(tight.firings) +
              (strict ? " strict" : " not-strict") + " sign=" + loose.sign + "," + tight.sign +
              " oracle=" + want + "]";
  }
  return {7, "adaptivity", ok, detail};
}

// --- 8. Hardware agreement ---------------------------------------------------------

Line Hardware(uint64_t seed) {
  std::mt19937_64 rng(seed + 8);
  const GenericFormat b64 = GenericFormat::Binary64();
  uint64_t pairs = 0, ops = 0, mismatches = 0, subnormal_results = 0, ties = 0;
  auto compare = [&](double a, double b) {
    BFloat fa = adapt::from_double(a), fb = adapt::from_double(b);
    auto same = [&](const BFloat& m, double hw) {
      if (!std::isfinite(hw)) return;  // overflow is outside the model
      ++ops;
      if (std::bit_cast<uint64_t>(adapt::to_double(m)) != std::bit_cast<uint64_t>(hw) &&
          !(hw == 0 && adapt::to_double(m) == 0))
        ++mismatches;
      if (hw != 0 && std::fabs(hw) < 0x1p-1022) ++subnormal_results;
    };
    same(adapt::add(fa, fb, b64), a + b);
    same(adapt::sub(fa, fb, b64), a - b);
    same(adapt::mul(fa, fb, b64), a * b);
    ++pairs;
  };
  auto any_finite = [&] {
    double d;
    do {
      d = std::bit_cast<double>(rng());
    } while (!std::isfinite(d));
    return d;
  };
  for (int i = 0; i < kHardwareCases; ++i) compare(any_finite(), any_finite());
  // Exact ties: a + b lands halfway between neighbours; odd 27-bit factors
  // whose product needs 54 bits.
  for (int i = 0; i < kHardwareTieCases; ++i) {
    if (i % 2 == 0) {
      double a = std::ldexp(std::fabs(RandomDouble(rng, 0)), static_cast<int>(rng() % 200) - 100);
      double half_ulp = std::ldexp(1.0, std::ilogb(a) - 53);
      double b = (rng() & 1) ? half_ulp : -half_ulp;
      compare(a, b);
    } else {
      uint64_t x = (rng() & ((1u << 27) - 1)) | (1u << 26) | 1u;
      uint64_t y = (rng() & ((1u << 27) - 1)) | (1u << 26) | 1u;
      int sh = static_cast<int>(rng() % 100) - 50;
      compare(std::ldexp(static_cast<double>(x), sh), std::ldexp(static_cast<double>(y), -sh));
    }
    ++ties;
  }
  // Subnormal boundary: sums near 2^-1022 and products landing below it.
  for (int i = 0; i < kHardwareSubnormalCases; ++i) {
    if (i % 2 == 0) {
      double a = std::ldexp(std::fabs(RandomDouble(rng, 0)), -1022 - static_cast<int>(rng() % 3));
      double b = -std::ldexp(std::fabs(RandomDouble(rng, 0)), -1022 - static_cast<int>(rng() % 60));
      compare(a, b);
    } else {
      int ea = -500 - static_cast<int>(rng() % 60);
      int eb = -1022 - ea - static_cast<int>(rng() % 60);
      compare(std::ldexp(RandomDouble(rng, 0), ea), std::ldexp(RandomDouble(rng, 0), eb));
    }
  }
  return {8, "hardware-agreement",
          mismatches == 0 && pairs >= static_cast<uint64_t>(kHardwareCases),
          "pairs=" + std::to_string(pairs) + " ops=" + std::to_string(ops) +
              " tie_pairs=" + std::to_string(ties) +
              " subnormal_results=" + std::to_string(subnormal_results) +
              " mismatches=" + std::to_string(mismatches)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance run"};
  std::vector<int> only;
  uint64_t seed = adapt::kDefaultSeed;
  app.add_option("--only", only, "Criteria to run (default all)")->check(CLI::Range(1, 8));
  app.add_option("--seed", seed, "Seed for the randomized criteria")->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  std::set<int> pick(only.begin(), only.end());
  auto want = [&](int id) { return pick.empty() || pick.count(id) > 0; };

  bool all = true;
  auto run = [&](int id, auto&& fn) {
    if (!want(id)) return;
    auto t0 = std::chrono::steady_clock::now();
    Line l;
    try {
      l = fn();
    } catch (const std::exception& e) {
      l = {id, "error", false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char t[32];
    std::snprintf(t, sizeof t, " time=%.1fs", secs);
    l.detail += t;
    Print(l);
    all &= l.pass;
  };
  run(1, [&] { return TheoremSweep(seed); });
  run(2, [&] { return Counterexamples(); });
  run(3, [&] { return Exactness(seed); });
  run(4, [&] { return AdderChain(seed); });
  run(5, [&] { return Division(seed); });
  run(6, [&] { return Predicates(seed); });
  run(7, [&] { return Adaptivity(); });
  run(8, [&] { return Hardware(seed); });
  std::cout << "acceptance: " << (all ? "PASS" : "FAIL") << std::endl;
  return all ? 0 : 1;
}
