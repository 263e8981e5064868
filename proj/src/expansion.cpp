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

#include "adapt/expansion.hpp"

#include <sstream>
#include <stdexcept>

#include "adapt/eft.hpp"

namespace adapt {

namespace {

std::vector<const BFloat*> Nonzero(const std::vector<BFloat>& xs) {
  std::vector<const BFloat*> out;
  for (const BFloat& x : xs)
    if (!x.is_zero()) out.push_back(&x);
  return out;
}

bool AllBounded(const std::vector<BFloat>& xs, const GenericFormat& fmt) {
  for (const BFloat& x : xs)
    if (!is_bounded(x, fmt)) return false;
  return true;
}

// Exact sum preferring the three-operation form. The magnitude test keeps
// the amplitude precondition satisfied on canonical representations.
EftPair<BFloat> Combine(const BFloat& a, const BFloat& b, const GenericFormat& fmt) {
  BFloat ca = canonicalize(a, fmt), cb = canonicalize(b, fmt);
  if (ca.is_zero() || cb.e <= ca.e) return fast_two_sum(ca, cb, fmt);
  return two_sum(ca, cb, fmt);
}

}  // namespace

bool validate(const Expansion& x, const GenericFormat& fmt) {
  if (!AllBounded(x.components, fmt)) return false;
  auto nz = Nonzero(x.components);
  for (size_t i = 0; i + 1 < nz.size(); ++i) {
    // The widest representation of x[i] gives the weakest requirement.
    auto kmax = max_bounded_amplitude(value(*nz[i], fmt), fmt);
    if (!kmax) return false;
    if (value(*nz[i + 1], fmt).abs() >= ExactRational::Power(fmt.beta(), *kmax)) return false;
  }
  return true;
}

bool validate(const PseudoExpansion& x, const GenericFormat& fmt) {
  if (x.epsilon.sign() <= 0 || x.epsilon >= ExactRational(1, 2)) return false;
  if (!AllBounded(x.components, fmt)) return false;
  auto nz = Nonzero(x.components);
  for (size_t i = 0; i + 1 < nz.size(); ++i)
    if (value(*nz[i + 1], fmt).abs() > x.epsilon * value(*nz[i], fmt).abs()) return false;
  return true;
}

ExactRational value_of(const std::vector<BFloat>& components, const GenericFormat& fmt) {
  ExactRational sum;
  for (const BFloat& c : components) sum += value(c, fmt);
  return sum;
}

ExactRational tail_bound(const PseudoExpansion& x, size_t i, const GenericFormat& fmt) {
  if (i >= x.components.size()) throw std::out_of_range("tail_bound: index out of range");
  return x.epsilon / (ExactRational(1) - x.epsilon) * value(x.components[i], fmt).abs();
}

PseudoExpansion from_tail_bound(std::vector<BFloat> components, const ExactRational& lambda) {
  if (lambda.sign() <= 0 || lambda >= ExactRational(1, 3))
    throw DomainError("from_tail_bound: lambda must lie in (0, 1/3)");
  PseudoExpansion out;
  for (BFloat& c : components)
    if (!c.is_zero()) out.components.push_back(std::move(c));
  out.epsilon = lambda / (ExactRational(1) - lambda);
  return out;
}

Expansion renormalize(const PseudoExpansion& x, const GenericFormat& fmt) {
  if (fmt.beta() != 2) throw DomainError("renormalize: radix 2 only");
  std::vector<BFloat> cur;
  for (const BFloat& c : x.components)
    if (!c.is_zero()) cur.push_back(canonicalize(c, fmt));
  // Each round is a bottom-up accumulate-and-split followed by a top-down
  // sweep that drops zeros. One round suffices for valid pseudo-expansions;
  // the loop is a guard for inputs that overlap more than advertised.
  for (size_t round = 0; round <= cur.size() + 1; ++round) {
    if (cur.size() <= 1 || validate(Expansion{cur}, fmt)) break;
    size_t n = cur.size();
    std::vector<BFloat> e(n);
    BFloat s = cur[n - 1];
    for (size_t i = n - 1; i-- > 0;) {
      auto [hi, lo] = Combine(cur[i], s, fmt);
      s = hi;
      e[i + 1] = lo;
    }
    e[0] = s;
    std::vector<BFloat> out;
    s = e[0];
    for (size_t i = 1; i < n; ++i) {
      auto [hi, lo] = Combine(s, e[i], fmt);
      if (lo.is_zero()) {
        s = hi;
      } else {
        if (!hi.is_zero()) out.push_back(hi);
        s = lo;
      }
    }
    if (!s.is_zero()) out.push_back(s);
    cur = std::move(out);
  }
  if (!validate(Expansion{cur}, fmt))
    throw std::logic_error("renormalize: output still overlaps");
  return Expansion{std::move(cur)};
}

ParsedExpansion parse_expansion(std::string_view text, const GenericFormat& fmt) {
  ParsedExpansion out;
  std::istringstream in{std::string(text)};
  std::string tok;
  bool first = true;
  while (in >> tok) {
    if (first && tok.rfind("eps=", 0) == 0) {
      out.epsilon = ExactRational::Parse(std::string_view(tok).substr(4));
    } else {
      out.components.push_back(parse_bfloat(tok, fmt));
    }
    first = false;
  }
  return out;
}

std::string serialize(const std::vector<BFloat>& components,
                      const std::optional<ExactRational>& epsilon, bool hex) {
  std::string out;
  if (epsilon) out += "eps=" + epsilon->to_string();
  for (const BFloat& c : components) {
    if (!out.empty()) out += ' ';
    out += hex ? to_hex_string(c) : to_string(c);
  }
  return out;
}

}  // namespace adapt
