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

// Infix expressions over exact literals, evaluated adaptively by the stream
// operators. Every subexpression is kept as a fraction N / D of two streams;
// only the final quotient is a (possibly infinite) division stream.

#ifndef ADAPT_EXPR_HPP_
#define ADAPT_EXPR_HPP_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adapt/arith.hpp"
#include "adapt/backend.hpp"
#include "adapt/rational.hpp"
#include "adapt/toolset.hpp"

namespace adapt {

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, size_t position)
      : std::invalid_argument(what + " at offset " + std::to_string(position)),
        position_(position) {}
  size_t position() const { return position_; }

 private:
  size_t position_;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { kLiteral, kVariable, kNeg, kAdd, kSub, kMul, kDiv };
  Kind kind = Kind::kLiteral;
  ExactRational literal;
  std::string name;
  ExprPtr lhs, rhs;
};

using Bindings = std::map<std::string, ExactRational>;

ExprPtr make_literal(const ExactRational& v);
ExprPtr make_binary(Expr::Kind kind, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_neg(ExprPtr x);

// Grammar: sums of products of unary +/-, parentheses, identifiers, and
// decimal ("4.995", "1e-3"), hex-float ("0x1.8p-3") or integer literals.
// Throws ParseError.
ExprPtr parse_expr(std::string_view text);
std::string to_string(const Expr& e);

// Exact value. Throws DomainError on a zero divisor and
// std::invalid_argument on an unbound variable.
ExactRational eval_exact(const Expr& e, const Bindings& vars = {});

// a*d - b*c, or the cofactor expansion along the first row.
ExprPtr determinant_expr(const std::vector<std::vector<ExprPtr>>& m);
int sign_det_exact(const std::vector<std::vector<ExactRational>>& m);

// Parses "name=value" with the value in any literal syntax.
std::pair<std::string, ExactRational> parse_binding(std::string_view text);

// Negates every item of a stream.
template <class Backend>
class NegateStream : public Stream<Backend> {
 public:
  NegateStream(Backend be, StreamPtr<Backend> src) : be_(std::move(be)), src_(std::move(src)) {}
  PullStatus pull(typename Stream<Backend>::Item* out) override {
    PullStatus st = src_->pull(out);
    if (st == PullStatus::kItem) out->value = be_.negate(out->value);
    return st;
  }
  std::optional<ExactRational> tail_bound() const override { return src_->tail_bound(); }
  std::optional<int64_t> amplitude_ceiling() const override { return src_->amplitude_ceiling(); }

 private:
  Backend be_;
  StreamPtr<Backend> src_;
};

template <class V>
struct EvalResult {
  std::vector<V> components;
  ExactRational value;  // sum of the components
  ExactRational bound;  // certified |exact - value|
  int sign = 0;
  bool exact = false;   // the quotient stream ran out: value is exact
  uint64_t pulls = 0;
  uint64_t firings = 0;
  std::map<std::string, uint64_t> counts;
};

namespace internal {

// Exact expansion of a rational that the backend can hold exactly as a sum
// of components: successive rounding.
template <class Backend>
std::vector<typename Backend::value_type> SplitExact(const Backend& be, ExactRational x) {
  std::vector<typename Backend::value_type> out;
  while (!x.is_zero()) {
    auto c = be.round(x);
    ExactRational cv = be.to_rational(c);
    if (cv.is_zero()) throw DomainError("literal underflows the format");
    x -= cv;
    out.push_back(std::move(c));
  }
  return out;
}

template <class Backend>
struct Fraction {
  std::function<StreamPtr<Backend>()> num;
  std::function<StreamPtr<Backend>()> den;  // empty when the denominator is 1
};

template <class Backend>
std::function<StreamPtr<Backend>()> Constant(const Backend& be,
                                             std::vector<typename Backend::value_type> v) {
  return [be, v] { return StreamPtr<Backend>(std::make_unique<VectorSource<Backend>>(be, v)); };
}

template <class Backend>
Fraction<Backend> LiteralFraction(const Backend& be, const ExactRational& x) {
  if (x.is_integer()) return {Constant(be, SplitExact(be, x)), {}};
  // Dyadic values that fit the backend exactly stay a single component.
  auto c = be.round(x);
  if (be.to_rational(c) == x) return {Constant(be, {c}), {}};
  return {Constant(be, SplitExact(be, ExactRational(x.num()))),
          Constant(be, SplitExact(be, ExactRational(x.den())))};
}

template <class Backend>
class Builder {
 public:
  using Factory = std::function<StreamPtr<Backend>()>;
  Builder(const Backend& be, const Bindings& vars, Instrumentation* instr)
      : be_(be), vars_(vars), instr_(instr) {}

  Fraction<Backend> Build(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::kLiteral:
        return LiteralFraction(be_, e.literal);
      case Expr::Kind::kVariable: {
        auto it = vars_.find(e.name);
        if (it == vars_.end()) throw std::invalid_argument("unbound variable: " + e.name);
        return LiteralFraction(be_, it->second);
      }
      case Expr::Kind::kNeg: {
        auto x = Build(*e.lhs);
        return {Neg(x.num), x.den};
      }
      case Expr::Kind::kAdd:
      case Expr::Kind::kSub: {
        auto x = Build(*e.lhs), y = Build(*e.rhs);
        Factory ny = e.kind == Expr::Kind::kSub ? Neg(y.num) : y.num;
        return {Add(Mul(x.num, y.den), Mul(ny, x.den)), Mul(x.den, y.den)};
      }
      case Expr::Kind::kMul: {
        auto x = Build(*e.lhs), y = Build(*e.rhs);
        return {Mul(x.num, y.num), Mul(x.den, y.den)};
      }
      case Expr::Kind::kDiv: {
        auto x = Build(*e.lhs), y = Build(*e.rhs);
        return {Mul(x.num, y.den), Mul(x.den, y.num)};
      }
    }
    throw std::logic_error("unknown expression kind");
  }

 private:
  Factory Neg(Factory f) {
    Backend be = be_;
    return [be, f] { return StreamPtr<Backend>(std::make_unique<NegateStream<Backend>>(be, f())); };
  }
  Factory Add(Factory x, Factory y) {
    Backend be = be_;
    Instrumentation* instr = instr_;
    return [be, instr, x, y] { return add(be, x(), y(), instr); };
  }
  // An empty factory stands for the constant 1.
  Factory Mul(Factory x, Factory y) {
    if (!x) return y;
    if (!y) return x;
    Backend be = be_;
    Instrumentation* instr = instr_;
    return [be, instr, x, y] { return mul(be, x(), y(), instr); };
  }

  const Backend& be_;
  const Bindings& vars_;
  Instrumentation* instr_;
};

}  // namespace internal

// Pulls the quotient N / D until the certified bound meets `target` and the
// sign is settled, or the quotient ends. A zero target asks for the exact
// value. Throws DomainError on a zero divisor or when max_pulls is reached.
template <class Backend>
EvalResult<typename Backend::value_type> eval_adaptive(const Backend& be, const Expr& e,
                                                       const Bindings& vars,
                                                       const ExactRational& target,
                                                       Instrumentation* instr,
                                                       size_t max_pulls = 4096) {
  Instrumentation local;
  if (!instr) instr = &local;
  internal::Builder<Backend> builder(be, vars, instr);
  auto frac = builder.Build(e);
  std::vector<typename Backend::value_type> d{be.round(ExactRational(1))};
  if (frac.den) d = drain(*frac.den());
  ExactRational dv;
  for (const auto& x : d) dv += be.to_rational(x);
  if (dv.is_zero()) throw DomainError("zero divisor");

  EvalResult<typename Backend::value_type> r;
  auto q = div(be, frac.num(), d, instr);
  StreamItem<typename Backend::value_type> it;
  for (;;) {
    auto tb = q->tail_bound();
    if (tb && *tb <= target && (*tb < r.value.abs() || tb->is_zero())) {
      r.bound = *tb;
      r.exact = tb->is_zero();
      break;
    }
    if (r.pulls == max_pulls) throw DomainError("eval: target not reached within the pull budget");
    PullStatus st = q->pull(&it);
    if (st == PullStatus::kFrozen) throw DomainError("eval: pipeline froze");
    if (st == PullStatus::kExhausted) {
      r.bound = ExactRational();
      r.exact = true;
      break;
    }
    ++r.pulls;
    r.value += be.to_rational(it.value);
    r.components.push_back(std::move(it.value));
  }
  r.sign = r.value.sign();
  r.firings = instr->total();
  r.counts = instr->counts();
  return r;
}

namespace internal {

template <class Backend>
int SignDetOn(const Backend& be, const std::vector<std::vector<ExactRational>>& m,
              Instrumentation* instr) {
  std::vector<std::vector<ExprPtr>> cells;
  for (const auto& row : m) {
    cells.emplace_back();
    for (const auto& x : row) cells.back().push_back(make_literal(x));
  }
  ExprPtr det = determinant_expr(cells);
  const Bindings none;
  internal::Builder<Backend> builder(be, none, instr);
  auto frac = builder.Build(*det);
  int den_sign = 1;
  if (frac.den) {
    ExactRational dv;
    for (const auto& x : drain(*frac.den())) dv += be.to_rational(x);
    den_sign = dv.sign();
  }
  auto num = frac.num();
  return den_sign * stream_sign(be, *num);
}

}  // namespace internal

// Sign of the determinant of a 2x2 or 3x3 matrix, computed on the
// numerator stream of the fraction form. Entries near the ends of the
// exponent range can trip the product underflow guard; the sign is then
// recomputed in the model at the same precision with a wide exponent range.
template <class Backend>
int sign_det(const Backend& be, const std::vector<std::vector<ExactRational>>& m,
             Instrumentation* instr = nullptr) {
  constexpr int64_t kWideEmin = int64_t{1} << 24;
  try {
    return internal::SignDetOn(be, m, instr);
  } catch (const DomainError&) {
    if (be.format().e_min() >= kWideEmin) throw;
    if (instr) instr->bump("det.widened");
    ModelBackend wide(GenericFormat(2, be.format().p(), kWideEmin));
    return internal::SignDetOn(wide, m, instr);
  }
}

}  // namespace adapt

#endif  // ADAPT_EXPR_HPP_
