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

#include "adapt/expr.hpp"

#include <cctype>

namespace adapt {

ExprPtr make_literal(const ExactRational& v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::kLiteral;
  e->literal = v;
  return e;
}

ExprPtr make_binary(Expr::Kind kind, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

ExprPtr make_neg(ExprPtr x) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::kNeg;
  e->lhs = std::move(x);
  return e;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  ExprPtr Run() {
    ExprPtr e = Sum();
    Skip();
    if (pos_ != s_.size()) throw ParseError("unexpected character '" + std::string(1, s_[pos_]) + "'", pos_);
    return e;
  }

 private:
  void Skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool Eat(char c) {
    Skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr Sum() {
    ExprPtr e = Product();
    for (;;) {
      if (Eat('+')) e = make_binary(Expr::Kind::kAdd, e, Product());
      else if (Eat('-')) e = make_binary(Expr::Kind::kSub, e, Product());
      else return e;
    }
  }

  ExprPtr Product() {
    ExprPtr e = Unary();
    for (;;) {
      if (Eat('*')) e = make_binary(Expr::Kind::kMul, e, Unary());
      else if (Eat('/')) e = make_binary(Expr::Kind::kDiv, e, Unary());
      else return e;
    }
  }

  ExprPtr Unary() {
    if (Eat('-')) return make_neg(Unary());
    if (Eat('+')) return Unary();
    return Primary();
  }

  ExprPtr Primary() {
    Skip();
    if (pos_ == s_.size()) throw ParseError("unexpected end of input", pos_);
    if (Eat('(')) {
      ExprPtr e = Sum();
      if (!Eat(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::kVariable;
      e->name = std::string(s_.substr(start, pos_ - start));
      return e;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  ExprPtr Number() {
    size_t start = pos_;
    auto digits = [&](bool hex) {
      while (pos_ < s_.size() &&
             (hex ? std::isxdigit(static_cast<unsigned char>(s_[pos_]))
                  : std::isdigit(static_cast<unsigned char>(s_[pos_])) != 0))
        ++pos_;
    };
    auto exponent = [&](char lower) {
      if (pos_ < s_.size() && std::tolower(static_cast<unsigned char>(s_[pos_])) == lower) {
        ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
        size_t at = pos_;
        digits(false);
        if (pos_ == at) throw ParseError("malformed exponent", pos_);
      }
    };
    bool hex = s_.substr(pos_, 2) == "0x" || s_.substr(pos_, 2) == "0X";
    if (hex) pos_ += 2;
    digits(hex);
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      digits(hex);
    }
    exponent(hex ? 'p' : 'e');
    std::string_view tok = s_.substr(start, pos_ - start);
    try {
      return make_literal(ExactRational::Parse(tok));
    } catch (const std::invalid_argument&) {
      throw ParseError("malformed number '" + std::string(tok) + "'", start);
    }
  }

  std::string_view s_;
  size_t pos_ = 0;
};

const char* OpText(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::kAdd: return " + ";
    case Expr::Kind::kSub: return " - ";
    case Expr::Kind::kMul: return " * ";
    case Expr::Kind::kDiv: return " / ";
    default: return "";
  }
}

}  // namespace

ExprPtr parse_expr(std::string_view text) { return Parser(text).Run(); }

std::string to_string(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kLiteral: return e.literal.to_string();
    case Expr::Kind::kVariable: return e.name;
    case Expr::Kind::kNeg: return "-(" + to_string(*e.lhs) + ")";
    default: return "(" + to_string(*e.lhs) + OpText(e.kind) + to_string(*e.rhs) + ")";
  }
}

ExactRational eval_exact(const Expr& e, const Bindings& vars) {
  switch (e.kind) {
    case Expr::Kind::kLiteral: return e.literal;
    case Expr::Kind::kVariable: {
      auto it = vars.find(e.name);
      if (it == vars.end()) throw std::invalid_argument("unbound variable: " + e.name);
      return it->second;
    }
    case Expr::Kind::kNeg: return -eval_exact(*e.lhs, vars);
    case Expr::Kind::kAdd: return eval_exact(*e.lhs, vars) + eval_exact(*e.rhs, vars);
    case Expr::Kind::kSub: return eval_exact(*e.lhs, vars) - eval_exact(*e.rhs, vars);
    case Expr::Kind::kMul: return eval_exact(*e.lhs, vars) * eval_exact(*e.rhs, vars);
    case Expr::Kind::kDiv: {
      ExactRational d = eval_exact(*e.rhs, vars);
      if (d.is_zero()) throw DomainError("zero divisor");
      return eval_exact(*e.lhs, vars) / d;
    }
  }
  throw std::logic_error("unknown expression kind");
}

ExprPtr determinant_expr(const std::vector<std::vector<ExprPtr>>& m) {
  using K = Expr::Kind;
  auto mul = [](ExprPtr a, ExprPtr b) { return make_binary(K::kMul, a, b); };
  auto sub = [](ExprPtr a, ExprPtr b) { return make_binary(K::kSub, a, b); };
  const size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("determinant: matrix is not square");
  if (n == 2) return sub(mul(m[0][0], m[1][1]), mul(m[0][1], m[1][0]));
  if (n != 3) throw std::invalid_argument("determinant: only 2x2 and 3x3 are supported");
  auto minor = [&](size_t c0, size_t c1) {
    return sub(mul(m[1][c0], m[2][c1]), mul(m[1][c1], m[2][c0]));
  };
  ExprPtr t0 = mul(m[0][0], minor(1, 2));
  ExprPtr t1 = mul(m[0][1], minor(0, 2));
  ExprPtr t2 = mul(m[0][2], minor(0, 1));
  return make_binary(K::kAdd, sub(t0, t1), t2);
}

int sign_det_exact(const std::vector<std::vector<ExactRational>>& m) {
  std::vector<std::vector<ExprPtr>> cells;
  for (const auto& row : m) {
    cells.emplace_back();
    for (const auto& x : row) cells.back().push_back(make_literal(x));
  }
  return eval_exact(*determinant_expr(cells)).sign();
}

std::pair<std::string, ExactRational> parse_binding(std::string_view text) {
  size_t eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw std::invalid_argument("binding must look like name=value");
  std::string name(text.substr(0, eq));
  ExprPtr v = parse_expr(text.substr(eq + 1));
  return {name, eval_exact(*v)};
}

}  // namespace adapt
