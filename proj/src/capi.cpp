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

#include "adapt/adapt.h"

#include <new>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "adapt/backend.hpp"
#include "adapt/expansion.hpp"
#include "adapt/expr.hpp"
#include "adapt/oracle.hpp"

struct adapt_text {
  std::string s;
};

struct adapt_context {
  adapt::GenericFormat fmt;
  std::variant<adapt::Binary64Backend, adapt::ModelBackend> be;
  adapt::Bindings vars;
  adapt_trace_fn trace = nullptr;
  void* trace_user = nullptr;
  size_t max_pulls = 4096;
};

struct adapt_result {
  std::vector<adapt::BFloat> components;
  adapt::ExactRational value, bound;
  int sign = 0;
  bool exact = false;
  uint64_t pulls = 0, firings = 0;
  std::map<std::string, uint64_t> counts;
};

namespace {

thread_local std::string g_last_error;

// Distinguishes the numeric failures by message; the core reports them all
// as DomainError.
adapt_status DomainStatus(const std::string& what) {
  if (what.find("zero divisor") != std::string::npos) return ADAPT_ERR_ZERO_DIVISOR;
  if (what.find("pull budget") != std::string::npos) return ADAPT_ERR_BUDGET;
  return ADAPT_ERR_DOMAIN;
}

template <class F>
adapt_status Guard(F&& f) {
  g_last_error.clear();
  try {
    f();
    return ADAPT_OK;
  } catch (const adapt::ParseError& e) {
    g_last_error = e.what();
    return ADAPT_ERR_PARSE;
  } catch (const adapt::DomainError& e) {
    g_last_error = e.what();
    return DomainStatus(e.what());
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return ADAPT_ERR_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return ADAPT_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ADAPT_ERR_INTERNAL;
  }
}

void Require(const void* p, const char* what) {
  if (!p) throw std::invalid_argument(std::string(what) + " is null");
}

adapt_text* NewText(std::string s) { return new adapt_text{std::move(s)}; }

adapt::GenericFormat ParseFormat(const char* text) {
  try {
    return adapt::GenericFormat::Parse(text);
  } catch (const std::invalid_argument& e) {
    throw adapt::ParseError(e.what(), 0);
  }
}

adapt::ExactRational ParseValue(const char* text) {
  return adapt::eval_exact(*adapt::parse_expr(text));
}

}  // namespace

extern "C" {

const char* adapt_version(void) { return "1.0.0"; }

const char* adapt_status_name(adapt_status s) {
  switch (s) {
    case ADAPT_OK: return "ok";
    case ADAPT_ERR_ARGUMENT: return "argument";
    case ADAPT_ERR_PARSE: return "parse";
    case ADAPT_ERR_DOMAIN: return "domain";
    case ADAPT_ERR_ZERO_DIVISOR: return "zero_divisor";
    case ADAPT_ERR_BUDGET: return "budget";
    case ADAPT_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* adapt_last_error(void) { return g_last_error.c_str(); }

const char* adapt_text_get(const adapt_text* t) { return t ? t->s.c_str() : ""; }
void adapt_text_free(adapt_text* t) { delete t; }

adapt_status adapt_context_new(const char* format, adapt_context** out) {
  return Guard([&] {
    Require(out, "out");
    *out = nullptr;
    adapt::GenericFormat fmt =
        format ? ParseFormat(format) : adapt::GenericFormat::Binary64();
    if (fmt.beta() != 2) throw adapt::DomainError("streams need a radix-2 format");
    auto* ctx = new adapt_context{fmt, adapt::Binary64Backend(), {}, nullptr, nullptr, 4096};
    if (!fmt.is_binary64()) ctx->be = adapt::ModelBackend(fmt);
    *out = ctx;
  });
}

void adapt_context_free(adapt_context* ctx) { delete ctx; }

adapt_status adapt_context_format(const adapt_context* ctx, adapt_text** out) {
  return Guard([&] {
    Require(ctx, "ctx");
    Require(out, "out");
    *out = NewText(ctx->fmt.to_string());
  });
}

adapt_status adapt_context_set_trace(adapt_context* ctx, adapt_trace_fn fn, void* user) {
  return Guard([&] {
    Require(ctx, "ctx");
    ctx->trace = fn;
    ctx->trace_user = user;
  });
}

adapt_status adapt_context_set_max_pulls(adapt_context* ctx, size_t max_pulls) {
  return Guard([&] {
    Require(ctx, "ctx");
    if (max_pulls == 0) throw std::invalid_argument("max_pulls must be positive");
    ctx->max_pulls = max_pulls;
  });
}

adapt_status adapt_context_bind(adapt_context* ctx, const char* name, const char* value) {
  return Guard([&] {
    Require(ctx, "ctx");
    Require(name, "name");
    Require(value, "value");
    if (!*name) throw std::invalid_argument("empty variable name");
    ctx->vars[name] = ParseValue(value);
  });
}

adapt_status adapt_context_clear_bindings(adapt_context* ctx) {
  return Guard([&] {
    Require(ctx, "ctx");
    ctx->vars.clear();
  });
}

adapt_status adapt_eval(adapt_context* ctx, const char* expr, const char* target,
                        adapt_result** out) {
  return Guard([&] {
    Require(ctx, "ctx");
    Require(expr, "expr");
    Require(target, "target");
    Require(out, "out");
    *out = nullptr;
    adapt::ExprPtr e = adapt::parse_expr(expr);
    adapt::ExactRational t = ParseValue(target);
    if (t.sign() < 0) throw std::invalid_argument("target must not be negative");
    adapt::Instrumentation instr;
    if (ctx->trace) {
      auto fn = ctx->trace;
      void* user = ctx->trace_user;
      instr.set_trace([fn, user](const std::string& line) { fn(line.c_str(), user); });
    }
    auto r = std::make_unique<adapt_result>();
    std::visit(
        [&](const auto& be) {
          auto ev = adapt::eval_adaptive(be, *e, ctx->vars, t, &instr, ctx->max_pulls);
          for (const auto& c : ev.components) r->components.push_back(be.to_bfloat(c));
          r->value = ev.value;
          r->bound = ev.bound;
          r->sign = ev.sign;
          r->exact = ev.exact;
          r->pulls = ev.pulls;
          r->firings = ev.firings;
          r->counts = ev.counts;
        },
        ctx->be);
    *out = r.release();
  });
}

void adapt_result_free(adapt_result* r) { delete r; }
int adapt_result_sign(const adapt_result* r) { return r ? r->sign : 0; }
int adapt_result_exact(const adapt_result* r) { return r && r->exact ? 1 : 0; }
uint64_t adapt_result_pulls(const adapt_result* r) { return r ? r->pulls : 0; }
uint64_t adapt_result_firings(const adapt_result* r) { return r ? r->firings : 0; }
size_t adapt_result_component_count(const adapt_result* r) {
  return r ? r->components.size() : 0;
}

adapt_status adapt_result_component(const adapt_result* r, size_t i, int hex, adapt_text** out) {
  return Guard([&] {
    Require(r, "result");
    Require(out, "out");
    if (i >= r->components.size()) throw std::invalid_argument("component index out of range");
    const adapt::BFloat& c = r->components[i];
    *out = NewText(hex ? adapt::to_hex_string(c) : adapt::to_string(c));
  });
}

adapt_status adapt_result_value(const adapt_result* r, int digits, adapt_text** out) {
  return Guard([&] {
    Require(r, "result");
    Require(out, "out");
    if (digits < 0 || digits > 100000) throw std::invalid_argument("digits out of range");
    *out = NewText(r->value.to_decimal(digits));
  });
}

adapt_status adapt_result_value_exact(const adapt_result* r, adapt_text** out) {
  return Guard([&] {
    Require(r, "result");
    Require(out, "out");
    *out = NewText(r->value.to_string());
  });
}

adapt_status adapt_result_bound(const adapt_result* r, adapt_text** out) {
  return Guard([&] {
    Require(r, "result");
    Require(out, "out");
    *out = NewText(r->bound.to_string());
  });
}

double adapt_result_bound_approx(const adapt_result* r) { return r ? r->bound.to_double() : 0.0; }

adapt_status adapt_result_counts(const adapt_result* r, adapt_text** out) {
  return Guard([&] {
    Require(r, "result");
    Require(out, "out");
    std::string s;
    for (const auto& [k, v] : r->counts) s += k + "=" + std::to_string(v) + "\n";
    *out = NewText(std::move(s));
  });
}

adapt_status adapt_sign_det(adapt_context* ctx, size_t dim, const char* const* entries,
                            int* sign) {
  return Guard([&] {
    Require(ctx, "ctx");
    Require(entries, "entries");
    Require(sign, "sign");
    if (dim != 2 && dim != 3) throw std::invalid_argument("dimension must be 2 or 3");
    std::vector<std::vector<adapt::ExactRational>> m(dim);
    for (size_t i = 0; i < dim; ++i)
      for (size_t j = 0; j < dim; ++j) {
        const char* cell = entries[i * dim + j];
        Require(cell, "matrix entry");
        m[i].push_back(ParseValue(cell));
      }
    adapt::Instrumentation instr;
    if (ctx->trace) {
      auto fn = ctx->trace;
      void* user = ctx->trace_user;
      instr.set_trace([fn, user](const std::string& line) { fn(line.c_str(), user); });
    }
    std::visit([&](const auto& be) { *sign = adapt::sign_det(be, m, &instr); }, ctx->be);
  });
}

adapt_status adapt_check(const char* tag, const char* format, int beta, uint64_t seed,
                         adapt_text** report, int* ok) {
  return Guard([&] {
    Require(tag, "tag");
    Require(report, "report");
    Require(ok, "ok");
    std::vector<adapt::TheoremReport> reports;
    std::string t(tag);
    if (t == "all") {
      if (format || beta) throw std::invalid_argument("'all' takes neither a format nor a radix");
      reports = adapt::check_all(seed);
    } else {
      if (format && beta) throw std::invalid_argument("give a format or a radix, not both");
      std::optional<adapt::GenericFormat> fmt;
      if (format) fmt = ParseFormat(format);
      if (beta) fmt = adapt::format_for_radix(t, beta);
      reports.push_back(adapt::check_theorem(t, fmt, seed));
    }
    std::string s;
    bool all_ok = true;
    for (const auto& r : reports) {
      s += adapt::to_string(r) + "\n";
      all_ok &= r.ok();
    }
    *report = NewText(std::move(s));
    *ok = all_ok ? 1 : 0;
  });
}

adapt_status adapt_check_tags(adapt_text** out) {
  return Guard([&] {
    Require(out, "out");
    std::string s;
    for (const auto& t : adapt::theorem_tags()) s += t + "\n";
    *out = NewText(std::move(s));
  });
}

adapt_status adapt_convert(const char* text, const char* in_format, const char* out_format,
                           int hex, adapt_text** out) {
  return Guard([&] {
    Require(text, "text");
    Require(in_format, "in_format");
    Require(out_format, "out_format");
    Require(out, "out");
    adapt::GenericFormat in = ParseFormat(in_format), to = ParseFormat(out_format);
    adapt::ParsedExpansion x = adapt::parse_expansion(text, in);
    if (in == to) {
      *out = NewText(adapt::serialize(x.components, x.epsilon, hex != 0) + "\n");
      return;
    }
    // Successive nearest roundings give a non-overlapping split; a value
    // with no finite expansion in the target radix ends in underflow.
    adapt::ExactRational rest = adapt::value_of(x.components, in);
    std::vector<adapt::BFloat> parts;
    while (!rest.is_zero()) {
      adapt::BFloat c = adapt::canonicalize(
          adapt::round(rest, adapt::RoundingMode::kNearestEven, to), to);
      adapt::ExactRational cv = adapt::value(c, to);
      if (cv.is_zero()) throw adapt::DomainError("value has no exact expansion in the target format");
      rest -= cv;
      parts.push_back(c);
    }
    *out = NewText(adapt::serialize(parts, std::nullopt, hex != 0) + "\n");
  });
}

}  // extern "C"
