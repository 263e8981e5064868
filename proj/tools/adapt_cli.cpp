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

// Command-line front end over the C API. Output is one key=value per line.
// Exit codes: 0 success, 1 usage, 2 numeric error, 3 check failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adapt/adapt.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitCheck = 3;

struct TextDeleter {
  void operator()(adapt_text* t) const { adapt_text_free(t); }
};
struct ContextDeleter {
  void operator()(adapt_context* c) const { adapt_context_free(c); }
};
struct ResultDeleter {
  void operator()(adapt_result* r) const { adapt_result_free(r); }
};
using Context = std::unique_ptr<adapt_context, ContextDeleter>;
using Result = std::unique_ptr<adapt_result, ResultDeleter>;

// Thrown to unwind with a status already reported.
struct Failure {
  int code;
};

void Check(adapt_status s) {
  if (s == ADAPT_OK) return;
  std::cerr << "error=" << adapt_status_name(s) << "\nmessage=" << adapt_last_error() << "\n";
  bool usage = s == ADAPT_ERR_ARGUMENT || s == ADAPT_ERR_PARSE;
  throw Failure{usage ? kExitUsage : kExitNumeric};
}

std::string Take(adapt_text* t) {
  std::unique_ptr<adapt_text, TextDeleter> owned(t);
  return adapt_text_get(owned.get());
}

Context MakeContext(const std::string& format) {
  adapt_context* c = nullptr;
  Check(adapt_context_new(format.c_str(), &c));
  return Context(c);
}

void PrintTrace(const char* line, void*) { std::cout << "trace " << line << "\n"; }

struct EvalOptions {
  std::string expr;
  std::string target;
  int digits = 17;
  std::string format = "binary64";
  std::vector<std::string> vars;
  bool trace = false;
  bool hex = false;
  bool summary = false;
  size_t max_pulls = 4096;
};

int RunEval(const EvalOptions& o) {
  Context ctx = MakeContext(o.format);
  for (const std::string& v : o.vars) {
    auto eq = v.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "error=argument\nmessage=--var needs name=value, got '" << v << "'\n";
      return kExitUsage;
    }
    Check(adapt_context_bind(ctx.get(), v.substr(0, eq).c_str(), v.substr(eq + 1).c_str()));
  }
  Check(adapt_context_set_max_pulls(ctx.get(), o.max_pulls));
  if (o.trace) Check(adapt_context_set_trace(ctx.get(), PrintTrace, nullptr));
  std::string target = o.target.empty() ? "1e-" + std::to_string(o.digits) : o.target;

  adapt_result* raw = nullptr;
  Check(adapt_eval(ctx.get(), o.expr.c_str(), target.c_str(), &raw));
  Result r(raw);
  adapt_text* t = nullptr;
  Check(adapt_context_format(ctx.get(), &t));
  std::string fmt = Take(t);
  int sign = adapt_result_sign(r.get());
  const char* sign_text = sign > 0 ? "+" : sign < 0 ? "-" : "0";

  std::cout << "expr=" << o.expr << "\n";
  std::cout << "format=" << fmt << "\n";
  std::cout << "target=" << target << "\n";
  std::cout << "sign=" << sign_text << "\n";
  Check(adapt_result_value(r.get(), o.digits, &t));
  std::cout << "value=" << Take(t) << "\n";
  Check(adapt_result_value_exact(r.get(), &t));
  std::cout << "value_exact=" << Take(t) << "\n";
  Check(adapt_result_bound(r.get(), &t));
  std::cout << "bound=" << Take(t) << "\n";
  char approx[64];
  std::snprintf(approx, sizeof approx, "%.3e", adapt_result_bound_approx(r.get()));
  std::cout << "bound_approx=" << approx << "\n";
  std::cout << "exact=" << (adapt_result_exact(r.get()) ? "true" : "false") << "\n";
  std::cout << "components=";
  for (size_t i = 0; i < adapt_result_component_count(r.get()); ++i) {
    Check(adapt_result_component(r.get(), i, o.hex ? 1 : 0, &t));
    std::cout << (i ? " " : "") << Take(t);
  }
  std::cout << "\n";
  std::cout << "pulls=" << adapt_result_pulls(r.get()) << "\n";
  std::cout << "firings=" << adapt_result_firings(r.get()) << "\n";
  Check(adapt_result_counts(r.get(), &t));
  std::istringstream counts(Take(t));
  for (std::string line; std::getline(counts, line);) std::cout << "count." << line << "\n";
  if (o.summary)
    std::cout << "summary sign=" << sign_text << " firings=" << adapt_result_firings(r.get())
              << " pulls=" << adapt_result_pulls(r.get()) << " bound_approx=" << approx << "\n";
  return kExitOk;
}

// Rows separated by ';' or '|', entries by whitespace or ','.
std::vector<std::vector<std::string>> ParseMatrix(std::string text) {
  for (char& c : text)
    if (c == '|') c = ';';
  std::vector<std::vector<std::string>> rows;
  std::stringstream rs(text);
  for (std::string row; std::getline(rs, row, ';');) {
    for (char& c : row)
      if (c == ',') c = ' ';
    std::istringstream cs(row);
    std::vector<std::string> cells{std::istream_iterator<std::string>(cs), {}};
    if (!cells.empty()) rows.push_back(std::move(cells));
  }
  return rows;
}

int RunDet(const std::string& matrix, const std::string& format, bool trace) {
  auto rows = ParseMatrix(matrix);
  const size_t n = rows.size();
  std::vector<const char*> cells;
  for (const auto& row : rows) {
    if (row.size() != n) {
      std::cerr << "error=argument\nmessage=matrix must be square\n";
      return kExitUsage;
    }
    for (const auto& c : row) cells.push_back(c.c_str());
  }
  Context ctx = MakeContext(format);
  if (trace) Check(adapt_context_set_trace(ctx.get(), PrintTrace, nullptr));
  int sign = 0;
  Check(adapt_sign_det(ctx.get(), n, cells.data(), &sign));
  std::cout << "dim=" << n << "\n";
  std::cout << "sign=" << (sign > 0 ? "+" : sign < 0 ? "-" : "0") << "\n";
  return kExitOk;
}

int RunCheck(const std::string& tag, const std::string& format, int beta, uint64_t seed,
             bool list) {
  adapt_text* t = nullptr;
  if (list) {
    Check(adapt_check_tags(&t));
    std::cout << Take(t);
    return kExitOk;
  }
  if (tag.empty()) {
    std::cerr << "error=argument\nmessage=check needs a tag or 'all'\n";
    return kExitUsage;
  }
  int ok = 0;
  Check(adapt_check(tag.c_str(), format.empty() ? nullptr : format.c_str(), beta, seed, &t, &ok));
  std::cout << Take(t);
  return ok ? kExitOk : kExitCheck;
}

int RunConvert(const std::string& input, const std::string& from, const std::string& to, bool hex,
               const std::string& output) {
  std::string text;
  if (input.empty() || input == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(input);
    if (!in) {
      std::cerr << "error=argument\nmessage=cannot read " << input << "\n";
      return kExitUsage;
    }
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  adapt_text* t = nullptr;
  Check(adapt_convert(text.c_str(), from.c_str(), to.c_str(), hex ? 1 : 0, &t));
  std::string out = Take(t);
  if (output.empty() || output == "-") {
    std::cout << out;
  } else {
    std::ofstream f(output);
    f << out;
    if (!f) {
      std::cerr << "error=argument\nmessage=cannot write " << output << "\n";
      return kExitUsage;
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptable-precision arithmetic on floating-point expansions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(adapt_version()));

  EvalOptions eo;
  auto* eval = app.add_subcommand("eval", "Evaluate an expression to a certified precision");
  eval->add_option("expr", eo.expr, "Infix expression")->required();
  eval->add_option("--target", eo.target, "Error bound to reach, a rational (default 1e-<digits>)");
  eval->add_option("--digits", eo.digits, "Fraction digits printed in value")
      ->check(CLI::Range(0, 100000));
  eval->add_option("--format", eo.format, "Working format descriptor")->capture_default_str();
  eval->add_option("--var", eo.vars, "Variable binding name=value (repeatable)");
  eval->add_option("--max-pulls", eo.max_pulls, "Pull budget")->capture_default_str();
  eval->add_flag("--trace", eo.trace, "Print the stage firing log");
  eval->add_flag("--hex", eo.hex, "Print components as hex floats");
  eval->add_flag("--summary", eo.summary, "Append a single-line summary");

  std::string matrix, det_format = "binary64";
  bool det_trace = false;
  auto* det = app.add_subcommand("det", "Sign of a 2x2 or 3x3 determinant");
  det->add_option("matrix", matrix, "Rows separated by ';' or '|', entries by spaces or commas")
      ->required();
  det->add_option("--format", det_format, "Working format descriptor")->capture_default_str();
  det->add_flag("--trace", det_trace, "Print the stage firing log");

  std::string tag, check_format;
  int beta = 0;
  uint64_t seed = 20260101;
  bool list = false;
  auto* check = app.add_subcommand("check", "Run property sweeps by tag, or 'all'");
  check->add_option("tag", tag, "Tag or 'all'");
  auto* fmt_opt = check->add_option("--format", check_format, "Format descriptor to sweep");
  check->add_option("--beta", beta, "Use the tag's small format in this radix")
      ->check(CLI::Range(2, 1 << 16))
      ->excludes(fmt_opt);
  check->add_option("--seed", seed, "Seed for randomized sweeps")->capture_default_str();
  check->add_flag("--list", list, "List the tags");

  std::string input, output, from = "binary64", to = "binary64";
  bool hex = false;
  auto* convert = app.add_subcommand("convert", "Re-encode an expansion file");
  convert->add_option("input", input, "Input file, or - for stdin");
  convert->add_option("--from", from, "Input format")->capture_default_str();
  convert->add_option("--to", to, "Output format")->capture_default_str();
  convert->add_option("-o,--output", output, "Output file (default stdout)");
  convert->add_flag("--hex", hex, "Write components as hex floats");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*eval) return RunEval(eo);
    if (*det) return RunDet(matrix, det_format, det_trace);
    if (*check) return RunCheck(tag, check_format, beta, seed, list);
    if (*convert) return RunConvert(input, from, to, hex, output);
  } catch (const Failure& f) {
    return f.code;
  }
  return kExitUsage;
}
