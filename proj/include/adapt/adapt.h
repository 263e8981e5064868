/* Copyright 2026 The Adapt Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to libadapt. Handles are opaque; every call returns an
 * adapt_status and writes results through out-pointers. On failure the
 * message for the calling thread is available from adapt_last_error(). */

#ifndef ADAPT_ADAPT_H_
#define ADAPT_ADAPT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ADAPT_API __declspec(dllexport)
#else
#define ADAPT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum adapt_status {
  ADAPT_OK = 0,
  ADAPT_ERR_ARGUMENT = 1,  /* null pointer, bad option, unbound variable */
  ADAPT_ERR_PARSE = 2,     /* malformed expression, number or format */
  ADAPT_ERR_DOMAIN = 3,    /* overflow, underflow, unsupported format */
  ADAPT_ERR_ZERO_DIVISOR = 4,
  ADAPT_ERR_BUDGET = 5,    /* target not reached within the pull budget */
  ADAPT_ERR_INTERNAL = 6
} adapt_status;

typedef struct adapt_context adapt_context;
typedef struct adapt_result adapt_result;
typedef struct adapt_text adapt_text;

typedef void (*adapt_trace_fn)(const char* line, void* user);

ADAPT_API const char* adapt_version(void);
ADAPT_API const char* adapt_status_name(adapt_status s);
/* Message of the last failed call on this thread; "" if none. */
ADAPT_API const char* adapt_last_error(void);

/* Owned strings returned by the library. */
ADAPT_API const char* adapt_text_get(const adapt_text* t);
ADAPT_API void adapt_text_free(adapt_text* t);

/* A context fixes the working format ("binary64", "binary32", or
 * "beta=2 p=24 emin=149"; radix 2 only) and carries the firing counters
 * and the optional trace sink. */
ADAPT_API adapt_status adapt_context_new(const char* format, adapt_context** out);
ADAPT_API void adapt_context_free(adapt_context* ctx);
ADAPT_API adapt_status adapt_context_format(const adapt_context* ctx, adapt_text** out);
ADAPT_API adapt_status adapt_context_set_trace(adapt_context* ctx, adapt_trace_fn fn, void* user);
ADAPT_API adapt_status adapt_context_set_max_pulls(adapt_context* ctx, size_t max_pulls);
/* Binds a variable to an exact value given in literal syntax. */
ADAPT_API adapt_status adapt_context_bind(adapt_context* ctx, const char* name, const char* value);
ADAPT_API adapt_status adapt_context_clear_bindings(adapt_context* ctx);

/* Evaluates `expr` until the certified error bound is at most `target`
 * (a rational such as "1e-9" or "1/1000"; "0" asks for the exact value).
 * Counters are reset for every call. */
ADAPT_API adapt_status adapt_eval(adapt_context* ctx, const char* expr, const char* target,
                                  adapt_result** out);
ADAPT_API void adapt_result_free(adapt_result* r);
ADAPT_API int adapt_result_sign(const adapt_result* r);
ADAPT_API int adapt_result_exact(const adapt_result* r);
ADAPT_API uint64_t adapt_result_pulls(const adapt_result* r);
ADAPT_API uint64_t adapt_result_firings(const adapt_result* r);
ADAPT_API size_t adapt_result_component_count(const adapt_result* r);
/* Component i as "(n,e)" or, with hex != 0, a hex-float literal. */
ADAPT_API adapt_status adapt_result_component(const adapt_result* r, size_t i, int hex,
                                              adapt_text** out);
/* Value as a decimal string with `digits` fraction digits. */
ADAPT_API adapt_status adapt_result_value(const adapt_result* r, int digits, adapt_text** out);
/* Exact value and bound as "p/q". */
ADAPT_API adapt_status adapt_result_value_exact(const adapt_result* r, adapt_text** out);
ADAPT_API adapt_status adapt_result_bound(const adapt_result* r, adapt_text** out);
ADAPT_API double adapt_result_bound_approx(const adapt_result* r);
/* Per-stage counters, one "name=count" per line, sorted by name. */
ADAPT_API adapt_status adapt_result_counts(const adapt_result* r, adapt_text** out);

/* Sign of the determinant of a dim x dim matrix (dim 2 or 3), entries in
 * row-major order and in literal syntax. */
ADAPT_API adapt_status adapt_sign_det(adapt_context* ctx, size_t dim, const char* const* entries,
                                      int* sign);

/* Runs one property tag, or every tag when tag is "all". `format` may be
 * null for the tag's default; `beta` (0 for none) picks the tag's small
 * format in that radix. Writes one report line per tag and sets *ok to 1
 * when every tag met its expectation. */
ADAPT_API adapt_status adapt_check(const char* tag, const char* format, int beta, uint64_t seed,
                                   adapt_text** report, int* ok);
/* Newline separated list of tags. */
ADAPT_API adapt_status adapt_check_tags(adapt_text** out);

/* Reads an expansion in `in_format` and writes it in `out_format`. Same
 * formats reproduce the components bit-exactly; otherwise the exact value
 * is re-split into a non-overlapping expansion of the target format. */
ADAPT_API adapt_status adapt_convert(const char* text, const char* in_format,
                                     const char* out_format, int hex, adapt_text** out);

#ifdef __cplusplus
}
#endif

#endif /* ADAPT_ADAPT_H_ */
