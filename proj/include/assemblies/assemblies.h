/*
 * Copyright 2026 The assemblies-parser Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ASSEMBLIES_H
#define ASSEMBLIES_H

/* C interface to the assemblies library. Every function returns an
 * ac_status; on failure ac_last_error() describes the problem for the
 * calling thread until its next call into the library. Strings returned
 * through `char** out` are owned by the caller and released with
 * ac_string_free. Structured results are JSON documents. */

#include <stddef.h>
#include <stdint.h>

#if defined(AC_BUILDING_LIBRARY)
#define AC_API __attribute__((visibility("default")))
#else
#define AC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ac_status {
    AC_OK = 0,
    AC_ERR_INVALID_ARGUMENT = 1,
    AC_ERR_OUT_OF_VOCABULARY = 2,
    AC_ERR_STRUCTURE = 3, /* ill-nested clauses */
    AC_ERR_INCONCLUSIVE = 4, /* a search bound was hit */
    AC_ERR_PARSE = 5, /* malformed JSON or file contents */
    AC_ERR_READOUT = 6,
    AC_ERR_IO = 7,
    AC_ERR_INTERNAL = 8
} ac_status;

typedef enum ac_format { AC_FORMAT_JSON = 0, AC_FORMAT_DOT = 1 } ac_format;

typedef struct ac_parser ac_parser;
typedef struct ac_fba ac_fba;

AC_API const char* ac_version(void);
AC_API const char* ac_last_error(void);
AC_API const char* ac_status_name(ac_status status);
AC_API void ac_string_free(char* s);

/* ---- parser ---------------------------------------------------------- */

/* `config_json` holds ParserConfig fields (seed, constituency, embedding,
 * rounds, n, k, p, beta, ...); NULL or "{}" gives the defaults.
 * `lexicon_path` NULL loads the shipped English lexicon. */
AC_API ac_status ac_parser_new(const char* config_json, const char* lexicon_path, ac_parser** out);
AC_API void ac_parser_free(ac_parser* parser);
/* Effective configuration as JSON. */
AC_API ac_status ac_parser_config(const ac_parser* parser, char** out);

/* Parses one sentence and reads out its trees. JSON output carries the
 * dependency tree, the constituency tree in constituency mode, and phase
 * counters; DOT output holds one digraph per tree. */
AC_API ac_status ac_parse(const ac_parser* parser, const char* sentence, ac_format format, char** out);

/* Runs a corpus file and writes the report. The call succeeds even when
 * cases fail; read "all_passed" from the report. `timing` = 0 leaves out
 * wall-clock fields so the report is reproducible for a given seed. */
AC_API ac_status ac_run_corpus(const ac_parser* parser, const char* corpus_path, unsigned threads, int timing,
                               char** out);
/* Parser modes the corpus was written for. */
AC_API ac_status ac_corpus_mode(const char* corpus_path, int* constituency, int* embedding);
/* Dependency-only versus constituency timing and counters on a corpus. */
AC_API ac_status ac_bench(const ac_parser* parser, const char* corpus_path, unsigned threads, char** out);

/* ---- fallback automata --------------------------------------------- */

AC_API ac_status ac_fba_from_json(const char* json, ac_fba** out);
AC_API void ac_fba_free(ac_fba* fba);
AC_API ac_status ac_fba_to_json(const ac_fba* fba, char** out);

/* `options_json` may set "mark" ("result" | "current"), "prefix" (bool),
 * "max_configurations" and "witness" (bool); NULL for defaults. */
AC_API ac_status ac_fba_run(const ac_fba* fba, const char* input, const char* options_json, char** out);
AC_API ac_status ac_fba_weak_check(const ac_fba* fba, char** out);
AC_API ac_status ac_fba_s_determinize(const ac_fba* fba, ac_fba** out);
/* Compiles the FBA (s-determinized first when `determinize` is nonzero)
 * into the stack-vector PDA and describes it as JSON. */
AC_API ac_status ac_fba_to_pda(const ac_fba* fba, int determinize, char** out);
/* Runs the compiled PDA of s_determinize(fba). AC_ERR_INCONCLUSIVE when
 * its search bounds cut a branch without accepting; `out` still receives
 * the run report then. */
AC_API ac_status ac_fba_pda_run(const ac_fba* fba, const char* input, char** out);

/* Explicit PDA given as JSON. `max_stack` and `max_epsilon_chain` of 0
 * pick the defaults. Inconclusive runs report as ac_fba_pda_run does. */
AC_API ac_status ac_pda_run(const char* pda_json, const char* input, size_t max_stack, size_t max_epsilon_chain,
                            char** out);

/* Weak FBA for the CS instance R ∩ h(D_k). */
AC_API ac_status ac_cs_build(const char* instance_json, ac_fba** out);

/* Random-machine round trip FBA -> s-determinized FBA -> PDA. */
AC_API ac_status ac_equiv_sweep(size_t machines, size_t max_len, uint64_t seed, unsigned max_states,
                                unsigned max_symbols, unsigned max_rules, char** out);

#ifdef __cplusplus
}
#endif

#endif /* ASSEMBLIES_H */
