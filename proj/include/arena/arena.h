/*
 * Copyright 2026 The Litarena Authors.
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

/*
 * C interface to the arena library.
 *
 * Conventions:
 *   - Every fallible function returns an arena_status. On failure the
 *     thread-local message is available from arena_last_error() until the
 *     next call on the same thread.
 *   - Strings returned through `char** out` are NUL-terminated, owned by the
 *     caller and released with arena_string_free(). On failure *out is NULL.
 *   - Options are JSON objects given as UTF-8 text; NULL or "" means {}.
 *     Unknown keys are rejected with ARENA_INVALID_ARGUMENT.
 *   - Handles are opaque. A store handle may be shared between threads.
 */

#ifndef ARENA_ARENA_H_
#define ARENA_ARENA_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ARENA_API __declspec(dllexport)
#else
#define ARENA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum arena_status {
  ARENA_OK = 0,
  ARENA_INVALID_ARGUMENT = 1,
  ARENA_PARSE_ERROR = 2,
  ARENA_IO_ERROR = 3,
  ARENA_UNKNOWN_BATTLE = 10,
  ARENA_DUPLICATE_VOTE = 11,
  ARENA_UNKNOWN_MODEL = 12,
  ARENA_EMPTY_VOTE_SET = 13,
  ARENA_DEGENERATE_GRAPH = 14,
  ARENA_DIMENSION_MISMATCH = 15,
  ARENA_NON_FINITE_INPUT = 16,
  ARENA_MODEL_SET_MISMATCH = 17,
  ARENA_INVALID_RATING = 20,
  ARENA_NON_POSITIVE_P = 21,
  ARENA_INSUFFICIENT_SESSION = 22,
  ARENA_PROVIDER_UNAVAILABLE = 30,
  ARENA_GENERATION_TIMEOUT = 31,
  ARENA_MODERATION_DENIED = 32,
  ARENA_EMPTY_CORPUS = 33,
  ARENA_POOL_TOO_SMALL = 34,
  ARENA_INSUFFICIENT_VOTES = 40,
  ARENA_MISSING_VERDICTS = 41,
  ARENA_STORAGE_FULL = 50,
  ARENA_INTEGRITY_VIOLATION = 51,
  ARENA_CORRUPT_RECORD = 52,
  ARENA_INTERNAL = 99
} arena_status;

/* ---- Errors and memory ------------------------------------------------ */

ARENA_API const char* arena_version(void);
/* Stable name of a status, e.g. "EmptyVoteSet". */
ARENA_API const char* arena_status_name(arena_status status);
/* Message of the last failure on this thread; "" when none. */
ARENA_API const char* arena_last_error(void);
ARENA_API void arena_string_free(char* text);

/* ---- Store: votes.jsonl, battles.jsonl, responses/, corpus.jsonl,
 *      snapshots/ under one directory ------------------------------------ */

typedef struct arena_store arena_store;

/* Creates the directory when missing and recovers torn tails. */
ARENA_API arena_status arena_store_open(const char* dir, arena_store** out);
ARENA_API void arena_store_close(arena_store* store);

/* JSON report of the recovery performed by open:
 * {"torn_bytes": {file: n}, "corrupt": [{file, seq, line, message}]} */
ARENA_API arena_status arena_store_recovery(arena_store* store, char** out_json);

/* Appends battles given as JSON lines. */
ARENA_API arena_status arena_store_add_battles(arena_store* store, const char* battles_jsonl);

/* Appends votes given as JSON lines, all or nothing. `last_seq` may be NULL. */
ARENA_API arena_status arena_store_append_votes(arena_store* store, const char* votes_jsonl,
                                                int64_t* last_seq);

/* filter: {"discipline", "category", "user_id", "from", "to"}.
 * Output: {"votes": [...], "seq": [...], "corrupt": [...]}. */
ARENA_API arena_status arena_store_load_votes(arena_store* store, const char* filter_json,
                                              char** out_json);

ARENA_API arena_status arena_store_vote_count(arena_store* store, int64_t* out);

/* Reads a corpus JSONL file and appends its documents. */
ARENA_API arena_status arena_store_ingest_corpus(arena_store* store, const char* corpus_path,
                                                 size_t* added);

/* ---- Rating ------------------------------------------------------------ */

/*
 * Fit options (all optional):
 *   "seed": uint, "styled": bool, "style_path": path to style.jsonl,
 *   "discipline", "category", "user_id", "from", "to": vote filter,
 *   "exclude_flagged": bool, "anomaly_alpha": double, "deployment_seed": uint,
 *   "bootstrap_resamples": int, "threads": int, "ci": [lower_q, upper_q],
 *   "l2_lambda", "tolerance", "max_iterations".
 */

/* {"models": [{model, beta, elo}], "gamma"?, "n_votes", "seed", "config_hash",
 *  "diagnostics", "bootstrap"?, "excluded_users"?} */
ARENA_API arena_status arena_fit(arena_store* store, const char* options_json, char** out_json);

/* Fit plus percentile intervals; "bootstrap_resamples" defaults to 100. */
ARENA_API arena_status arena_bootstrap(arena_store* store, const char* options_json,
                                       char** out_json);

/* Canonical leaderboard JSON. An empty selection yields an empty board. */
ARENA_API arena_status arena_leaderboard(arena_store* store, const char* options_json,
                                         char** out_json);

/* Parses leaderboard JSON and renders it as "json" (canonical) or "table". */
ARENA_API arena_status arena_leaderboard_render(const char* leaderboard_json, const char* format,
                                                char** out_text);

/* Replays decisive votes and ties in sequence order through the online
 * update. options: {"k_factor": 32, "discipline", "category", ...filter}.
 * Output: {"ratings": [{model, elo}], "k_factor", "n_votes"}. */
ARENA_API arena_status arena_online_elo(arena_store* store, const char* options_json,
                                        char** out_json);

ARENA_API arena_status arena_expected_score(double rating_i, double rating_j, double* out);

/* ---- Anomaly detection ------------------------------------------------- */

/* options: {"alpha": 0.05, "deployment_seed": 0, "checkpoints": 5,
 * "range_low": 1, "range_high": 100}.
 * Output: {"config": {...}, "users": [verdict...], "flagged": [user...]}. */
ARENA_API arena_status arena_anomaly(arena_store* store, const char* options_json,
                                     char** out_json);

/* Quantile of the chi-squared distribution with even `df`. */
ARENA_API arena_status arena_chi2_quantile(int df, double q, double* out);

/* ---- Meta-evaluation --------------------------------------------------- */

/* options: {"per_discipline": 500, "seed": 0}. Output: benchmark JSON lines. */
ARENA_API arena_status arena_build_benchmark(arena_store* store, const char* options_json,
                                             char** out_jsonl);

/*
 * request: {"judges": [{"id": str, "provider": {provider config}}],
 *           "verdicts": [{item_id, judge_id, choice, raw_output}]  (instead of judges),
 *           "both_orders": bool, "parallelism": int, "missing_as_wrong": bool}
 * Output: {"report": {...}, "table": str, "verdicts": [...]}.
 */
ARENA_API arena_status arena_eval_judges(const char* benchmark_jsonl, const char* request_json,
                                         char** out_json);

/* ---- Simulation -------------------------------------------------------- */

/*
 * config: {"models", "votes", "seed", "strengths", "tie_prob", "length_gamma",
 *          "citation_gamma", "verbosity_spread", "length_jitter",
 *          "mean_citations", "users"}.
 * Writes a store under out_dir plus style.jsonl and truth.json.
 * Output: summary JSON {"out_dir", "votes", "battles", "seed", "config_hash"}.
 */
ARENA_API arena_status arena_simulate(const char* config_json, const char* out_dir,
                                      char** out_json);

/* ---- Analytics --------------------------------------------------------- */

/* options: {"out_dir": path, "sample": n, "seed": uint}. Writes
 * win_rates.svg and categories.svg when out_dir is given; "sample" limits the
 * category chart to a seeded random subset of battles.
 * Output: {"win_rates": {...}, "categories": {...}}. */
ARENA_API arena_status arena_analytics(arena_store* store, const char* options_json,
                                       char** out_json);

/* ---- Service ----------------------------------------------------------- */

typedef struct arena_server arena_server;

/* Loads config_path (may be NULL), applies ARENA_* environment variables,
 * then the keys of overrides_json, and opens the data directory. */
ARENA_API arena_status arena_server_create(const char* config_path, const char* overrides_json,
                                           arena_server** out);
/* Serves on a background thread; writes the bound port (port 0 = any). */
ARENA_API arena_status arena_server_start(arena_server* server, int* bound_port);
ARENA_API arena_status arena_server_stop(arena_server* server);
/* Blocks until queued generations and refits have finished. */
ARENA_API arena_status arena_server_wait_idle(arena_server* server);
/* The effective configuration as JSON. */
ARENA_API arena_status arena_server_config(arena_server* server, char** out_json);
ARENA_API void arena_server_destroy(arena_server* server);

#ifdef __cplusplus
}
#endif

#endif /* ARENA_ARENA_H_ */
