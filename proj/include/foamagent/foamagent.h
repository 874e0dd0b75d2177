#ifndef FOAMAGENT_FOAMAGENT_H
#define FOAMAGENT_FOAMAGENT_H

#include <stddef.h>
#include <stdint.h>

#if defined(FOAMAGENT_BUILDING)
#define FA_API __attribute__((visibility("default")))
#else
#define FA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Values are stable. */
typedef enum fa_status {
  FA_OK = 0,
  FA_ERR_UNTERMINATED_CHUNK = 1,
  FA_ERR_MISSING_HEADER_FIELD = 2,
  FA_ERR_DUPLICATE_CHUNK = 3,
  FA_ERR_EMPTY_TEXT = 4,
  FA_ERR_EMBEDDER_FAILURE = 5,
  FA_ERR_EMBEDDER_MISMATCH = 6,
  FA_ERR_DIMENSION_MISMATCH = 7,
  FA_ERR_ZERO_VECTOR = 8,
  FA_ERR_EMPTY_CORPUS = 9,
  FA_ERR_MALFORMED_CORPUS_FILE = 10,
  FA_ERR_EMPTY_INDEX = 11,
  FA_ERR_INDEX_CORRUPT = 12,
  FA_ERR_INVALID_REQUEST = 13,
  FA_ERR_TRANSPORT = 14,
  FA_ERR_PROVIDER = 15,
  FA_ERR_SCRIPT_EXHAUSTED = 16,
  FA_ERR_SCRIPT_MISMATCH = 17,
  FA_ERR_MISSING_BINDING = 18,
  FA_ERR_UNKNOWN_PLACEHOLDER = 19,
  FA_ERR_NO_HEADER = 20,
  FA_ERR_COUNT_MISMATCH = 21,
  FA_ERR_MALFORMED_SUBTASK_LINE = 22,
  FA_ERR_DUPLICATE_SUBTASK = 23,
  FA_ERR_NO_FENCE = 24,
  FA_ERR_UNTERMINATED_FENCE = 25,
  FA_ERR_MISSING_FILE_MARKERS = 26,
  FA_ERR_MISSING_FOLDER_MARKERS = 27,
  FA_ERR_ARITY_MISMATCH = 28,
  FA_ERR_EMPTY_TARGETS = 29,
  FA_ERR_INVALID_FOAMFILE = 30,
  FA_ERR_DUPLICATE_FILE = 31,
  FA_ERR_IO = 32,
  FA_ERR_MISSING_ALLRUN = 33,
  FA_ERR_BACKEND_UNAVAILABLE = 34,
  FA_ERR_SCENARIO = 35,
  FA_ERR_INVALID_INPUT = 36,
  FA_ERR_ZERO_LINES = 37,
  FA_ERR_LENGTH_MISMATCH = 38,
  FA_ERR_CONSTANT_SERIES = 39,
  FA_ERR_INCONSISTENT_N = 40,
  FA_ERR_EMPTY_MANIFEST = 41,
  FA_ERR_CONFIG = 42,
  FA_ERR_INVALID_ARGUMENT = 43,
  FA_ERR_INTERNAL = 100
} fa_status;

typedef struct fa_config fa_config;
typedef struct fa_database fa_database;
typedef struct fa_outcome fa_outcome;

/* Return 1 to confirm level 4, 0 to reject, -1 to leave the automatic verdict. */
typedef int (*fa_confirm_fn)(void* user, const char* requirement, const char* summary_json);

FA_API const char* fa_version(void);
FA_API const char* fa_status_name(fa_status status);

/* Message and detail of the last failure on the calling thread. Valid until
   the next call on that thread. */
FA_API const char* fa_last_error_message(void);
FA_API const char* fa_last_error_detail(void);

/* Frees every char* returned through an out parameter. */
FA_API void fa_string_free(char* s);

/* Config: defaults < file (may be NULL) < FOAMAGENT_* environment < overrides
   (a JSON object, may be NULL). */
FA_API fa_status fa_config_new(const char* path, const char* overrides_json, fa_config** out);
FA_API fa_status fa_config_apply(fa_config* config, const char* overrides_json);
FA_API fa_status fa_config_to_json(const fa_config* config, char** out_json);
FA_API void fa_config_free(fa_config* config);

/* Database. kind is "architecture", "file_context" or "allrun". */
FA_API fa_status fa_database_build(const fa_config* config, const char* tutorials_root, int skip_malformed,
                                   fa_database** out, char** out_report_json);
FA_API fa_status fa_database_save(const fa_database* db, const char* dir);
FA_API fa_status fa_database_load(const fa_config* config, const char* dir, fa_database** out);
FA_API fa_status fa_database_open(const fa_config* config, fa_database** out);
FA_API fa_status fa_database_count(const fa_database* db, const char* kind, size_t* out_count);
FA_API fa_status fa_database_stream(const fa_database* db, const char* kind, char** out_text);
FA_API fa_status fa_database_retrieve(const fa_database* db, const fa_config* config, const char* kind,
                                      const char* query, size_t top_k, char** out_hits_json);
FA_API void fa_database_free(fa_database* db);

/* One pipeline run. checks_json is an array of {id, file, contains?|regex?}
   and may be NULL. confirm may be NULL. */
FA_API fa_status fa_run(const fa_config* config, const fa_database* db, const char* requirement,
                        const char* checks_json, fa_confirm_fn confirm, void* confirm_user,
                        fa_outcome** out);
FA_API fa_status fa_outcome_summary_json(const fa_outcome* outcome, char** out_json);
FA_API fa_status fa_outcome_transcript_json(const fa_outcome* outcome, int include_text, char** out_json);
FA_API int fa_outcome_score(const fa_outcome* outcome);
FA_API int fa_outcome_iterations(const fa_outcome* outcome);
FA_API uint64_t fa_outcome_total_tokens(const fa_outcome* outcome);
FA_API int fa_outcome_passed(const fa_outcome* outcome, int threshold);
FA_API fa_status fa_outcome_write_transcript(const fa_outcome* outcome, const char* path, const char* case_id,
                                             int run_index, int include_text);
FA_API void fa_outcome_free(fa_outcome* outcome);

/* Replays a fixture file. db may be NULL: the tutorials named by the config,
   or the bundled corpus, are ingested in memory. forced_json (may be NULL)
   applies over the fixture's own config. out_result_json holds matched,
   diffs, outcome, declared_usage, unused_replies. */
FA_API fa_status fa_replay(const fa_config* config, const fa_database* db, const char* fixture_path,
                           const char* forced_json, int* out_matched, char** out_result_json);

/* Benchmark over a manifest; writes transcripts and report under the
   configured output directory. db may be NULL: the configured database is
   opened after the manifest has been read. */
FA_API fa_status fa_bench(const fa_config* config, const fa_database* db, const char* manifest_path,
                          fa_confirm_fn confirm, void* confirm_user, char** out_report_json,
                          char** out_report_text);

/* Report from stored transcripts. manifest_path (may be NULL) fixes case order. */
FA_API fa_status fa_report(const char* transcripts_dir, const char* manifest_path, double price_per_million,
                           int k, char** out_report_json, char** out_report_text);

/* Metric helpers. */
FA_API fa_status fa_pass_at_k(int64_t n, int64_t c, int64_t k, double* out);
FA_API fa_status fa_productivity(double total_tokens, double total_lines, double* out);
FA_API fa_status fa_pearson_r(const double* xs, const double* ys, size_t len, double* out);
FA_API double fa_estimate_cost(uint64_t total_tokens, double price_per_million);

/* Directory of the bundled data (tutorials, fixtures, manifests). */
FA_API fa_status fa_data_dir(char** out_path);

#ifdef __cplusplus
}
#endif

#endif
