#include <foamagent/foamagent.h>

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: expectation failed: %s\n", __FILE__,     \
              __LINE__, #cond);                                        \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

static int confirm_calls = 0;

static int confirm_yes(void* user, const char* requirement, const char* summary_json) {
  (void)user;
  EXPECT(requirement != NULL && strlen(requirement) > 0);
  EXPECT(strstr(summary_json, "\"score\":3") != NULL);
  ++confirm_calls;
  return 1;
}

int main(void) {
  const char* data = FOAMAGENT_TEST_DATA_DIR;
  char path[4096];
  char overrides[8192];

  EXPECT(strlen(fa_version()) > 0);
  EXPECT(strcmp(fa_status_name(FA_ERR_EMPTY_MANIFEST), "EmptyManifest") == 0);

  double v = 0;
  EXPECT(fa_pass_at_k(10, 6, 1, &v) == FA_OK && fabs(v - 0.6) < 1e-12);
  EXPECT(fa_pass_at_k(0, 0, 1, &v) == FA_ERR_INVALID_INPUT);
  EXPECT(strlen(fa_last_error_message()) > 0);
  EXPECT(fa_productivity(10, 0, &v) == FA_ERR_ZERO_LINES);
  const double xs[] = {1, 2, 3};
  const double ys[] = {2, 4, 7};
  EXPECT(fa_pearson_r(xs, ys, 3, &v) == FA_OK && v > 0.98);
  EXPECT(fabs(fa_estimate_cost(44045, 5.0) - 0.22) <= 0.005);

  fa_config* bad = NULL;
  EXPECT(fa_config_new(NULL, "{\"no_such_key\": 1}", &bad) == FA_ERR_CONFIG);
  EXPECT(bad == NULL);
  EXPECT(strcmp(fa_last_error_detail(), "no_such_key") == 0);

  snprintf(path, sizeof path, "%s/fixtures/cavity/fixture.json", data);
  snprintf(overrides, sizeof overrides,
           "{\"backend\": \"mock\", \"exec\": \"sim\", \"mock_script\": \"%s\", \"scenario\": \"%s\","
           " \"workspace\": \"capi-runs\", \"run_id\": \"capi\"}",
           path, path);
  fa_config* cfg = NULL;
  EXPECT(fa_config_new(NULL, overrides, &cfg) == FA_OK);
  char* cfg_json = NULL;
  EXPECT(fa_config_to_json(cfg, &cfg_json) == FA_OK);
  EXPECT(strstr(cfg_json, "\"backend\": \"mock\"") != NULL);
  fa_string_free(cfg_json);

  snprintf(path, sizeof path, "%s/tutorials", data);
  fa_database* db = NULL;
  char* ingest = NULL;
  EXPECT(fa_database_build(cfg, path, 0, &db, &ingest) == FA_OK);
  fa_string_free(ingest);
  size_t count = 0;
  EXPECT(fa_database_count(db, "architecture", &count) == FA_OK && count == 8);
  EXPECT(fa_database_count(db, "nonsense", &count) == FA_ERR_INVALID_ARGUMENT);
  char* hits = NULL;
  EXPECT(fa_database_retrieve(db, cfg, "architecture", "lid driven cavity icoFoam", 2, &hits) == FA_OK);
  EXPECT(hits != NULL && strstr(hits, "architecture/") != NULL);
  fa_string_free(hits);
  char* stream = NULL;
  EXPECT(fa_database_stream(db, "allrun", &stream) == FA_OK);
  EXPECT(strstr(stream, "``input_file_begin:") == stream);
  fa_string_free(stream);

  fa_outcome* outcome = NULL;
  const char* requirement =
      "do a 2D RANS simulation of incompressible cavity flow using pisoFoam";
  EXPECT(fa_run(cfg, db, requirement, "[]", confirm_yes, NULL, &outcome) == FA_OK);
  EXPECT(confirm_calls == 1);
  EXPECT(fa_outcome_score(outcome) == 4);
  EXPECT(fa_outcome_iterations(outcome) == 0);
  EXPECT(fa_outcome_total_tokens(outcome) > 0);
  EXPECT(fa_outcome_passed(outcome, 4) == 1);
  char* summary = NULL;
  EXPECT(fa_outcome_summary_json(outcome, &summary) == FA_OK);
  EXPECT(strstr(summary, "\"workspace\"") != NULL);
  fa_string_free(summary);
  fa_outcome_free(outcome);

  EXPECT(fa_run(cfg, db, "", NULL, NULL, NULL, &outcome) == FA_ERR_INVALID_ARGUMENT);

  snprintf(path, sizeof path, "%s/fixtures/hit/fixture.json", data);
  int matched = 0;
  char* result = NULL;
  EXPECT(fa_replay(cfg, db, path, NULL, &matched, &result) == FA_OK);
  EXPECT(matched == 1);
  EXPECT(strstr(result, "\"iterations\": 2") != NULL);
  fa_string_free(result);
  EXPECT(fa_replay(cfg, db, path, "{\"no_reviewer\": true}", &matched, &result) == FA_OK);
  EXPECT(matched == 0);
  fa_string_free(result);

  fa_database_free(db);
  fa_config_free(cfg);
  if (failures == 0) printf("capi_test: all expectations passed\n");
  return failures == 0 ? 0 : 1;
}
