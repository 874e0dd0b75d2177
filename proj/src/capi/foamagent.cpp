#include "foamagent/foamagent.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>

#include "app/app.hpp"
#include "common/error.hpp"
#include "common/text.hpp"
#include "orchestrator/transcript.hpp"

using nlohmann::json;
using namespace foamagent;

struct fa_config {
  app::AppConfig config;
};

struct fa_database {
  rag::Database db;
};

struct fa_outcome {
  orchestrator::RunOutcome outcome;
};

namespace {

thread_local std::string g_message;
thread_local std::string g_detail;

fa_status fail(fa_status status, std::string message, std::string detail = {}) {
  g_message = std::move(message);
  g_detail = std::move(detail);
  return status;
}

fa_status status_of(ErrorCode code) { return static_cast<fa_status>(static_cast<int>(code) + 1); }

template <typename F>
fa_status guarded(F&& body) {
  g_message.clear();
  g_detail.clear();
  try {
    body();
    return FA_OK;
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what(), e.detail());
  } catch (const json::exception& e) {
    return fail(FA_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(FA_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FA_ERR_INTERNAL, "unknown failure");
  }
}

char* dup(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

json parse_optional(const char* text) {
  if (!text || !*text) return json::object();
  return json::parse(text);
}

orchestrator::ConfirmFn wrap_confirm(fa_confirm_fn fn, void* user) {
  if (!fn) return {};
  return [fn, user](const std::string& requirement, const orchestrator::RunOutcome& o) -> std::optional<bool> {
    const auto summary = orchestrator::outcome_to_json(o).dump();
    const int verdict = fn(user, requirement.c_str(), summary.c_str());
    if (verdict < 0) return std::nullopt;
    return verdict != 0;
  };
}

rag::ChunkKind kind_of(const char* kind) {
  require(kind, "kind");
  return rag::chunk_kind_from_string(kind);
}

// The database a replay uses when the caller passes none.
rag::Database replay_database(const app::AppConfig& config, const rag::Embedder& embedder) {
  if (config.tutorials) return rag::build_database(*config.tutorials, embedder);
  if (std::filesystem::exists(config.db / "architecture.txt")) return rag::load_database(config.db, embedder);
  return rag::build_database(app::default_data_dir() / "tutorials", embedder);
}

json hits_to_json(const std::vector<rag::RetrievalHit>& hits) {
  json out = json::array();
  for (const auto& h : hits) {
    out.push_back({{"id", h.chunk->id}, {"case_name", h.chunk->info.name}, {"score", h.score}});
  }
  return out;
}

}  // namespace

extern "C" {

const char* fa_version(void) { return "0.1.0"; }

const char* fa_status_name(fa_status status) {
  static thread_local std::string name;
  if (status == FA_OK) return "OK";
  if (status == FA_ERR_INTERNAL) return "Internal";
  const int idx = static_cast<int>(status) - 1;
  if (idx < 0 || idx > static_cast<int>(ErrorCode::InvalidArgument)) return "Unknown";
  name = std::string(to_string(static_cast<ErrorCode>(idx)));
  return name.c_str();
}

const char* fa_last_error_message(void) { return g_message.c_str(); }
const char* fa_last_error_detail(void) { return g_detail.c_str(); }

void fa_string_free(char* s) { std::free(s); }

fa_status fa_config_new(const char* path, const char* overrides_json, fa_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    std::optional<std::filesystem::path> file;
    if (path && *path) file = path;
    auto c = std::make_unique<fa_config>();
    c->config = app::resolve_config(file, app::process_env(), parse_optional(overrides_json));
    *out = c.release();
  });
}

fa_status fa_config_apply(fa_config* config, const char* overrides_json) {
  return guarded([&] {
    require(config, "config");
    auto updated = config->config;
    app::apply_overrides(updated, parse_optional(overrides_json));
    orchestrator::validate(updated.pipeline);
    config->config = std::move(updated);
  });
}

fa_status fa_config_to_json(const fa_config* config, char** out_json) {
  return guarded([&] {
    require(config && out_json, "config and out_json");
    *out_json = dup(app::config_to_json(config->config).dump(2));
  });
}

void fa_config_free(fa_config* config) { delete config; }

fa_status fa_database_build(const fa_config* config, const char* tutorials_root, int skip_malformed,
                            fa_database** out, char** out_report_json) {
  return guarded([&] {
    require(config && tutorials_root && out, "config, tutorials_root and out");
    *out = nullptr;
    const auto embedder = app::make_embedder(config->config);
    rag::IngestReport report;
    auto db = std::make_unique<fa_database>();
    db->db = rag::build_database(tutorials_root, *embedder, {skip_malformed != 0}, &report);
    if (out_report_json) {
      *out_report_json = dup(json{{"cases", report.cases},
                                  {"skipped", report.skipped},
                                  {"architecture", db->db.architecture.entries.size()},
                                  {"file_context", db->db.file_context.entries.size()},
                                  {"allrun", db->db.allrun.entries.size()}}
                                 .dump(2));
    }
    *out = db.release();
  });
}

fa_status fa_database_save(const fa_database* db, const char* dir) {
  return guarded([&] {
    require(db && dir, "db and dir");
    rag::save_database(db->db, dir);
  });
}

fa_status fa_database_load(const fa_config* config, const char* dir, fa_database** out) {
  return guarded([&] {
    require(config && dir && out, "config, dir and out");
    *out = nullptr;
    const auto embedder = app::make_embedder(config->config);
    auto db = std::make_unique<fa_database>();
    db->db = rag::load_database(dir, *embedder);
    *out = db.release();
  });
}

fa_status fa_database_open(const fa_config* config, fa_database** out) {
  return guarded([&] {
    require(config && out, "config and out");
    *out = nullptr;
    const auto embedder = app::make_embedder(config->config);
    auto db = std::make_unique<fa_database>();
    db->db = app::open_database(config->config, *embedder);
    *out = db.release();
  });
}

fa_status fa_database_count(const fa_database* db, const char* kind, size_t* out_count) {
  return guarded([&] {
    require(db && out_count, "db and out_count");
    *out_count = db->db.index(kind_of(kind)).entries.size();
  });
}

fa_status fa_database_stream(const fa_database* db, const char* kind, char** out_text) {
  return guarded([&] {
    require(db && out_text, "db and out_text");
    *out_text = dup(rag::serialize_chunk_stream(db->db.index(kind_of(kind)).entries));
  });
}

fa_status fa_database_retrieve(const fa_database* db, const fa_config* config, const char* kind,
                               const char* query, size_t top_k, char** out_hits_json) {
  return guarded([&] {
    require(db && config && query && out_hits_json, "db, config, query and out_hits_json");
    const auto embedder = app::make_embedder(config->config);
    const auto hits = rag::retrieve_similar(db->db.index(kind_of(kind)), query, top_k, *embedder);
    *out_hits_json = dup(hits_to_json(hits).dump(2));
  });
}

void fa_database_free(fa_database* db) { delete db; }

fa_status fa_run(const fa_config* config, const fa_database* db, const char* requirement,
                 const char* checks_json, fa_confirm_fn confirm, void* confirm_user, fa_outcome** out) {
  return guarded([&] {
    require(config && db && requirement && out, "config, db, requirement and out");
    *out = nullptr;
    std::vector<executor::RequirementCheck> checks;
    if (checks_json && *checks_json) checks = eval::parse_checks(json::parse(checks_json));
    auto o = std::make_unique<fa_outcome>();
    o->outcome = app::run_requirement(config->config, db->db, requirement, checks,
                                      wrap_confirm(confirm, confirm_user));
    *out = o.release();
  });
}

fa_status fa_outcome_summary_json(const fa_outcome* outcome, char** out_json) {
  return guarded([&] {
    require(outcome && out_json, "outcome and out_json");
    auto j = orchestrator::outcome_to_json(outcome->outcome);
    j["workspace"] = outcome->outcome.workspace_root.string();
    *out_json = dup(j.dump(2));
  });
}

fa_status fa_outcome_transcript_json(const fa_outcome* outcome, int include_text, char** out_json) {
  return guarded([&] {
    require(outcome && out_json, "outcome and out_json");
    json entries = json::array();
    for (const auto& e : outcome->outcome.transcript) {
      entries.push_back(orchestrator::entry_to_json(e, include_text != 0));
    }
    *out_json = dup(entries.dump());
  });
}

int fa_outcome_score(const fa_outcome* outcome) { return outcome ? outcome->outcome.executability.score : -1; }

int fa_outcome_iterations(const fa_outcome* outcome) { return outcome ? outcome->outcome.iterations : -1; }

uint64_t fa_outcome_total_tokens(const fa_outcome* outcome) {
  return outcome ? outcome->outcome.ledger.total_tokens() : 0;
}

int fa_outcome_passed(const fa_outcome* outcome, int threshold) {
  return outcome && outcome->outcome.passed(threshold) ? 1 : 0;
}

fa_status fa_outcome_write_transcript(const fa_outcome* outcome, const char* path, const char* case_id,
                                      int run_index, int include_text) {
  return guarded([&] {
    require(outcome && path, "outcome and path");
    orchestrator::write_transcript(path, outcome->outcome, {case_id ? case_id : "", run_index},
                                   include_text != 0);
  });
}

void fa_outcome_free(fa_outcome* outcome) { delete outcome; }

fa_status fa_replay(const fa_config* config, const fa_database* db, const char* fixture_path,
                    const char* forced_json, int* out_matched, char** out_result_json) {
  return guarded([&] {
    require(config && fixture_path, "config and fixture_path");
    const auto fixture = app::load_fixture(fixture_path);
    std::optional<rag::Database> own;
    if (!db) {
      const auto embedder = app::make_embedder(config->config);
      own = replay_database(config->config, *embedder);
    }
    const auto r = app::replay_fixture(config->config, fixture, db ? db->db : *own, parse_optional(forced_json));
    if (out_matched) *out_matched = r.diffs.empty() ? 1 : 0;
    if (out_result_json) {
      auto actual = r.actual;
      actual["ledger"] = {{"prompt_tokens", r.outcome.ledger.totals().prompt_tokens},
                          {"completion_tokens", r.outcome.ledger.totals().completion_tokens}};
      *out_result_json = dup(json{{"fixture", fixture.name},
                                  {"matched", r.diffs.empty()},
                                  {"diffs", r.diffs},
                                  {"outcome", actual},
                                  {"declared_usage", fixture.declared_usage},
                                  {"unused_replies", r.unused_replies}}
                                 .dump(2));
    }
  });
}

fa_status fa_bench(const fa_config* config, const fa_database* db, const char* manifest_path,
                   fa_confirm_fn confirm, void* confirm_user, char** out_report_json, char** out_report_text) {
  return guarded([&] {
    require(config && manifest_path, "config and manifest_path");
    const auto manifest = eval::load_manifest(manifest_path);
    if (manifest.cases.empty()) throw Error(ErrorCode::EmptyManifest, "empty manifest", manifest_path);
    std::optional<rag::Database> own;
    if (!db) {
      const auto embedder = app::make_embedder(config->config);
      own = app::open_database(config->config, *embedder);
    }
    const auto result =
        app::run_bench(config->config, manifest, db ? db->db : *own, wrap_confirm(confirm, confirm_user));
    if (out_report_json) *out_report_json = dup(eval::report_to_json(result.report).dump(2));
    if (out_report_text) *out_report_text = dup(eval::report_to_text(result.report));
  });
}

fa_status fa_report(const char* transcripts_dir, const char* manifest_path, double price_per_million, int k,
                    char** out_report_json, char** out_report_text) {
  return guarded([&] {
    require(transcripts_dir, "transcripts_dir");
    std::vector<std::string> order;
    if (manifest_path && *manifest_path) {
      for (const auto& c : eval::load_manifest(manifest_path).cases) order.push_back(c.case_id);
    }
    const auto report = app::report_from_transcripts(transcripts_dir, price_per_million, k, order);
    if (out_report_json) *out_report_json = dup(eval::report_to_json(report).dump(2));
    if (out_report_text) *out_report_text = dup(eval::report_to_text(report));
  });
}

fa_status fa_pass_at_k(int64_t n, int64_t c, int64_t k, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = eval::pass_at_k(n, c, k);
  });
}

fa_status fa_productivity(double total_tokens, double total_lines, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = eval::productivity(total_tokens, total_lines);
  });
}

fa_status fa_pearson_r(const double* xs, const double* ys, size_t len, double* out) {
  return guarded([&] {
    require(out && (len == 0 || (xs && ys)), "xs, ys and out");
    *out = eval::pearson_r(std::vector<double>(xs, xs + len), std::vector<double>(ys, ys + len));
  });
}

double fa_estimate_cost(uint64_t total_tokens, double price_per_million) {
  return llm::estimate_cost(total_tokens, price_per_million);
}

fa_status fa_data_dir(char** out_path) {
  return guarded([&] {
    require(out_path, "out_path");
    *out_path = dup(app::default_data_dir().string());
  });
}

}  // extern "C"
