#include <foamagent/foamagent.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Str {
  char* p = nullptr;
  ~Str() { fa_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

int report_error(fa_status status) {
  std::cerr << "error: " << fa_status_name(status) << ": " << fa_last_error_message() << "\n";
  switch (status) {
    case FA_ERR_CONFIG:
    case FA_ERR_EMPTY_MANIFEST:
    case FA_ERR_INVALID_ARGUMENT:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  ~Handle() { Free(p); }
};

using Config = Handle<fa_config, fa_config_free>;
using Database = Handle<fa_database, fa_database_free>;
using Outcome = Handle<fa_outcome, fa_outcome_free>;

int confirm_on_terminal(void*, const char* requirement, const char* summary_json) {
  const auto summary = json::parse(summary_json);
  std::cerr << "\nRequirement: " << requirement << "\n"
            << "Executability " << summary.value("score", 0) << " (" << summary.value("rationale", "") << ")\n"
            << "Does the case satisfy the requirement? [y/n, empty keeps the automatic verdict] " << std::flush;
  std::string line;
  if (!std::getline(std::cin, line) || line.empty()) return -1;
  return line[0] == 'y' || line[0] == 'Y' ? 1 : 0;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Natural-language to OpenFOAM case generation and evaluation"};
  cli.require_subcommand(1, 1);
  cli.fallthrough();
  cli.set_version_flag("--version", fa_version());

  std::string config_path;
  json overrides = json::object();
  std::vector<std::string> settings;
  cli.add_option("--config", config_path, "JSON config file");
  cli.add_option("--set", settings, "Override any config key: key=value")->take_all();

  struct Flag {
    const char* name;
    const char* key;
    const char* help;
  };
  // Value options map one-to-one onto config keys.
  static const Flag kValueFlags[] = {
      {"--db", "db", "Database directory"},
      {"--backend", "backend", "LLM backend: remote or mock"},
      {"--exec", "exec", "Execution backend: shell or sim"},
      {"--temperature", "temperature", "LLM temperature (default 0.01)"},
      {"--max-iter", "max_iter", "Iteration cap (default 20)"},
      {"--n", "n", "Runs per case (default 10)"},
      {"--k", "k", "k of pass@k (default 1)"},
      {"--jobs", "jobs", "Bench worker threads (default 1)"},
      {"--seed", "seed", "Seed for mock fixture variant selection"},
      {"--model", "model", "Model id"},
      {"--endpoint", "endpoint", "Chat-completions endpoint"},
      {"--top-k", "top_k", "Retrieved chunks per query"},
      {"--token-budget", "token_budget", "Stop once the ledger reaches this many tokens"},
      {"--price", "price_per_million", "Price per 1M tokens (default 5)"},
      {"--mock-script", "mock_script", "Mock script, fixture, or directory of per-case fixtures"},
      {"--scenario", "scenario", "Simulator scenario or fixture"},
      {"--output", "output", "Output directory for transcripts and reports"},
      {"--workspace", "workspace", "Parent directory of generated cases"},
      {"--tutorials", "tutorials", "Build the database in memory from this tutorials tree"},
      {"--embedder", "embedder", "hashed or remote:<model>:<dimension>"},
      {"--run-id", "run_id", "Suffix of the workspace directory"},
  };
  std::vector<std::pair<const Flag*, std::string>> values(std::size(kValueFlags));
  std::vector<CLI::Option*> value_opts;
  for (std::size_t i = 0; i < std::size(kValueFlags); ++i) {
    values[i].first = &kValueFlags[i];
    value_opts.push_back(cli.add_option(kValueFlags[i].name, values[i].second, kValueFlags[i].help));
  }
  static const Flag kBoolFlags[] = {
      {"--no-reviewer", "no_reviewer", "Remove the Reviewer role"},
      {"--no-review-arch", "no_review_arch", "Remove the review-architecture action"},
      {"--no-rag", "no_rag", "Prompt without retrieved tutorials"},
      {"--interactive-confirm", "interactive_confirm", "Ask before accepting level 4"},
      {"--include-text", "include_text", "Store prompts and replies in transcripts"},
  };
  std::vector<CLI::Option*> bool_opts;
  for (const auto& f : kBoolFlags) bool_opts.push_back(cli.add_flag(f.name, f.help));

  auto* ingest = cli.add_subcommand("ingest", "Build the three sub-databases from a tutorials tree");
  std::string ingest_root;
  bool skip_malformed = false;
  ingest->add_option("tutorials", ingest_root, "Tutorials directory")->required();
  ingest->add_flag("--skip-malformed", skip_malformed, "Skip unreadable files instead of failing");

  auto* run = cli.add_subcommand("run", "Run one requirement through the pipeline");
  std::string requirement, checks_path, case_id;
  run->add_option("requirement", requirement, "Requirement sentence")->required();
  run->add_option("--checks", checks_path, "JSON array of requirement checks");
  run->add_option("--case-id", case_id, "Case id stored with the transcript");

  auto* bench = cli.add_subcommand("bench", "Run every manifest case n times and report metrics");
  std::string manifest_path;
  bench->add_option("manifest", manifest_path, "Benchmark manifest")->required();

  auto* replay = cli.add_subcommand("replay", "Replay recorded fixtures offline and compare outcomes");
  std::vector<std::string> fixtures;
  replay->add_option("fixtures", fixtures, "fixture.json files")->required();

  auto* report = cli.add_subcommand("report", "Rebuild the metrics report from stored transcripts");
  std::string transcripts_dir, report_manifest, report_out;
  report->add_option("transcripts", transcripts_dir, "Directory of .jsonl transcripts")->required();
  report->add_option("--manifest", report_manifest, "Manifest fixing the case order");
  report->add_option("--out", report_out, "Write report.json and report.txt here");
  report->add_flag("--json", "Print JSON instead of the table");

  try {
    cli.parse(argc, argv);
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (value_opts[i]->count() == 0) continue;
      overrides[values[i].first->key] = values[i].second;
    }
    for (std::size_t i = 0; i < bool_opts.size(); ++i) {
      if (bool_opts[i]->count() > 0) overrides[kBoolFlags[i].key] = true;
    }
    for (const auto& s : settings) {
      const auto eq = s.find('=');
      if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--set expects key=value, got " + s);
      const auto key = s.substr(0, eq);
      const auto raw = s.substr(eq + 1);
      overrides[key] = json::accept(raw) ? json::parse(raw) : json(raw);
    }
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Config config;
  const auto overrides_text = overrides.dump();
  if (const auto st = fa_config_new(config_path.empty() ? nullptr : config_path.c_str(),
                                    overrides_text.c_str(), &config.p);
      st != FA_OK) {
    return report_error(st);
  }
  Str cfg_json;
  fa_config_to_json(config.p, &cfg_json.p);
  const auto cfg = json::parse(cfg_json.str());
  const fa_confirm_fn confirm = cfg.value("interactive_confirm", false) ? confirm_on_terminal : nullptr;

  if (*ingest) {
    Database db;
    Str summary;
    if (const auto st = fa_database_build(config.p, ingest_root.c_str(), skip_malformed, &db.p, &summary.p);
        st != FA_OK) {
      return report_error(st);
    }
    const auto dir = cfg.value("db", "db");
    if (const auto st = fa_database_save(db.p, dir.c_str()); st != FA_OK) return report_error(st);
    const auto s = json::parse(summary.str());
    std::cout << "ingested " << s["cases"].size() << " cases into " << dir << ": " << s["architecture"]
              << " architecture, " << s["file_context"] << " file_context, " << s["allrun"] << " allrun chunks\n";
    for (const auto& skipped : s["skipped"]) std::cout << "skipped " << skipped.get<std::string>() << "\n";
    return kExitOk;
  }

  if (*report) {
    Str rj, rt;
    if (const auto st = fa_report(transcripts_dir.c_str(), report_manifest.empty() ? nullptr : report_manifest.c_str(),
                                  cfg.value("price_per_million", 5.0), cfg.value("k", 1), &rj.p, &rt.p);
        st != FA_OK) {
      return report_error(st);
    }
    if (!report_out.empty()) {
      std::filesystem::create_directories(report_out);
      std::ofstream(std::filesystem::path(report_out) / "report.json") << rj.str() << "\n";
      std::ofstream(std::filesystem::path(report_out) / "report.txt") << rt.str();
    }
    std::cout << (report->get_option("--json")->count() ? rj.str() + "\n" : rt.str());
    return kExitOk;
  }

  if (*replay) {
    int status = kExitOk;
    for (const auto& path : fixtures) {
      int matched = 0;
      Str result;
      if (const auto st = fa_replay(config.p, nullptr, path.c_str(), nullptr, &matched, &result.p); st != FA_OK) {
        return report_error(st);
      }
      const auto r = json::parse(result.str());
      const auto& o = r["outcome"];
      std::cout << (matched ? "ok       " : "MISMATCH ") << r.value("fixture", path) << ": score "
                << o["score"] << ", iterations " << o["iterations"] << ", stop " << o["stop_reason"].get<std::string>()
                << ", tokens " << o["total_tokens"] << "\n";
      for (const auto& d : r["diffs"]) std::cout << "  " << d.get<std::string>() << "\n";
      if (!matched) status = kExitFailure;
    }
    return status;
  }

  if (*bench) {
    Str rj, rt;
    if (const auto st = fa_bench(config.p, nullptr, manifest_path.c_str(), confirm, nullptr, &rj.p, &rt.p);
        st != FA_OK) {
      return report_error(st);
    }
    std::cout << rt.str();
    std::cout << "report written to " << cfg.value("output", "out") << "/report.{json,txt}\n";
    return kExitOk;
  }

  Database db;
  if (const auto st = fa_database_open(config.p, &db.p); st != FA_OK) return report_error(st);

  if (*run) {
    std::string checks;
    try {
      if (!checks_path.empty()) checks = read_text(checks_path);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    }
    Outcome outcome;
    if (const auto st = fa_run(config.p, db.p, requirement.c_str(), checks.empty() ? nullptr : checks.c_str(),
                               confirm, nullptr, &outcome.p);
        st != FA_OK) {
      return report_error(st);
    }
    Str summary;
    fa_outcome_summary_json(outcome.p, &summary.p);
    const auto s = json::parse(summary.str());
    const auto transcript = std::filesystem::path(cfg.value("output", "out")) /
                            (cfg.value("run_id", "run") + ".jsonl");
    if (const auto st = fa_outcome_write_transcript(outcome.p, transcript.c_str(), case_id.c_str(), 0,
                                                    cfg.value("include_text", false));
        st != FA_OK) {
      return report_error(st);
    }
    std::cout << "case:        " << s.value("case_name", "") << "\n"
              << "workspace:   " << s.value("workspace", "") << "\n"
              << "score:       " << s["score"] << " (" << s.value("rationale", "") << ")\n"
              << "iterations:  " << s["iterations"] << "\n"
              << "stop reason: " << s["stop_reason"].get<std::string>() << "\n"
              << "tokens:      " << s["total_tokens"] << " (prompt " << s["prompt_tokens"] << ", completion "
              << s["completion_tokens"] << ")\n"
              << "files:       " << s["file_count"] << ", lines " << s["total_lines"] << "\n"
              << "transcript:  " << transcript.string() << "\n";
    if (s.contains("error")) std::cout << "error:       " << s["error"].get<std::string>() << "\n";
    return fa_outcome_passed(outcome.p, 3) ? kExitOk : kExitFailure;
  }

  return kExitUsage;
}
