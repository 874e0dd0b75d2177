#include "app/app.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <random>
#include <thread>

#include "common/digest.hpp"
#include "common/error.hpp"
#include "common/text.hpp"
#include "executor/shell.hpp"
#include "orchestrator/transcript.hpp"

#ifndef FOAMAGENT_DEFAULT_DATA_DIR
#define FOAMAGENT_DEFAULT_DATA_DIR "data"
#endif

extern char** environ;

using nlohmann::json;
namespace fs = std::filesystem;

namespace foamagent::app {

namespace {

[[noreturn]] void bad_value(const std::string& key, const json& value, const std::string& what) {
  throw Error(ErrorCode::ConfigError, "config key '" + key + "': expected " + what + ", got " + value.dump(),
              key);
}

std::string as_string(const std::string& key, const json& v) {
  if (!v.is_string()) bad_value(key, v, "a string");
  return v.get<std::string>();
}

double as_number(const std::string& key, const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      std::size_t used = 0;
      const double d = std::stod(v.get<std::string>(), &used);
      if (used == v.get<std::string>().size()) return d;
    } catch (const std::exception&) {
    }
  }
  bad_value(key, v, "a number");
}

long long as_int(const std::string& key, const json& v) {
  const double d = as_number(key, v);
  if (d != static_cast<double>(static_cast<long long>(d))) bad_value(key, v, "an integer");
  return static_cast<long long>(d);
}

bool as_bool(const std::string& key, const json& v) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) {
    const auto s = text::lower(v.get<std::string>());
    if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
    if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  }
  if (v.is_number_integer()) return v.get<long long>() != 0;
  bad_value(key, v, "a boolean");
}

std::optional<fs::path> as_opt_path(const std::string& key, const json& v) {
  if (v.is_null()) return std::nullopt;
  return fs::path(as_string(key, v));
}

void check_range(bool ok, const std::string& key, const json& v, const std::string& what) {
  if (!ok) bad_value(key, v, what);
}

void set_key(AppConfig& c, const std::string& key, const json& v) {
  auto& p = c.pipeline;
  if (key == "backend") {
    c.backend = as_string(key, v);
    check_range(c.backend == "remote" || c.backend == "mock", key, v, "remote or mock");
  } else if (key == "exec") {
    c.exec = as_string(key, v);
    check_range(c.exec == "shell" || c.exec == "sim", key, v, "shell or sim");
  } else if (key == "db") {
    c.db = as_string(key, v);
  } else if (key == "tutorials") {
    c.tutorials = as_opt_path(key, v);
  } else if (key == "output") {
    c.output = as_string(key, v);
  } else if (key == "workspace") {
    p.workspace_parent = as_string(key, v);
  } else if (key == "embedder") {
    c.embedder = as_string(key, v);
  } else if (key == "api_key") {
    c.remote.api_key = as_string(key, v);
  } else if (key == "endpoint") {
    c.remote.endpoint = as_string(key, v);
  } else if (key == "model") {
    c.remote.model = as_string(key, v);
    p.model_id = c.remote.model;
  } else if (key == "max_retries") {
    c.remote.max_retries = static_cast<int>(as_int(key, v));
    check_range(c.remote.max_retries >= 0, key, v, "a non-negative integer");
  } else if (key == "temperature") {
    p.temperature = as_number(key, v);
    check_range(p.temperature >= 0.0 && p.temperature <= 1.0, key, v, "a number in [0, 1]");
  } else if (key == "max_iter") {
    p.max_iterations = static_cast<int>(as_int(key, v));
    check_range(p.max_iterations >= 0, key, v, "a non-negative integer");
  } else if (key == "max_output_tokens") {
    p.max_output_tokens = static_cast<int>(as_int(key, v));
    check_range(p.max_output_tokens > 0, key, v, "a positive integer");
  } else if (key == "top_k") {
    const auto k = as_int(key, v);
    check_range(k > 0, key, v, "a positive integer");
    p.top_k = static_cast<std::size_t>(k);
  } else if (key == "token_budget") {
    if (v.is_null()) {
      p.token_budget.reset();
    } else {
      const auto b = as_int(key, v);
      check_range(b > 0, key, v, "a positive integer");
      p.token_budget = static_cast<std::uint64_t>(b);
    }
  } else if (key == "no_reviewer") {
    p.flags.enable_reviewer = !as_bool(key, v);
  } else if (key == "no_review_arch") {
    p.flags.enable_review_architecture = !as_bool(key, v);
  } else if (key == "no_rag") {
    p.flags.enable_rag = !as_bool(key, v);
  } else if (key == "error_budget") {
    const auto b = as_int(key, v);
    check_range(b >= 64, key, v, "an integer >= 64");
    p.error_budget = static_cast<std::size_t>(b);
  } else if (key == "normalize_query") {
    p.normalize_query = as_bool(key, v);
  } else if (key == "exec_timeout") {
    const auto t = as_int(key, v);
    check_range(t > 0, key, v, "a positive number of seconds");
    p.exec_timeout = std::chrono::seconds(t);
  } else if (key == "template_dir") {
    p.template_dir = as_opt_path(key, v);
  } else if (key == "run_id") {
    p.run_id = as_string(key, v);
  } else if (key == "price_per_million") {
    c.price_per_million = as_number(key, v);
    check_range(c.price_per_million >= 0.0, key, v, "a non-negative number");
  } else if (key == "n") {
    c.runs = static_cast<int>(as_int(key, v));
    check_range(c.runs >= 1, key, v, "a positive integer");
  } else if (key == "k") {
    c.k = static_cast<int>(as_int(key, v));
    check_range(c.k >= 1, key, v, "a positive integer");
  } else if (key == "jobs") {
    c.jobs = static_cast<int>(as_int(key, v));
    check_range(c.jobs >= 1, key, v, "a positive integer");
  } else if (key == "seed") {
    const auto s = as_int(key, v);
    check_range(s >= 0, key, v, "a non-negative integer");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "mock_script") {
    c.mock_script = as_opt_path(key, v);
  } else if (key == "scenario") {
    c.scenario = as_opt_path(key, v);
  } else if (key == "interactive_confirm") {
    c.interactive_confirm = as_bool(key, v);
  } else if (key == "include_text") {
    c.include_text = as_bool(key, v);
  } else {
    throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'", key);
  }
}

// Per-case fixture variants for mock benches: <dir>/<case_id>/*.json or
// <dir>/<case_id>.json.
std::vector<fs::path> fixture_variants(const fs::path& root, const std::string& case_id) {
  std::vector<fs::path> out;
  if (fs::is_directory(root / case_id)) {
    for (const auto& e : fs::recursive_directory_iterator(root / case_id)) {
      if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
    }
  }
  if (fs::is_regular_file(root / (case_id + ".json"))) out.push_back(root / (case_id + ".json"));
  std::sort(out.begin(), out.end());
  return out;
}

json read_json(const fs::path& path) {
  try {
    return json::parse(text::read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what(), path.string());
  }
}

// A script file may be a bare script or a fixture carrying "script".
std::vector<llm::ScriptEntry> script_from(const fs::path& path) {
  const auto doc = read_json(path);
  if (doc.is_object() && doc.contains("script")) return llm::parse_script(doc["script"]);
  return llm::parse_script(doc);
}

executor::SimulatorScenario scenario_from(const fs::path& path) {
  const auto doc = read_json(path);
  if (doc.is_object() && doc.contains("scenario")) return executor::parse_scenario(doc["scenario"]);
  return executor::parse_scenario(doc);
}

struct RunBackends {
  std::unique_ptr<llm::LlmBackend> llm;
  std::unique_ptr<executor::ExecutionBackend> exec;
};

RunBackends make_backends(const AppConfig& config, const std::optional<fs::path>& fixture) {
  RunBackends b;
  if (config.backend == "mock") {
    const auto source = fixture ? fixture : config.mock_script;
    if (!source) throw Error(ErrorCode::ConfigError, "the mock backend needs mock_script", "mock_script");
    b.llm = std::make_unique<llm::MockBackend>(script_from(*source));
  } else {
    b.llm = std::make_unique<llm::RemoteBackend>(config.remote);
  }
  if (config.exec == "sim") {
    const auto source = config.scenario ? config.scenario : fixture;
    if (!source) throw Error(ErrorCode::ConfigError, "the simulator needs a scenario", "scenario");
    b.exec = std::make_unique<executor::SimulatorBackend>(scenario_from(*source));
  } else {
    b.exec = std::make_unique<executor::ShellBackend>();
  }
  return b;
}

std::string run_file_name(std::size_t case_index, const std::string& case_id, int run) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%03zu-", case_index);
  std::string name = buf + case_id;
  std::snprintf(buf, sizeof buf, "-%03d.jsonl", run);
  return name + buf;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "backend",      "exec",         "db",          "tutorials",         "output",
      "workspace",    "embedder",     "api_key",     "endpoint",          "model",
      "max_retries",  "temperature",  "max_iter",    "max_output_tokens", "top_k",
      "token_budget", "no_reviewer",  "no_review_arch", "no_rag",         "error_budget",
      "normalize_query", "exec_timeout", "template_dir", "run_id",        "price_per_million",
      "n",            "k",            "jobs",        "seed",              "mock_script",
      "scenario",     "interactive_confirm", "include_text"};
  return keys;
}

EnvMap process_env() {
  EnvMap env;
  for (char** e = environ; e && *e; ++e) {
    const std::string_view entry(*e);
    const auto eq = entry.find('=');
    if (eq == std::string_view::npos || !entry.starts_with("FOAMAGENT_")) continue;
    env.emplace(std::string(entry.substr(0, eq)), std::string(entry.substr(eq + 1)));
  }
  return env;
}

void apply_overrides(AppConfig& config, const json& overrides) {
  if (overrides.is_null()) return;
  if (!overrides.is_object()) {
    throw Error(ErrorCode::ConfigError, "config overrides must be a JSON object");
  }
  for (const auto& [key, value] : overrides.items()) set_key(config, key, value);
}

AppConfig resolve_config(const std::optional<fs::path>& file, const EnvMap& env, const json& overrides) {
  AppConfig config;
  if (file) {
    const auto doc = read_json(*file);
    if (!doc.is_object()) throw Error(ErrorCode::ConfigError, file->string() + ": expected a JSON object");
    apply_overrides(config, doc);
  }
  static const std::pair<const char*, const char*> kEnv[] = {
      {"FOAMAGENT_API_KEY", "api_key"}, {"FOAMAGENT_ENDPOINT", "endpoint"}, {"FOAMAGENT_MODEL", "model"}};
  for (const auto& [var, key] : kEnv) {
    if (const auto it = env.find(var); it != env.end()) set_key(config, key, it->second);
  }
  apply_overrides(config, overrides);
  orchestrator::validate(config.pipeline);
  return config;
}

json config_to_json(const AppConfig& c) {
  const auto& p = c.pipeline;
  auto opt_path = [](const std::optional<fs::path>& v) { return v ? json(v->string()) : json(nullptr); };
  return {{"backend", c.backend},
          {"exec", c.exec},
          {"db", c.db.string()},
          {"tutorials", opt_path(c.tutorials)},
          {"output", c.output.string()},
          {"workspace", p.workspace_parent.string()},
          {"embedder", c.embedder},
          {"api_key", c.remote.api_key.empty() ? "" : "***"},
          {"endpoint", c.remote.endpoint},
          {"model", c.remote.model},
          {"max_retries", c.remote.max_retries},
          {"temperature", p.temperature},
          {"max_iter", p.max_iterations},
          {"max_output_tokens", p.max_output_tokens},
          {"top_k", p.top_k},
          {"token_budget", p.token_budget ? json(*p.token_budget) : json(nullptr)},
          {"no_reviewer", !p.flags.enable_reviewer},
          {"no_review_arch", !p.flags.enable_review_architecture},
          {"no_rag", !p.flags.enable_rag},
          {"error_budget", p.error_budget},
          {"normalize_query", p.normalize_query},
          {"exec_timeout", p.exec_timeout.count()},
          {"template_dir", opt_path(p.template_dir)},
          {"run_id", p.run_id},
          {"price_per_million", c.price_per_million},
          {"n", c.runs},
          {"k", c.k},
          {"jobs", c.jobs},
          {"seed", c.seed},
          {"mock_script", opt_path(c.mock_script)},
          {"scenario", opt_path(c.scenario)},
          {"interactive_confirm", c.interactive_confirm},
          {"include_text", c.include_text}};
}

fs::path default_data_dir() {
  if (const char* d = std::getenv("FOAMAGENT_DATA_DIR"); d && *d) return d;
  return FOAMAGENT_DEFAULT_DATA_DIR;
}

std::shared_ptr<rag::Embedder> make_embedder(const AppConfig& config) {
  if (config.embedder == "hashed") return rag::make_default_embedder();
  const auto parts = text::split(config.embedder, ':');
  if (parts.size() == 3 && parts[0] == "remote") {
    std::size_t dim = 0;
    try {
      dim = static_cast<std::size_t>(std::stoul(std::string(parts[2])));
    } catch (const std::exception&) {
    }
    if (dim > 0) {
      return std::make_shared<llm::RemoteEmbedder>(config.remote, std::string(parts[1]), dim);
    }
  }
  throw Error(ErrorCode::ConfigError,
              "embedder must be 'hashed' or 'remote:<model>:<dimension>', got '" + config.embedder + "'",
              "embedder");
}

rag::Database open_database(const AppConfig& config, const rag::Embedder& embedder) {
  if (config.tutorials) return rag::build_database(*config.tutorials, embedder);
  if (!fs::exists(config.db / "architecture.txt")) {
    throw Error(ErrorCode::ConfigError,
                "no database at " + config.db.string() + " (run ingest, or set tutorials)",
                config.db.string());
  }
  return rag::load_database(config.db, embedder);
}

Fixture parse_fixture(const json& doc) {
  Fixture f;
  try {
    f.name = doc.value("name", std::string());
    f.requirement = doc.at("requirement").get<std::string>();
    f.checks = eval::parse_checks(doc.value("checks", json::array()));
    f.config = doc.value("config", json::object());
    f.script = llm::parse_script(doc.at("script"));
    f.scenario = executor::parse_scenario(doc.at("scenario"));
    f.expected = doc.value("expected", json::object());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed fixture: ") + e.what());
  }
  llm::UsageRecord total;
  for (const auto& e : f.script) {
    if (e.usage) {
      for (int i = 0; i < e.repeat; ++i) total += *e.usage;
    }
  }
  f.declared_usage = {{"prompt_tokens", total.prompt_tokens}, {"completion_tokens", total.completion_tokens}};
  return f;
}

Fixture load_fixture(const fs::path& path) {
  auto f = parse_fixture(read_json(path));
  if (f.name.empty()) f.name = path.parent_path().filename().string();
  return f;
}

ReplayResult replay_fixture(const AppConfig& base, const Fixture& fixture, const rag::Database& db,
                            const json& forced) {
  AppConfig config = base;
  apply_overrides(config, fixture.config);
  apply_overrides(config, forced);
  orchestrator::validate(config.pipeline);
  if (config.pipeline.run_id == "run") config.pipeline.run_id = fixture.name.empty() ? "replay" : fixture.name;

  llm::MockBackend mock(fixture.script);
  executor::SimulatorBackend sim(fixture.scenario);
  const auto embedder = make_embedder(config);
  orchestrator::PipelineBackends backends{&mock, &sim, &db, embedder.get()};

  ReplayResult r;
  r.outcome = orchestrator::run_pipeline(fixture.requirement, fixture.checks, config.pipeline, backends);
  r.actual = orchestrator::outcome_to_json(r.outcome);
  r.diffs = orchestrator::diff_json(fixture.expected, r.actual);
  r.unused_replies = mock.remaining();
  r.requests = mock.requests();
  return r;
}

orchestrator::RunOutcome run_requirement(const AppConfig& config, const rag::Database& db,
                                         const std::string& requirement,
                                         const std::vector<executor::RequirementCheck>& checks,
                                         const orchestrator::ConfirmFn& confirm) {
  auto backends = make_backends(config, std::nullopt);
  const auto embedder = make_embedder(config);
  orchestrator::PipelineBackends pb{backends.llm.get(), backends.exec.get(), &db, embedder.get()};
  return orchestrator::run_pipeline(requirement, checks, config.pipeline, pb, confirm);
}

BenchResult run_bench(const AppConfig& config, const eval::Manifest& manifest, const rag::Database& db,
                      const orchestrator::ConfirmFn& confirm) {
  if (manifest.cases.empty()) throw Error(ErrorCode::EmptyManifest, "empty manifest");
  const auto transcripts_dir = config.output / "transcripts";
  fs::create_directories(transcripts_dir);
  for (const auto& e : fs::directory_iterator(transcripts_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".jsonl") fs::remove(e.path());
  }
  const auto embedder = make_embedder(config);

  struct Job {
    std::size_t case_index;
    int run;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < manifest.cases.size(); ++i) {
    for (int r = 0; r < config.runs; ++r) jobs.push_back({i, r});
  }

  // Variant choice depends only on (seed, case, run), never on scheduling.
  std::vector<std::optional<fs::path>> variant(jobs.size());
  const bool variants = config.backend == "mock" && config.mock_script && fs::is_directory(*config.mock_script);
  if (variants) {
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      const auto& bc = manifest.cases[jobs[j].case_index];
      const auto options = fixture_variants(*config.mock_script, bc.case_id);
      if (options.empty()) {
        throw Error(ErrorCode::ConfigError,
                    "no mock fixture for case " + bc.case_id + " under " + config.mock_script->string(),
                    bc.case_id);
      }
      std::mt19937_64 rng(config.seed ^ fnv1a64(bc.case_id) ^
                          (static_cast<std::uint64_t>(jobs[j].run) * 0x9e3779b97f4a7c15ULL));
      variant[j] = options[rng() % options.size()];
    }
  }

  std::vector<fs::path> paths(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::optional<Error> first_error;
  std::mutex confirm_mutex;
  orchestrator::ConfirmFn serial_confirm;
  if (confirm) {
    serial_confirm = [&](const std::string& req, const orchestrator::RunOutcome& o) {
      std::lock_guard lock(confirm_mutex);
      return confirm(req, o);
    };
  }

  auto worker = [&] {
    while (true) {
      const auto j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      const auto& bc = manifest.cases[jobs[j].case_index];
      try {
        AppConfig run_config = config;
        run_config.pipeline.run_id = bc.case_id + "-" + std::to_string(jobs[j].run);
        run_config.pipeline.workspace_parent = config.pipeline.workspace_parent;
        auto backends = make_backends(run_config, variant[j]);
        orchestrator::PipelineBackends pb{backends.llm.get(), backends.exec.get(), &db, embedder.get()};
        const auto outcome =
            orchestrator::run_pipeline(bc.requirement, bc.checks, run_config.pipeline, pb, serial_confirm);
        paths[j] = transcripts_dir / run_file_name(jobs[j].case_index, bc.case_id, jobs[j].run);
        orchestrator::write_transcript(paths[j], outcome, {bc.case_id, jobs[j].run}, config.include_text);
      } catch (const Error& e) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = e;
        next.store(jobs.size());
      }
    }
  };
  const int workers = std::max(1, std::min<int>(config.jobs, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (first_error) throw *first_error;

  std::vector<std::string> order;
  for (const auto& bc : manifest.cases) order.push_back(bc.case_id);
  BenchResult result;
  result.transcripts = paths;
  result.report = report_from_transcripts(transcripts_dir, config.price_per_million, config.k, order);
  write_report(result.report, config.output);
  return result;
}

eval::MetricsReport report_from_transcripts(const fs::path& dir, double price_per_million, int k,
                                            const std::vector<std::string>& case_order) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::IoFailure, "not a directory: " + dir.string(), dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<std::string> order = case_order;
  std::map<std::string, std::vector<orchestrator::StoredRun>> by_case;
  for (const auto& f : files) {
    auto run = orchestrator::read_transcript(f);
    if (case_order.empty() && !by_case.count(run.meta.case_id)) order.push_back(run.meta.case_id);
    by_case[run.meta.case_id].push_back(std::move(run));
  }
  std::vector<eval::CaseRuns> cases;
  for (const auto& id : order) {
    eval::CaseRuns cr;
    cr.case_id = id;
    auto it = by_case.find(id);
    if (it != by_case.end()) {
      auto runs = it->second;
      std::sort(runs.begin(), runs.end(),
                [](const auto& a, const auto& b) { return a.meta.run_index < b.meta.run_index; });
      for (const auto& r : runs) {
        cr.runs.push_back({r.score, r.iterations, r.total_tokens(), r.total_lines, r.file_count});
      }
    }
    cases.push_back(std::move(cr));
  }
  return eval::aggregate_report(cases, price_per_million, k);
}

void write_report(const eval::MetricsReport& report, const fs::path& dir) {
  text::write_file(dir / "report.json", eval::report_to_json(report).dump(2) + "\n");
  text::write_file(dir / "report.txt", eval::report_to_text(report));
}

}  // namespace foamagent::app
