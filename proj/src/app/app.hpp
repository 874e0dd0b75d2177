#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "eval/metrics.hpp"
#include "executor/simulator.hpp"
#include "llm/mock.hpp"
#include "llm/remote.hpp"
#include "orchestrator/pipeline.hpp"
#include "rag/index.hpp"

namespace foamagent::app {

/// Effective settings of one invocation. Keys of the flat JSON form are the
/// names accepted in config files and overrides (see config_keys()).
struct AppConfig {
  std::string backend = "remote";  // remote | mock
  std::string exec = "shell";      // shell | sim
  std::filesystem::path db = "db";
  std::optional<std::filesystem::path> tutorials;
  std::filesystem::path output = "out";
  std::string embedder = "hashed";  // hashed | remote:<model>:<dimension>
  llm::RemoteConfig remote;
  orchestrator::PipelineConfig pipeline;
  double price_per_million = 5.0;
  int runs = 10;
  int k = 1;
  int jobs = 1;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> mock_script;  // script, fixture, or directory of fixtures
  std::optional<std::filesystem::path> scenario;
  bool interactive_confirm = false;
  bool include_text = false;
};

const std::vector<std::string>& config_keys();

using EnvMap = std::map<std::string, std::string>;

/// FOAMAGENT_* variables of the current process.
EnvMap process_env();

/// Built-in defaults, then the config file, then the environment, then
/// `overrides`. Throws ConfigError for unknown keys or ill-typed values.
AppConfig resolve_config(const std::optional<std::filesystem::path>& file, const EnvMap& env,
                         const nlohmann::json& overrides);

/// Applies a flat JSON object on top of `config`.
void apply_overrides(AppConfig& config, const nlohmann::json& overrides);

nlohmann::json config_to_json(const AppConfig& config);

/// Directory holding tutorials/, fixtures/ and manifests/ of this build.
std::filesystem::path default_data_dir();

std::shared_ptr<rag::Embedder> make_embedder(const AppConfig& config);

/// Loads the persisted database at config.db, or builds one in memory from
/// config.tutorials when that is set.
rag::Database open_database(const AppConfig& config, const rag::Embedder& embedder);

struct Fixture {
  std::string name;
  std::string requirement;
  std::vector<executor::RequirementCheck> checks;
  nlohmann::json config = nlohmann::json::object();
  std::vector<llm::ScriptEntry> script;
  executor::SimulatorScenario scenario;
  nlohmann::json expected = nlohmann::json::object();
  nlohmann::json declared_usage;  // {prompt_tokens, completion_tokens}: script total
};

Fixture parse_fixture(const nlohmann::json& doc);
Fixture load_fixture(const std::filesystem::path& path);

struct ReplayResult {
  orchestrator::RunOutcome outcome;
  nlohmann::json actual;
  std::vector<std::string> diffs;
  std::size_t unused_replies = 0;
  std::vector<llm::ChatRequest> requests;
};

/// Runs the fixture with a mock LLM and the simulator. The fixture's config
/// applies over `base`, then `forced` over both. Diffs compare only the
/// fields named in the fixture's expected outcome.
ReplayResult replay_fixture(const AppConfig& base, const Fixture& fixture, const rag::Database& db,
                            const nlohmann::json& forced = nlohmann::json::object());

/// One pipeline run with the backends named by `config`.
orchestrator::RunOutcome run_requirement(const AppConfig& config, const rag::Database& db,
                                         const std::string& requirement,
                                         const std::vector<executor::RequirementCheck>& checks,
                                         const orchestrator::ConfirmFn& confirm = {});

struct BenchResult {
  eval::MetricsReport report;
  std::vector<std::filesystem::path> transcripts;
};

/// config.runs runs per case on config.jobs workers. Transcripts go to
/// <output>/transcripts, the report to <output>/report.{json,txt}.
/// Throws EmptyManifest.
BenchResult run_bench(const AppConfig& config, const eval::Manifest& manifest,
                      const rag::Database& db, const orchestrator::ConfirmFn& confirm = {});

/// Rebuilds the report from every *.jsonl transcript under `dir`, cases in
/// order of first appearance in file-name order unless `case_order` is given.
eval::MetricsReport report_from_transcripts(const std::filesystem::path& dir, double price_per_million,
                                            int k,
                                            const std::vector<std::string>& case_order = {});

void write_report(const eval::MetricsReport& report, const std::filesystem::path& dir);

}  // namespace foamagent::app
