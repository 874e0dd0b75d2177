#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "agents/parsers.hpp"
#include "executor/report.hpp"
#include "llm/backend.hpp"
#include "rag/index.hpp"
#include "workspace/workspace.hpp"

namespace foamagent::orchestrator {

struct PipelineFlags {
  bool enable_reviewer = true;
  bool enable_review_architecture = true;
  bool enable_rag = true;
};

struct PipelineConfig {
  int max_iterations = 20;
  std::optional<std::uint64_t> token_budget;
  double temperature = 0.01;
  std::string model_id = "gpt-4o";
  int max_output_tokens = 4096;
  std::size_t top_k = 1;
  PipelineFlags flags;
  std::size_t error_budget = 8000;
  bool normalize_query = false;
  std::chrono::seconds exec_timeout{3600};
  std::optional<std::filesystem::path> template_dir;
  std::vector<std::string> missing_file_patterns = agents::default_missing_file_patterns();
  workspace::NameSet command_whitelist = workspace::default_command_whitelist();
  workspace::NameSet run_whitelist = workspace::default_run_whitelist();
  executor::SignalRules signal_rules;
  std::filesystem::path workspace_parent = "runs";
  std::string run_id = "run";
};

/// Throws ConfigError when a field is out of range.
void validate(const PipelineConfig& config);

enum class StopReason {
  Success,
  ReviewerDisabled,
  IterationCap,
  TokenBudget,
  ParseFailure,
  LlmFailure,
  RetrievalFailure,
  ExecutionFailure,
};

std::string_view to_string(StopReason reason) noexcept;
StopReason stop_reason_from_string(std::string_view name);

struct TranscriptEntry {
  std::string kind;    // llm | retrieval | execution | review | error
  std::string role;    // Architect | InputWriter | Runner | Reviewer
  std::string action;
  int iteration = 0;
  std::string prompt_digest;
  std::string reply_digest;
  llm::UsageRecord usage;
  std::vector<std::string> context_ids;
  nlohmann::json detail = nlohmann::json::object();
  // Kept in memory for inspection; persisted only on request.
  std::string prompt;
  std::string reply;
};

struct RunState {
  agents::CaseArchitecture architecture;
  workspace::CaseWorkspace workspace;
  std::optional<executor::ExecutionReport> last_report;
  int iteration = 0;
};

struct RunOutcome {
  std::string requirement;
  executor::Executability executability;
  int iterations = 0;
  llm::UsageLedger ledger;
  workspace::CodeStats code_stats;
  double wall_time = 0.0;
  std::vector<TranscriptEntry> transcript;
  StopReason stop_reason = StopReason::Success;
  std::optional<std::string> error;
  agents::CaseArchitecture architecture;
  std::filesystem::path workspace_root;

  bool passed(int threshold = 3) const { return executability.score >= threshold; }
};

struct BudgetVerdict {
  bool stop = false;
  StopReason reason = StopReason::Success;
};

BudgetVerdict budget_check(const RunState& state, const llm::UsageLedger& ledger,
                           const PipelineConfig& config);

struct PipelineBackends {
  llm::LlmBackend* llm = nullptr;
  executor::ExecutionBackend* exec = nullptr;
  const rag::Database* db = nullptr;
  const rag::Embedder* embedder = nullptr;
};

/// Asked once after the loop ends at level >= 3; returning a value sets the
/// human override of the level-4 decision.
using ConfirmFn = std::function<std::optional<bool>(const std::string& requirement,
                                                    const RunOutcome& outcome)>;

/// Retrieve, architect, write, run, review until the case reaches endTime,
/// the iteration cap or the token budget. Failures of the backends end the
/// run with a StopReason instead of throwing; only invalid arguments throw.
RunOutcome run_pipeline(const std::string& requirement,
                        const std::vector<executor::RequirementCheck>& checks,
                        const PipelineConfig& config, const PipelineBackends& backends,
                        const ConfirmFn& confirm = {});

}  // namespace foamagent::orchestrator
