#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "workspace/workspace.hpp"

namespace foamagent::executor {

enum class StepRole { Mesh, Solver, Utility };

std::string_view to_string(StepRole role) noexcept;

/// Role of an Allrun program given the case application.
StepRole classify_program(std::string_view program, std::string_view application);

struct StepResult {
  std::string command;
  std::string application;  // program with $application resolved
  StepRole role = StepRole::Utility;
  int exit_code = 0;
  std::string stdout_tail;
  std::string stderr_tail;
  std::optional<std::filesystem::path> log_path;
  double seconds = 0.0;
};

struct ExecutionReport {
  std::vector<StepResult> steps;
  std::vector<std::string> skipped;  // commands never reached
  double wall_time = 0.0;
  std::optional<std::string> failed_command;
  std::optional<std::string> error_excerpt;
  std::optional<double> end_time;  // controlDict endTime, when readable
  bool timed_out = false;

  const StepResult* failed_step() const;
};

inline constexpr std::size_t kTailLines = 200;
inline constexpr int kTimeoutExitCode = 124;

class ExecutionBackend {
 public:
  virtual ~ExecutionBackend() = default;
  /// Runs a materialized workspace's Allrun.
  virtual ExecutionReport run(const workspace::CaseWorkspace& workspace,
                              std::chrono::seconds timeout) = 0;
};

/// Throws MissingAllrun when the workspace has no Allrun script.
ExecutionReport execute_allrun(const workspace::CaseWorkspace& workspace, ExecutionBackend& backend,
                               std::chrono::seconds timeout);

/// Case application and endTime from system/controlDict.
std::string case_application(const workspace::CaseWorkspace& workspace);
std::optional<double> case_end_time(const workspace::CaseWorkspace& workspace);

struct SignalRules {
  std::vector<std::string> divergence_patterns = {
      "Floating point exception", "FOAM FATAL",
      R"((Initial|Final) residual = (nan|-?inf|[0-9.]+e\+0*([1-9][0-9]+)))"};
};

struct LogSignals {
  bool mesh_ok = false;
  bool solver_started = false;
  bool diverged = false;
  bool end_time_reached = false;

  bool operator==(const LogSignals&) const = default;
};

LogSignals scan_log_signals(const ExecutionReport& report, const SignalRules& rules = {});

struct RequirementCheck {
  std::string id;
  std::string file;  // path relative to the case root, e.g. "system/controlDict"
  std::optional<std::string> contains;
  std::optional<std::string> regex;
};

struct CheckResult {
  std::string id;
  bool passed = false;

  bool operator==(const CheckResult&) const = default;
};

std::vector<CheckResult> evaluate_checks(const workspace::CaseWorkspace& workspace,
                                         const std::vector<RequirementCheck>& checks);

struct Executability {
  int score = 0;
  std::string rationale;
  std::vector<CheckResult> requirement_checks;
};

/// 0 mesh failed; 1 solver never advanced; 2 diverged or stopped early;
/// 3 reached endTime; 4 reached endTime and every requirement check passed.
/// An empty check list needs human_override == true for level 4, and
/// human_override == false caps the score at 3.
Executability classify_executability(const LogSignals& signals,
                                     const std::vector<CheckResult>& checks,
                                     std::optional<bool> human_override = std::nullopt);

}  // namespace foamagent::executor
