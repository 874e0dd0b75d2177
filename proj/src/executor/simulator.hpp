#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "executor/report.hpp"

namespace foamagent::executor {

struct FileCondition {
  std::string file;  // relative to the case root
  std::optional<std::string> contains;
  std::optional<bool> exists;
  bool absent = false;  // negate `contains`
};

struct Advance {
  bool started = true;
  bool reaches_end_time = true;
  bool diverges = false;
};

struct ScenarioRule {
  std::string pattern;  // substring of the command, or a regex when `regex`
  bool regex = false;
  std::vector<FileCondition> when;
  std::optional<int> max_hits;
  int exit_code = 0;
  std::string stdout_text;
  std::string stderr_text;
  std::optional<Advance> advance;
  double seconds = 0.1;
};

struct SimulatorScenario {
  std::vector<ScenarioRule> rules;
};

SimulatorScenario parse_scenario(const nlohmann::json& doc);
SimulatorScenario load_scenario(const std::filesystem::path& path);

/// Scripted stand-in for OpenFOAM: every Allrun step is answered by the first
/// matching rule. Solver steps get a synthetic log ("Time = ..." lines, "End")
/// shaped by the rule's `advance`. Wall time is virtual. Hit counters make
/// one backend instance belong to one run.
class SimulatorBackend final : public ExecutionBackend {
 public:
  explicit SimulatorBackend(SimulatorScenario scenario);

  ExecutionReport run(const workspace::CaseWorkspace& workspace,
                      std::chrono::seconds timeout) override;

 private:
  const ScenarioRule& match(const std::string& command, const workspace::CaseWorkspace& ws);

  SimulatorScenario scenario_;
  std::vector<int> hits_;
};

}  // namespace foamagent::executor
