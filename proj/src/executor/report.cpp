#include "executor/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <regex>
#include <set>

#include "common/error.hpp"
#include "common/text.hpp"

namespace foamagent::executor {

namespace {

const std::set<std::string, std::less<>> kMeshPrograms = {
    "blockMesh",   "snappyHexMesh", "extrudeMesh",  "extrude2DMesh",   "fluentMeshToFoam",
    "gmshToFoam",  "createPatch",   "createBaffles", "mirrorMesh",     "refineMesh",
    "mergeMeshes", "splitMeshRegions", "transformPoints", "surfaceFeatures",
    "surfaceFeatureExtract"};

std::optional<double> parse_double(std::string_view s) {
  const std::string str(text::trim(s));
  if (str.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(str.c_str(), &end);
  if (end == str.c_str() || *end != '\0') return std::nullopt;
  return v;
}

}  // namespace

std::string_view to_string(StepRole role) noexcept {
  switch (role) {
    case StepRole::Mesh: return "mesh";
    case StepRole::Solver: return "solver";
    case StepRole::Utility: return "utility";
  }
  return "utility";
}

StepRole classify_program(std::string_view program, std::string_view application) {
  if (kMeshPrograms.contains(program)) return StepRole::Mesh;
  if (program == "$application" || program == "${application}" ||
      (!application.empty() && program == application)) {
    return StepRole::Solver;
  }
  if (program.ends_with("Foam") && program != "potentialFoam") return StepRole::Solver;
  return StepRole::Utility;
}

const StepResult* ExecutionReport::failed_step() const {
  for (const auto& s : steps) {
    if (s.exit_code != 0) return &s;
  }
  return nullptr;
}

std::string case_application(const workspace::CaseWorkspace& ws) {
  if (const auto* cd = ws.find("controlDict", "system")) {
    if (auto app = workspace::dictionary_entry(cd->content, "application")) return *app;
  }
  return {};
}

std::optional<double> case_end_time(const workspace::CaseWorkspace& ws) {
  if (const auto* cd = ws.find("controlDict", "system")) {
    if (auto v = workspace::dictionary_entry(cd->content, "endTime")) return parse_double(*v);
  }
  return std::nullopt;
}

ExecutionReport execute_allrun(const workspace::CaseWorkspace& ws, ExecutionBackend& backend,
                               std::chrono::seconds timeout) {
  if (!ws.allrun && !std::filesystem::is_regular_file(ws.root / "Allrun")) {
    throw Error(ErrorCode::MissingAllrun, "workspace " + ws.root.string() + " has no Allrun",
                ws.root.string());
  }
  auto report = backend.run(ws, timeout);
  if (!report.end_time) report.end_time = case_end_time(ws);
  if (const auto* failed = report.failed_step()) {
    report.failed_command = failed->command;
    if (!report.error_excerpt) {
      report.error_excerpt = failed->stderr_tail.empty() ? failed->stdout_tail : failed->stderr_tail;
    }
  }
  return report;
}

LogSignals scan_log_signals(const ExecutionReport& report, const SignalRules& rules) {
  LogSignals s;
  bool mesh_seen_failure = false;
  for (const auto& step : report.steps) {
    if (step.role == StepRole::Mesh && step.exit_code != 0) mesh_seen_failure = true;
  }
  // A failure ahead of the mesh step means the mesh was never generated.
  bool mesh_skipped = false;
  for (const auto& cmd : report.skipped) {
    const auto w = workspace::allrun_steps(cmd);
    if (!w.empty() && classify_program(w.front().program, "") == StepRole::Mesh) mesh_skipped = true;
  }
  s.mesh_ok = !report.steps.empty() && !mesh_seen_failure && !mesh_skipped;
  if (!s.mesh_ok) return s;

  const StepResult* solver = nullptr;
  for (const auto& step : report.steps) {
    if (step.role == StepRole::Solver) solver = &step;
  }
  if (!solver) return s;

  const std::string log = solver->stdout_tail + "\n" + solver->stderr_tail;
  static const std::regex time_re(R"((^|\n)Time = ([^\n]+))");
  std::smatch m;
  if (!std::regex_search(log, m, time_re)) return s;
  s.solver_started = true;

  const auto after_start = log.substr(static_cast<std::size_t>(m.position(0)));
  for (const auto& p : rules.divergence_patterns) {
    if (std::regex_search(after_start, std::regex(p, std::regex::icase))) s.diverged = true;
  }
  if (solver->exit_code != 0) s.diverged = true;
  if (s.diverged) return s;

  std::string last_time;
  for (auto it = std::sregex_iterator(log.begin(), log.end(), time_re); it != std::sregex_iterator(); ++it) {
    last_time = (*it)[2].str();
  }
  std::string last_line;
  for (const auto line : text::split_lines(solver->stdout_tail)) {
    if (!text::trim(line).empty()) last_line = std::string(text::trim(line));
  }
  bool reached = last_line == "End";
  if (!reached && report.end_time) {
    if (const auto t = parse_double(last_time)) {
      reached = std::abs(*t - *report.end_time) <= 1e-9 * std::max(1.0, std::abs(*report.end_time));
    }
  }
  s.end_time_reached = reached;
  return s;
}

std::vector<CheckResult> evaluate_checks(const workspace::CaseWorkspace& ws,
                                         const std::vector<RequirementCheck>& checks) {
  std::vector<CheckResult> out;
  for (const auto& c : checks) {
    const auto slash = c.file.rfind('/');
    const auto folder = slash == std::string::npos ? std::string() : c.file.substr(0, slash);
    const auto name = slash == std::string::npos ? c.file : c.file.substr(slash + 1);
    const workspace::FoamFile* f = ws.find(name, folder);
    std::optional<std::string> content;
    if (f) {
      content = f->content;
    } else if (c.file == "Allrun" && ws.allrun) {
      content = ws.allrun;
    }
    bool passed = content.has_value();
    if (passed && c.contains) passed = content->find(*c.contains) != std::string::npos;
    if (passed && c.regex) passed = std::regex_search(*content, std::regex(*c.regex));
    out.push_back({c.id, passed});
  }
  return out;
}

Executability classify_executability(const LogSignals& signals,
                                     const std::vector<CheckResult>& checks,
                                     std::optional<bool> human_override) {
  Executability e;
  e.requirement_checks = checks;
  if (!signals.mesh_ok) {
    e.score = 0;
    e.rationale = "mesh generation failed";
  } else if (!signals.solver_started) {
    e.score = 1;
    e.rationale = "mesh generated but the solver did not advance a time step";
  } else if (signals.diverged || !signals.end_time_reached) {
    e.score = 2;
    e.rationale = signals.diverged ? "solver started but diverged" : "solver stopped before endTime";
  } else {
    const bool all_pass = std::all_of(checks.begin(), checks.end(),
                                      [](const CheckResult& c) { return c.passed; });
    if (human_override == false) {
      e.score = 3;
      e.rationale = "reached endTime; requirement rejected on confirmation";
    } else if (!all_pass) {
      e.score = 3;
      e.rationale = "reached endTime; requirement check failed";
    } else if (checks.empty() && human_override != true) {
      e.score = 3;
      e.rationale = "reached endTime; no requirement checks to confirm level 4";
    } else {
      e.score = 4;
      e.rationale = checks.empty() ? "reached endTime; requirement confirmed"
                                   : "reached endTime; all requirement checks passed";
    }
  }
  return e;
}

}  // namespace foamagent::executor
