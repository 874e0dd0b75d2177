#include "executor/simulator.hpp"

#include <algorithm>
#include <regex>
#include <sstream>

#include "common/error.hpp"
#include "common/text.hpp"

using nlohmann::json;

namespace foamagent::executor {

namespace {

bool condition_holds(const FileCondition& c, const workspace::CaseWorkspace& ws) {
  const auto slash = c.file.rfind('/');
  const auto folder = slash == std::string::npos ? std::string() : c.file.substr(0, slash);
  const auto name = slash == std::string::npos ? c.file : c.file.substr(slash + 1);
  const workspace::FoamFile* f = ws.find(name, folder);
  std::optional<std::string> content;
  if (f) content = f->content;
  if (!f && c.file == "Allrun" && ws.allrun) content = ws.allrun;
  if (c.exists && content.has_value() != *c.exists) return false;
  if (c.contains) {
    const bool has = content && content->find(*c.contains) != std::string::npos;
    if (has == c.absent) return false;
  }
  return true;
}

std::string format_time(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

std::string solver_log(const ScenarioRule& rule, const Advance& adv, std::optional<double> end_time) {
  std::string log = rule.stdout_text;
  if (!log.empty() && log.back() != '\n') log += '\n';
  if (!adv.started) return log;
  const double end = end_time.value_or(1.0);
  log += "Starting time loop\n\n";
  log += "Time = " + format_time(end / 10.0) + "\n\n";
  if (adv.diverges) return log;
  if (adv.reaches_end_time) {
    log += "Time = " + format_time(end) + "\n\nEnd\n";
  }
  return log;
}

}  // namespace

SimulatorScenario parse_scenario(const json& doc) {
  SimulatorScenario s;
  const json& rules = doc.is_object() ? doc.at("rules") : doc;
  for (const auto& r : rules) {
    ScenarioRule rule;
    rule.pattern = r.value("pattern", std::string());
    rule.regex = r.value("regex", false);
    if (r.contains("when")) {
      for (const auto& w : r["when"]) {
        FileCondition c;
        c.file = w.at("file").get<std::string>();
        if (w.contains("contains")) c.contains = w["contains"].get<std::string>();
        if (w.contains("exists")) c.exists = w["exists"].get<bool>();
        c.absent = w.value("absent", false);
        rule.when.push_back(std::move(c));
      }
    }
    if (r.contains("max_hits")) rule.max_hits = r["max_hits"].get<int>();
    rule.exit_code = r.value("exit_code", 0);
    rule.stdout_text = r.value("stdout", std::string());
    rule.stderr_text = r.value("stderr", std::string());
    if (r.contains("advance")) {
      const auto& a = r["advance"];
      rule.advance = Advance{a.value("started", true), a.value("reaches_end_time", true),
                             a.value("diverges", false)};
    }
    rule.seconds = r.value("seconds", 0.1);
    s.rules.push_back(std::move(rule));
  }
  return s;
}

SimulatorScenario load_scenario(const std::filesystem::path& path) {
  try {
    return parse_scenario(json::parse(text::read_file(path)));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what(), path.string());
  }
}

SimulatorBackend::SimulatorBackend(SimulatorScenario scenario)
    : scenario_(std::move(scenario)), hits_(scenario_.rules.size(), 0) {}

const ScenarioRule& SimulatorBackend::match(const std::string& command,
                                            const workspace::CaseWorkspace& ws) {
  for (std::size_t i = 0; i < scenario_.rules.size(); ++i) {
    const auto& rule = scenario_.rules[i];
    if (rule.max_hits && hits_[i] >= *rule.max_hits) continue;
    const bool matched = rule.regex ? std::regex_search(command, std::regex(rule.pattern))
                                    : command.find(rule.pattern) != std::string::npos;
    if (!matched) continue;
    bool ok = true;
    for (const auto& c : rule.when) ok = ok && condition_holds(c, ws);
    if (!ok) continue;
    ++hits_[i];
    return rule;
  }
  throw Error(ErrorCode::ScenarioError, "no scenario rule matches '" + command + "'", command);
}

ExecutionReport SimulatorBackend::run(const workspace::CaseWorkspace& ws, std::chrono::seconds timeout) {
  ExecutionReport report;
  const auto script = ws.allrun ? *ws.allrun : text::read_file(ws.root / "Allrun");
  const auto application = case_application(ws);
  report.end_time = case_end_time(ws);
  const auto steps = workspace::allrun_steps(script);
  bool stopped = false;
  for (const auto& step : steps) {
    if (stopped) {
      report.skipped.push_back(step.command);
      continue;
    }
    StepResult r;
    r.command = step.command;
    r.application = (step.program == "$application" || step.program == "${application}")
                        ? application
                        : step.program;
    r.role = classify_program(step.program, application);
    std::string resolved = step.command;
    for (const std::string var : {"${application}", "$application"}) {
      for (auto p = resolved.find(var); p != std::string::npos; p = resolved.find(var)) {
        resolved.replace(p, var.size(), application);
      }
    }
    const auto& rule = match(resolved, ws);
    r.exit_code = rule.exit_code;
    r.seconds = rule.seconds;
    std::string out = rule.stdout_text;
    if (r.role == StepRole::Solver) {
      Advance adv = rule.advance.value_or(
          Advance{rule.exit_code == 0, rule.exit_code == 0, false});
      out = solver_log(rule, adv, report.end_time);
    }
    std::string err = rule.stderr_text;
    if (report.wall_time + r.seconds > static_cast<double>(timeout.count())) {
      r.exit_code = kTimeoutExitCode;
      r.seconds = std::max(0.0, static_cast<double>(timeout.count()) - report.wall_time);
      report.timed_out = true;
      err = "timed out after " + std::to_string(timeout.count()) + " s\n";
    }
    r.stdout_tail = text::tail_lines(out, kTailLines);
    r.stderr_tail = text::tail_lines(err, kTailLines);
    if (step.run_helper && std::filesystem::is_directory(ws.root)) {
      const auto log = ws.root / ("log." + r.application);
      text::write_file(log, out + err);
      r.log_path = log;
    }
    report.wall_time += r.seconds;
    if (r.exit_code != 0) stopped = true;
    report.steps.push_back(std::move(r));
  }
  return report;
}

}  // namespace foamagent::executor
