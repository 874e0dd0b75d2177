#include "executor/shell.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <thread>

#include "common/error.hpp"
#include "common/text.hpp"

namespace fs = std::filesystem;

namespace foamagent::executor {

namespace {

struct ScriptResult {
  int exit_code = 0;
  bool timed_out = false;
  double seconds = 0.0;
};

ScriptResult run_script(const fs::path& root, const ShellOptions& options,
                        std::chrono::seconds timeout, const fs::path& out_path,
                        const fs::path& err_path) {
  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = fork();
  if (pid < 0) throw Error(ErrorCode::IoFailure, "fork failed");
  if (pid == 0) {
    setpgid(0, 0);
    if (chdir(root.c_str()) != 0) _exit(127);
    const int out = open(out_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    const int err = open(err_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (out < 0 || err < 0) _exit(127);
    dup2(out, STDOUT_FILENO);
    dup2(err, STDERR_FILENO);
    for (const auto& [k, v] : options.env) setenv(k.c_str(), v.c_str(), 1);
    execl(options.shell.c_str(), options.shell.c_str(), "./Allrun", static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);

  ScriptResult result;
  int status = 0;
  while (true) {
    const pid_t done = waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (std::chrono::steady_clock::now() - start > timeout) {
      kill(-pid, SIGKILL);
      waitpid(pid, &status, 0);
      result.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (result.timed_out) {
    result.exit_code = kTimeoutExitCode;
  } else if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else {
    result.exit_code = 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
  }
  return result;
}

bool log_reports_failure(const std::string& log) {
  return log.find("FOAM FATAL") != std::string::npos ||
         log.find("FOAM aborting") != std::string::npos ||
         log.find("Floating point exception") != std::string::npos;
}

std::string error_context(const std::string& log) {
  const auto fatal = log.find("FOAM FATAL");
  if (fatal != std::string::npos) return log.substr(fatal);
  return text::tail_lines(log, 40);
}

}  // namespace

ShellBackend::ShellBackend(ShellOptions options) : options_(std::move(options)) {}

ExecutionReport ShellBackend::run(const workspace::CaseWorkspace& ws, std::chrono::seconds timeout) {
  if (options_.require_openfoam_env && !std::getenv("WM_PROJECT_DIR") &&
      !options_.env.contains("WM_PROJECT_DIR")) {
    throw Error(ErrorCode::BackendUnavailable,
                "OpenFOAM environment not sourced (WM_PROJECT_DIR is unset)");
  }
  // runApplication refuses to rerun an application whose log already exists.
  for (const auto& entry : fs::directory_iterator(ws.root)) {
    if (entry.is_regular_file() && entry.path().filename().string().starts_with("log.")) {
      fs::remove(entry.path());
    }
  }
  const auto out_path = ws.root / "log.Allrun";
  const auto err_path = ws.root / "log.Allrun.stderr";
  const auto script = run_script(ws.root, options_, timeout, out_path, err_path);
  const auto script_out = text::read_file(out_path);
  const auto script_err = text::read_file(err_path);

  ExecutionReport report;
  report.wall_time = script.seconds;
  report.timed_out = script.timed_out;
  const auto application = case_application(ws);
  const auto allrun = ws.allrun ? *ws.allrun : text::read_file(ws.root / "Allrun");
  bool stopped = false;
  for (const auto& step : workspace::allrun_steps(allrun)) {
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
    if (step.run_helper) {
      const auto log = ws.root / ("log." + r.application);
      if (fs::is_regular_file(log)) {
        const auto content = text::read_file(log);
        r.log_path = log;
        r.stdout_tail = text::tail_lines(content, kTailLines);
        if (log_reports_failure(content)) {
          r.exit_code = 1;
          r.stderr_tail = text::tail_lines(error_context(content), kTailLines);
        }
      } else {
        // The script ended before reaching this step.
        r.exit_code = script.exit_code != 0 ? script.exit_code : 1;
        r.stderr_tail = text::tail_lines(script_err, kTailLines);
      }
    }
    if (r.exit_code != 0) stopped = true;
    report.steps.push_back(std::move(r));
  }
  if (script.timed_out && !stopped && !report.steps.empty()) {
    report.steps.back().exit_code = kTimeoutExitCode;
    report.steps.back().stderr_tail = "timed out after " + std::to_string(timeout.count()) + " s";
  } else if (!stopped && script.exit_code != 0 && !report.steps.empty()) {
    report.steps.back().exit_code = script.exit_code;
    report.steps.back().stderr_tail = text::tail_lines(script_err + script_out, kTailLines);
  }
  return report;
}

}  // namespace foamagent::executor
