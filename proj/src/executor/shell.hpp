#pragma once

#include <map>
#include <string>

#include "executor/report.hpp"

namespace foamagent::executor {

struct ShellOptions {
  /// Fail with BackendUnavailable unless WM_PROJECT_DIR is set.
  bool require_openfoam_env = true;
  std::map<std::string, std::string> env;
  std::string shell = "/bin/sh";
};

/// Runs `sh ./Allrun` in the case root. Step outcomes come from the log.<app>
/// files that runApplication writes; the whole script is killed on timeout.
class ShellBackend final : public ExecutionBackend {
 public:
  explicit ShellBackend(ShellOptions options = {});

  ExecutionReport run(const workspace::CaseWorkspace& workspace,
                      std::chrono::seconds timeout) override;

 private:
  ShellOptions options_;
};

}  // namespace foamagent::executor
