#include <doctest.h>

#include <json.hpp>

#include "common/error.hpp"
#include "common/text.hpp"
#include "executor/report.hpp"
#include "executor/shell.hpp"
#include "executor/simulator.hpp"
#include "support.hpp"

using namespace foamagent;
using namespace foamagent::executor;
using foamagent::workspace::CaseWorkspace;
using nlohmann::json;

namespace {

const std::string kAllrun =
    "#!/bin/sh\n"
    "cd ${0%/*} || exit 1\n"
    ". $WM_PROJECT_DIR/bin/tools/RunFunctions\n"
    "application=$(getApplication)\n"
    "runApplication blockMesh\n"
    "runApplication $application\n";

CaseWorkspace make_case(const std::filesystem::path& root) {
  CaseWorkspace ws;
  ws.root = root;
  ws.files = {{"controlDict", "system",
               "FoamFile { class dictionary; object controlDict; }\napplication icoFoam;\nendTime 0.5;\n"},
              {"blockMeshDict", "system", "FoamFile { class dictionary; object blockMeshDict; }\n"}};
  ws.allrun = kAllrun;
  return ws;
}

StepResult step(StepRole role, int exit_code, std::string out = {}, std::string err = {}) {
  StepResult s;
  s.role = role;
  s.exit_code = exit_code;
  s.stdout_tail = std::move(out);
  s.stderr_tail = std::move(err);
  return s;
}

}  // namespace

TEST_CASE("executability rubric over every signal combination") {
  const std::vector<CheckResult> none;
  const std::vector<CheckResult> pass = {{"a", true}, {"b", true}};
  const std::vector<CheckResult> fail = {{"a", true}, {"b", false}};
  const std::vector<std::optional<bool>> overrides = {std::nullopt, true, false};

  int combos = 0;
  for (int bits = 0; bits < 16; ++bits) {
    const LogSignals s{(bits & 1) != 0, (bits & 2) != 0, (bits & 4) != 0, (bits & 8) != 0};
    for (const auto* checks : {&none, &pass, &fail}) {
      for (const auto& ov : overrides) {
        ++combos;
        int expected;
        if (!s.mesh_ok) {
          expected = 0;
        } else if (!s.solver_started) {
          expected = 1;
        } else if (s.diverged || !s.end_time_reached) {
          expected = 2;
        } else if (ov == false || checks == &fail) {
          expected = 3;
        } else if (checks == &none) {
          expected = ov == true ? 4 : 3;
        } else {
          expected = 4;
        }
        const auto e = classify_executability(s, *checks, ov);
        CAPTURE(bits);
        CAPTURE(combos);
        CHECK(e.score == expected);
        CHECK_FALSE(e.rationale.empty());
        CHECK(e.requirement_checks == *checks);
      }
    }
  }
  CHECK(combos == 144);
}

TEST_CASE("log signal scan") {
  ExecutionReport r;
  CHECK(scan_log_signals(r) == LogSignals{});

  r.steps = {step(StepRole::Mesh, 1, "", "FOAM FATAL IO ERROR")};
  CHECK(scan_log_signals(r) == LogSignals{false, false, false, false});

  r.steps = {step(StepRole::Utility, 1)};
  r.skipped = {"runApplication blockMesh", "runApplication icoFoam"};
  CHECK_FALSE(scan_log_signals(r).mesh_ok);

  r.skipped.clear();
  r.steps = {step(StepRole::Mesh, 0, "End\n"), step(StepRole::Solver, 1, "Create mesh\n", "FOAM FATAL ERROR")};
  CHECK(scan_log_signals(r) == LogSignals{true, false, false, false});

  r.steps[1] = step(StepRole::Solver, 0, "Time = 0.1\n\nTime = 0.5\n\nEnd\n");
  CHECK(scan_log_signals(r) == LogSignals{true, true, false, true});

  r.end_time = 0.5;
  r.steps[1] = step(StepRole::Solver, 0, "Time = 0.1\n\nTime = 0.5\n");
  CHECK(scan_log_signals(r).end_time_reached);
  r.steps[1] = step(StepRole::Solver, 0, "Time = 0.1\n\nTime = 0.2\n");
  CHECK(scan_log_signals(r) == LogSignals{true, true, false, false});

  r.steps[1] = step(StepRole::Solver, 136, "Time = 0.1\n", "Floating point exception (core dumped)");
  CHECK(scan_log_signals(r) == LogSignals{true, true, true, false});
  r.steps[1] = step(StepRole::Solver, 0, "Time = 0.1\nSolving for Ux, Initial residual = nan\n");
  CHECK(scan_log_signals(r).diverged);
  r.steps[1] = step(StepRole::Solver, 0, "Time = 0.1\nSolving for Ux, Initial residual = 2.5e+12\n");
  CHECK(scan_log_signals(r).diverged);
  r.steps[1] = step(StepRole::Solver, 0, "Time = 0.1\nSolving for Ux, Initial residual = 2.5e-12\nEnd\n");
  CHECK_FALSE(scan_log_signals(r).diverged);
}

TEST_CASE("requirement checks") {
  testing::TempDir tmp;
  auto ws = make_case(tmp.path());
  const std::vector<RequirementCheck> checks = {
      {"app", "system/controlDict", "icoFoam", std::nullopt},
      {"end", "system/controlDict", std::nullopt, R"(\bendTime\s+0\.5\s*;)"},
      {"missing", "0/U", std::nullopt, std::nullopt},
      {"allrun", "Allrun", "blockMesh", std::nullopt},
      {"wrong", "system/controlDict", "pisoFoam", std::nullopt}};
  const auto r = evaluate_checks(ws, checks);
  CHECK(r == std::vector<CheckResult>{{"app", true}, {"end", true}, {"missing", false},
                                      {"allrun", true}, {"wrong", false}});
  CHECK(case_application(ws) == "icoFoam");
  CHECK(case_end_time(ws) == 0.5);
}

TEST_CASE("simulator follows its first matching rule") {
  testing::TempDir tmp;
  auto ws = make_case(tmp / "case");
  workspace::materialize_case(ws);
  const auto scenario = parse_scenario(json::parse(R"({"rules": [
    {"pattern": "blockMesh", "when": [{"file": "system/blockMeshDict", "contains": "vertices", "absent": true}],
     "exit_code": 1, "stderr": "FOAM FATAL IO ERROR: keyword vertices is undefined"},
    {"pattern": "blockMesh", "stdout": "End"},
    {"pattern": "icoFoam", "max_hits": 1, "exit_code": 1, "stderr": "Floating point exception",
     "advance": {"started": true, "diverges": true}},
    {"pattern": "icoFoam"}
  ]})"));
  SimulatorBackend sim(scenario);

  auto r1 = execute_allrun(ws, sim, std::chrono::seconds(60));
  REQUIRE(r1.steps.size() == 1);
  CHECK(r1.skipped.size() == 1);
  CHECK(r1.failed_command == "runApplication blockMesh");
  CHECK(r1.error_excerpt->find("vertices") != std::string::npos);
  CHECK(scan_log_signals(r1).mesh_ok == false);
  CHECK(text::read_file(ws.root / "log.blockMesh").find("vertices") != std::string::npos);

  ws.files[1].content += "vertices ();\n";
  auto r2 = execute_allrun(ws, sim, std::chrono::seconds(60));
  REQUIRE(r2.steps.size() == 2);
  CHECK(r2.steps[1].application == "icoFoam");
  CHECK(r2.steps[1].role == StepRole::Solver);
  CHECK(scan_log_signals(r2) == LogSignals{true, true, true, false});

  auto r3 = execute_allrun(ws, sim, std::chrono::seconds(60));
  CHECK(r3.failed_step() == nullptr);
  CHECK(r3.steps[1].stdout_tail.find("Time = 0.5") != std::string::npos);
  CHECK(scan_log_signals(r3) == LogSignals{true, true, false, true});
  CHECK(r3.wall_time == doctest::Approx(0.2));

  auto r4 = execute_allrun(ws, sim, std::chrono::seconds(0));
  CHECK(r4.timed_out);
  CHECK(r4.steps.front().exit_code == kTimeoutExitCode);

  SimulatorBackend empty(SimulatorScenario{});
  try {
    execute_allrun(ws, empty, std::chrono::seconds(60));
    FAIL("expected ScenarioError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ScenarioError);
  }
  CaseWorkspace bare;
  bare.root = tmp / "bare";
  std::filesystem::create_directories(bare.root);
  try {
    execute_allrun(bare, sim, std::chrono::seconds(60));
    FAIL("expected MissingAllrun");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingAllrun);
  }
}

TEST_CASE("shell backend runs a fake OpenFOAM installation") {
  testing::TempDir tmp;
  const auto foam = tmp / "foam";
  const auto bin = tmp / "bin";
  text::write_file(foam / "bin/tools/RunFunctions",
                   "getApplication() { sed -n 's/^application *\\([^;]*\\);.*/\\1/p' system/controlDict; }\n"
                   "runApplication() { app=\"$1\"; shift; \"$app\" \"$@\" > log.$app 2>&1; }\n");
  text::write_file(bin / "blockMesh", "#!/bin/sh\necho 'Writing polyMesh'\necho End\n");
  text::write_file(bin / "icoFoam", "#!/bin/sh\nprintf 'Time = 0.25\\n\\nTime = 0.5\\n\\nEnd\\n'\n");
  text::write_file(bin / "badFoam", "#!/bin/sh\necho 'Time = 0.1'\necho 'Floating point exception'\nexit 136\n");
  for (const char* name : {"blockMesh", "icoFoam", "badFoam"}) {
    std::filesystem::permissions(bin / name, std::filesystem::perms::owner_all);
  }
  ShellOptions opts;
  opts.env = {{"WM_PROJECT_DIR", foam.string()}, {"PATH", bin.string() + ":/usr/bin:/bin"}};

  auto ws = make_case(tmp / "case");
  workspace::materialize_case(ws);
  ShellBackend shell(opts);
  const auto ok = execute_allrun(ws, shell, std::chrono::seconds(30));
  REQUIRE(ok.steps.size() == 2);
  CHECK(ok.failed_step() == nullptr);
  CHECK(ok.steps[1].log_path == ws.root / "log.icoFoam");
  CHECK(scan_log_signals(ok) == LogSignals{true, true, false, true});
  CHECK(classify_executability(scan_log_signals(ok), {}).score == 3);

  ws.files[0].content = "FoamFile { class dictionary; object controlDict; }\napplication badFoam;\nendTime 0.5;\n";
  workspace::materialize_case(ws);
  const auto bad = execute_allrun(ws, shell, std::chrono::seconds(30));
  REQUIRE(bad.failed_step() != nullptr);
  CHECK(bad.failed_step()->application == "badFoam");
  CHECK(scan_log_signals(bad).diverged);

  ws.allrun = "#!/bin/sh\nsleep 5\n";
  workspace::materialize_case(ws);
  const auto slow = execute_allrun(ws, shell, std::chrono::seconds(1));
  CHECK(slow.timed_out);
  CHECK(slow.steps.back().exit_code == kTimeoutExitCode);
  CHECK(slow.wall_time < 4.0);

  ShellBackend strict(ShellOptions{true, {}, "/bin/sh"});
  if (std::getenv("WM_PROJECT_DIR") == nullptr) {
    try {
      strict.run(ws, std::chrono::seconds(1));
      FAIL("expected BackendUnavailable");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BackendUnavailable);
    }
  }
}
