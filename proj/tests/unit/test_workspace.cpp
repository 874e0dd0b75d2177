#include <doctest.h>

#include "common/error.hpp"
#include "common/text.hpp"
#include "support.hpp"
#include "workspace/workspace.hpp"

using namespace foamagent;
using namespace foamagent::workspace;

namespace {

const std::string kControlDict =
    "FoamFile\n{\n    version     2.0;\n    format      ascii;\n    class       dictionary;\n"
    "    object      controlDict;\n}\n\napplication     icoFoam;\nendTime         0.5;\n"
    "deltaT          0.005;\n";

const std::string kAllrun =
    "#!/bin/sh\n"
    "cd ${0%/*} || exit 1 # Run from this directory\n"
    "# Source tutorial run functions\n"
    ". $WM_PROJECT_DIR/bin/tools/RunFunctions\n"
    "application=\"$(getApplication)\"\n"
    "runApplication blockMesh -dict \\\n"
    "    system/blockMeshDict\n"
    "cp 0/U.orig 0/U # restore\n"
    "runApplication $application\n";

}  // namespace

TEST_CASE("materialize and read back a case") {
  testing::TempDir tmp;
  CaseWorkspace ws;
  ws.root = tmp / "case";
  ws.files = {{"controlDict", "system", kControlDict}, {"U", "0", "FoamFile{class volVectorField; object U;}\n"}};
  ws.allrun = kAllrun;
  const auto written = materialize_case(ws);
  REQUIRE(written.size() == 3);
  CHECK(written.back() == ws.root / "Allrun");
  const auto perms = std::filesystem::status(ws.root / "Allrun").permissions();
  CHECK((perms & std::filesystem::perms::owner_exec) != std::filesystem::perms::none);

  const auto back = read_case_tree(ws.root);
  CHECK(back.allrun == ws.allrun);
  REQUIRE(back.files.size() == 2);
  CHECK(*back.find("controlDict", "system") == ws.files[0]);
  CHECK(back.find("U", "0")->content == ws.files[1].content);

  CaseWorkspace dup = ws;
  dup.files.push_back(ws.files[0]);
  CHECK_THROWS_AS(materialize_case(dup), Error);
  try {
    materialize_case(dup);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateFile);
  }
  CaseWorkspace bad = ws;
  bad.files = {{"../escape", "0", "x"}};
  try {
    materialize_case(bad);
    FAIL("expected InvalidFoamFile");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidFoamFile);
  }
  bad.files = {{"U", "0", ""}};
  CHECK_THROWS_AS(materialize_case(bad), Error);
}

TEST_CASE("upsert replaces in place") {
  CaseWorkspace ws;
  ws.upsert({"U", "0", "a"});
  ws.upsert({"p", "0", "b"});
  ws.upsert({"U", "0", "c"});
  REQUIRE(ws.files.size() == 2);
  CHECK(ws.files[0].content == "c");
  CHECK(ws.find("U", "system") == nullptr);
}

TEST_CASE("foamfile header validation") {
  CHECK(validate_foamfile_header(kControlDict).empty());
  CHECK(validate_foamfile_header("application icoFoam;") == std::vector<std::string>{"missing FoamFile header"});
  CHECK(validate_foamfile_header("FoamFile\n{\n    class dictionary;\n}\n") ==
        std::vector<std::string>{"missing object"});
  CHECK(validate_foamfile_header("FoamFile { object p; ") == std::vector<std::string>{"unterminated FoamFile header"});
}

TEST_CASE("allrun steps and validation") {
  const auto steps = allrun_steps(kAllrun);
  REQUIRE(steps.size() == 3);
  CHECK(steps[0].program == "blockMesh");
  CHECK(steps[0].run_helper);
  CHECK(steps[0].line == 6);
  CHECK(steps[0].command == "runApplication blockMesh -dict system/blockMeshDict");
  CHECK(steps[1].program == "cp");
  CHECK(steps[1].command == "cp 0/U.orig 0/U");
  CHECK_FALSE(steps[1].run_helper);
  CHECK(steps[2].program == "$application");

  const auto cmds = parse_whitelist("cp # copy\n\nmv\n");
  CHECK(cmds == NameSet{"cp", "mv"});
  const NameSet runs = {"blockMesh", "$application"};
  CHECK(validate_allrun_script(kAllrun, cmds, runs).empty());
  const auto v = validate_allrun_script(kAllrun + "rm -rf /\n", cmds, runs);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("line 10") != std::string::npos);
  CHECK(validate_allrun_script("#!/bin/sh\ncp a b\n", cmds, runs) ==
        std::vector<std::string>{"no application invocation"});
  CHECK(validate_allrun_script(kAllrun, default_command_whitelist(), default_run_whitelist()).empty());
  CHECK(validate_allrun_script("runParallel -np 4 icoFoam\n", {}, {"icoFoam"}).empty());
}

TEST_CASE("dictionary entries and code stats") {
  CHECK(dictionary_entry(kControlDict, "application") == "icoFoam");
  CHECK(dictionary_entry(kControlDict, "endTime") == "0.5");
  CHECK(dictionary_entry(kControlDict, "end") == std::nullopt);
  CHECK(dictionary_entry("name \"quoted\";", "name") == "quoted");

  CaseWorkspace ws;
  ws.files = {{"a", "0", "1\n2\n3\n"}, {"b", "0", "1\n2"}};
  ws.allrun = "x\ny\nz\n";
  const auto stats = collect_code_stats(ws);
  CHECK(stats == CodeStats{2, 2.5, 5});
  CHECK(collect_code_stats(CaseWorkspace{}) == CodeStats{});
}
