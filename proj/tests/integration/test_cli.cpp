#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "support.hpp"

using nlohmann::json;

namespace {

struct Result {
  int exit_code = -1;
  std::string output;
};

std::string quote(const std::string& s) {
  std::string out = "'";
  for (const char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

Result cli(const std::filesystem::path& cwd, const std::string& args) {
  const std::string cmd = "cd " + quote(cwd.string()) + " && " + quote(FOAMAGENT_CLI_PATH) + " " + args +
                          " </dev/null 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write(const std::filesystem::path& p, const std::string& content) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << content;
}

std::string data(const std::string& rel) { return quote((testing::data_dir() / rel).string()); }

}  // namespace

TEST_CASE("run drives the HIT fixture through mock and simulator") {
  testing::TempDir tmp;
  const auto fixture = json::parse(read(testing::data_dir() / "fixtures/hit/fixture.json"));
  write(tmp / "checks.json", fixture["checks"].dump());
  const auto r = cli(tmp.path(), "run " + quote(fixture["requirement"].get<std::string>()) +
                                     " --checks checks.json --backend mock --exec sim --mock-script " +
                                     data("fixtures/hit/fixture.json") + " --scenario " +
                                     data("fixtures/hit/fixture.json") + " --tutorials " + data("tutorials") +
                                     " --output out --workspace runs --run-id hit");
  CAPTURE(r.output);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("score:       4") != std::string::npos);
  CHECK(r.output.find("iterations:  2") != std::string::npos);
  CHECK(std::filesystem::is_regular_file(tmp / "out/hit.jsonl"));
  CHECK(std::filesystem::is_regular_file(tmp / "runs/HIT-hit/system/blockMeshDict"));
}

TEST_CASE("replay reports matches and field mismatches") {
  testing::TempDir tmp;
  const auto ok = cli(tmp.path(), "replay " + data("fixtures/hit/fixture.json") + " " +
                                      data("fixtures/always_fail/fixture.json") + " --workspace runs");
  CAPTURE(ok.output);
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("MISMATCH") == std::string::npos);

  auto fixture = json::parse(read(testing::data_dir() / "fixtures/hit/fixture.json"));
  fixture["expected"]["iterations"] = 3;
  write(tmp / "corrupt/fixture.json", fixture.dump(2));
  const auto bad = cli(tmp.path(), "replay corrupt/fixture.json --tutorials " + data("tutorials") + " --workspace runs");
  CAPTURE(bad.output);
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("MISMATCH") != std::string::npos);
  CHECK(bad.output.find("iterations: expected 3, got 2") != std::string::npos);
}

TEST_CASE("usage and configuration errors exit with 2") {
  testing::TempDir tmp;
  write(tmp / "empty.json", R"({"name": "empty", "cases": []})");
  const auto empty = cli(tmp.path(), "bench empty.json --backend mock --exec sim");
  CAPTURE(empty.output);
  CHECK(empty.exit_code == 2);
  CHECK(empty.output.find("EmptyManifest") != std::string::npos);

  CHECK(cli(tmp.path(), "").exit_code == 2);
  CHECK(cli(tmp.path(), "run").exit_code == 2);
  CHECK(cli(tmp.path(), "run x --no-such-flag").exit_code == 2);
  CHECK(cli(tmp.path(), "run x --temperature 7").exit_code == 2);
  CHECK(cli(tmp.path(), "run x --set bogus=1").exit_code == 2);
  const auto no_db = cli(tmp.path(), "run x --db nowhere");
  CHECK(no_db.exit_code == 2);
  CHECK(no_db.output.find("no database") != std::string::npos);
  CHECK(cli(tmp.path(), "--version").exit_code == 0);
}

TEST_CASE("ingest, bench and report agree") {
  testing::TempDir tmp;
  const auto ingest = cli(tmp.path(), "ingest " + data("tutorials") + " --db db");
  CAPTURE(ingest.output);
  REQUIRE(ingest.exit_code == 0);
  CHECK(ingest.output.find("8 architecture") != std::string::npos);

  auto manifest = json::parse(read(testing::data_dir() / "manifests/dataset1.json"));
  while (manifest["cases"].size() > 3) manifest["cases"].erase(3);
  write(tmp / "m.json", manifest.dump());
  const auto bench = cli(tmp.path(), "bench m.json --db db --backend mock --exec sim --mock-script " +
                                         data("fixtures/bench/dataset1") +
                                         " --n 3 --jobs 2 --seed 5 --output out --workspace runs");
  CAPTURE(bench.output);
  REQUIRE(bench.exit_code == 0);
  CHECK(bench.output.find("Average") != std::string::npos);

  const auto report = cli(tmp.path(), "report out/transcripts --manifest m.json --out again");
  REQUIRE(report.exit_code == 0);
  CHECK(read(tmp / "again/report.txt") == read(tmp / "out/report.txt"));
  const auto as_json = cli(tmp.path(), "report out/transcripts --manifest m.json --json");
  CHECK(json::parse(as_json.output)["rows"].size() == 3);
}
