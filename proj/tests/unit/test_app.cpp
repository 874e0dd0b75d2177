#include <doctest.h>

#include <json.hpp>

#include "app/app.hpp"
#include "common/error.hpp"
#include "common/text.hpp"
#include "support.hpp"

using namespace foamagent;
using namespace foamagent::app;
using nlohmann::json;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

eval::Manifest small_manifest() {
  auto m = eval::load_manifest(testing::data_dir() / "manifests/dataset1.json");
  m.cases.resize(3);
  return m;
}

AppConfig bench_config(const testing::TempDir& tmp, const std::string& out, int jobs) {
  auto cfg = resolve_config(std::nullopt, {},
                            {{"backend", "mock"},
                             {"exec", "sim"},
                             {"mock_script", (testing::data_dir() / "fixtures/bench/dataset1").string()},
                             {"output", (tmp / out).string()},
                             {"workspace", (tmp / (out + "-runs")).string()},
                             {"n", 4},
                             {"jobs", jobs},
                             {"seed", 7}});
  return cfg;
}

}  // namespace

TEST_CASE("config precedence: defaults, file, environment, overrides") {
  testing::TempDir tmp;
  const auto defaults = resolve_config(std::nullopt, {}, json::object());
  CHECK(defaults.backend == "remote");
  CHECK(defaults.pipeline.max_iterations == 20);
  CHECK(defaults.pipeline.temperature == doctest::Approx(0.01));
  CHECK(defaults.runs == 10);
  CHECK(defaults.k == 1);

  text::write_file(tmp / "c.json", R"({"model": "from-file", "endpoint": "http://file", "max_iter": 7,
                                      "temperature": 0.5})");
  const EnvMap env = {{"FOAMAGENT_MODEL", "from-env"}, {"FOAMAGENT_API_KEY", "sk-env"}};
  const auto cfg = resolve_config(tmp / "c.json", env, {{"temperature", "0.2"}});
  CHECK(cfg.remote.model == "from-env");
  CHECK(cfg.pipeline.model_id == "from-env");
  CHECK(cfg.remote.endpoint == "http://file");
  CHECK(cfg.remote.api_key == "sk-env");
  CHECK(cfg.pipeline.max_iterations == 7);
  CHECK(cfg.pipeline.temperature == doctest::Approx(0.2));

  const auto dumped = config_to_json(cfg);
  CHECK(dumped["api_key"] != "sk-env");
  for (const auto& key : config_keys()) CHECK(dumped.contains(key));

  // Re-applying the effective settings changes nothing.
  auto again = cfg;
  auto plain = dumped;
  plain.erase("api_key");
  apply_overrides(again, plain);
  CHECK(config_to_json(again) == dumped);

  CHECK(code_of([] { resolve_config(std::nullopt, {}, {{"no_such_key", 1}}); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { resolve_config(std::nullopt, {}, {{"temperature", 3}}); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { resolve_config(std::nullopt, {}, {{"backend", "gpt"}}); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { resolve_config(std::nullopt, {}, {{"n", "many"}}); }) == ErrorCode::ConfigError);
  text::write_file(tmp / "broken.json", "{");
  CHECK(code_of([&] { resolve_config(tmp / "broken.json", {}, json::object()); }) == ErrorCode::ConfigError);

  const auto flags = resolve_config(std::nullopt, {}, {{"no_reviewer", "true"}, {"no_rag", 1}});
  CHECK_FALSE(flags.pipeline.flags.enable_reviewer);
  CHECK_FALSE(flags.pipeline.flags.enable_rag);
  CHECK(flags.pipeline.flags.enable_review_architecture);
}

TEST_CASE("database opening") {
  testing::TempDir tmp;
  auto cfg = resolve_config(std::nullopt, {}, {{"db", (tmp / "missing").string()}});
  auto emb = make_embedder(cfg);
  CHECK(emb->identity() == rag::make_default_embedder()->identity());
  CHECK(code_of([&] { open_database(cfg, *emb); }) == ErrorCode::ConfigError);

  cfg.tutorials = testing::data_dir() / "tutorials";
  const auto db = open_database(cfg, *emb);
  CHECK(db.architecture.entries.size() == 8);
  rag::save_database(db, tmp / "db");
  cfg.tutorials.reset();
  cfg.db = tmp / "db";
  CHECK(open_database(cfg, *emb).size() == db.size());
}

TEST_CASE("bench is deterministic across worker counts") {
  testing::TempDir tmp;
  const auto manifest = small_manifest();
  auto emb = rag::make_default_embedder();
  const auto db = rag::build_database(testing::data_dir() / "tutorials", *emb);

  const auto serial = run_bench(bench_config(tmp, "a", 1), manifest, db);
  const auto parallel = run_bench(bench_config(tmp, "b", 4), manifest, db);
  CHECK(serial.transcripts.size() == 12);
  CHECK(eval::report_to_json(serial.report) == eval::report_to_json(parallel.report));
  CHECK(text::read_file(tmp / "a/report.txt") == text::read_file(tmp / "b/report.txt"));
  CHECK(text::read_file(tmp / "a/report.json") == text::read_file(tmp / "b/report.json"));
  for (const auto& p : serial.transcripts) CHECK(p.parent_path() == tmp / "a/transcripts");

  std::vector<std::string> order;
  for (const auto& c : manifest.cases) order.push_back(c.case_id);
  const auto rebuilt = report_from_transcripts(tmp / "a/transcripts", 5.0, 1, order);
  CHECK(eval::report_to_text(rebuilt) == text::read_file(tmp / "a/report.txt"));

  auto other_seed = bench_config(tmp, "c", 2);
  other_seed.seed = 8;
  const auto c = run_bench(other_seed, manifest, db);
  CHECK(c.report.rows.size() == 3);

  CHECK(code_of([&] { run_bench(bench_config(tmp, "d", 1), eval::Manifest{}, db); }) ==
        ErrorCode::EmptyManifest);
}

TEST_CASE("fixtures parse with declared usage") {
  const auto fx = load_fixture(testing::data_dir() / "fixtures/hit/fixture.json");
  CHECK(fx.name == "hit");
  CHECK(fx.checks.size() == 1);
  std::uint64_t prompt = 0;
  for (const auto& e : fx.script) prompt += e.usage->prompt_tokens * static_cast<std::uint64_t>(e.repeat);
  CHECK(fx.declared_usage["prompt_tokens"].get<std::uint64_t>() == prompt);
  CHECK(fx.expected["iterations"] == 2);
  CHECK(code_of([] { parse_fixture(json::parse(R"({"requirement": "x"})")); }) == ErrorCode::ConfigError);
}
