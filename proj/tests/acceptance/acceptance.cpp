// Acceptance gate: prints one PASS/FAIL line per criterion and exits non-zero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "agents/parsers.hpp"
#include "app/app.hpp"
#include "common/error.hpp"
#include "common/text.hpp"
#include "eval/metrics.hpp"
#include "executor/report.hpp"
#include "llm/types.hpp"
#include "orchestrator/pipeline.hpp"
#include "orchestrator/transcript.hpp"
#include "rag/chunk.hpp"
#include "rag/index.hpp"

using namespace foamagent;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kData = FOAMAGENT_TEST_DATA_DIR;

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(const char* f, double v) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double subset_pass_at_k(int n, int c, int k) {
  long total = 0;
  long hit = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    ++total;
    if (mask & ((1u << c) - 1u)) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(total);
}

const rag::Database& tutorial_db() {
  static const rag::Database db = rag::build_database(kData / "tutorials", *rag::make_default_embedder());
  return db;
}

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("foamagent-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
};

app::AppConfig base_config(const Scratch& s) {
  auto cfg = app::resolve_config(std::nullopt, {}, json::object());
  cfg.pipeline.workspace_parent = s.dir / "runs";
  return cfg;
}

app::ReplayResult replay(const Scratch& s, const std::string& name, const json& forced = json::object()) {
  return app::replay_fixture(base_config(s), app::load_fixture(kData / "fixtures" / name / "fixture.json"),
                             tutorial_db(), forced);
}

Verdict criterion_1() {
  const auto start = Clock::now();
  double worst = 0;
  int combos = 0;
  for (int n = 1; n <= 8; ++n) {
    for (int c = 0; c <= n; ++c) {
      for (int k = 1; k <= n; ++k) {
        worst = std::max(worst, std::abs(eval::pass_at_k(n, c, k) - subset_pass_at_k(n, c, k)));
        ++combos;
      }
    }
  }
  const double t = seconds_since(start);
  return {worst <= 1e-12 && t < 1.0,
          std::to_string(combos) + " combinations, max |diff| " + fmt("%.3g", worst) + ", " + fmt("%.4f", t) + " s"};
}

Verdict criterion_2() {
  const std::vector<int> cs = {10, 10, 10, 6, 10, 9, 9, 4};
  const std::vector<double> expected = {100, 100, 100, 60, 100, 90, 90, 40};
  std::vector<eval::CaseRuns> cases;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    eval::CaseRuns cr{"case" + std::to_string(i), {}};
    for (int r = 0; r < 10; ++r) cr.runs.push_back({r < cs[i] ? 4 : 2, 0, 1, 1, 1});
    cases.push_back(std::move(cr));
  }
  const auto report = eval::aggregate_report(cases, 5.0, 1);
  bool ok = true;
  for (std::size_t i = 0; i < cs.size(); ++i) ok = ok && std::abs(100.0 * report.rows[i].pass_at_k - expected[i]) <= 1e-9;
  const double agg = 100.0 * report.aggregate.pass_at_k;
  const double prod = eval::productivity(12667, 348.7);
  ok = ok && agg == 85.0 && std::abs(prod - 36.3) <= 0.05;
  return {ok, "aggregate " + fmt("%.12g", agg) + "%, productivity " + fmt("%.4f", prod)};
}

Verdict criterion_3() {
  const std::vector<double> iterations = {2.4, 2.1, 0, 12.5, 0, 5.2, 7.2, 16.3};
  const std::vector<double> tokens = {12667, 18083, 12863, 52090, 16385, 35532, 47927, 156812};
  const double r = eval::pearson_r(iterations, tokens);
  return {std::abs(r - 0.89) <= 0.01, "r = " + fmt("%.4f", r)};
}

Verdict criterion_4() {
  const double cost = llm::estimate_cost(44045, 5.0);
  return {std::abs(cost - 0.22) <= 0.005, "$" + fmt("%.5f", cost)};
}

Verdict criterion_5(const Scratch& s) {
  const auto start = Clock::now();
  const auto fx = app::load_fixture(kData / "fixtures/hit/fixture.json");
  const auto r = app::replay_fixture(base_config(s), fx, tutorial_db());
  const double t = seconds_since(start);

  std::vector<std::string> errors;
  for (const auto& req : r.requests) {
    const auto& text = req.messages.back().text;
    if (text.find("has been executed in OpenFOAM10, and got the following error") != std::string::npos) {
      errors.push_back(text);
    }
  }
  const bool errors_ok = errors.size() == 2 &&
                         errors[0].find("No 'neighbourPatch' provided") != std::string::npos &&
                         errors[1].find("cannot find patchField entry for cyclic") != std::string::npos;

  const auto path = s.dir / "hit.jsonl";
  orchestrator::write_transcript(path, r.outcome, {"HIT", 0});
  const auto stored = orchestrator::read_transcript(path);
  const std::uint64_t declared = fx.declared_usage["prompt_tokens"].get<std::uint64_t>() +
                                 fx.declared_usage["completion_tokens"].get<std::uint64_t>();
  const bool ok = r.outcome.executability.score == 4 && r.outcome.iterations == 2 && errors_ok &&
                  stored.ledger_entry_tokens == declared && stored.total_tokens() == declared && t < 5.0;
  return {ok, "score " + std::to_string(r.outcome.executability.score) + ", iterations " +
                  std::to_string(r.outcome.iterations) + ", ledger " + std::to_string(stored.ledger_entry_tokens) +
                  " / declared " + std::to_string(declared) + ", " + fmt("%.3f", t) + " s"};
}

Verdict criterion_6(const Scratch& s) {
  std::string detail;
  bool ok = true;
  const json no_reviewer = {{"no_reviewer", true}};
  for (const char* name : {"hit", "always_fail", "missing_file"}) {
    const auto r = replay(s, name, no_reviewer);
    const bool good = r.outcome.iterations == 0 && r.outcome.executability.score < 4;
    ok = ok && good;
    if (!good) detail += std::string(name) + " did not fail at iteration 0; ";
  }
  for (const char* name : {"cavity", "squarebendliq"}) {
    const auto r = replay(s, name, no_reviewer);
    const bool good = r.outcome.iterations == 0 && r.outcome.executability.score == 4;
    ok = ok && good;
    if (!good) detail += std::string(name) + " did not pass; ";
  }

  const auto with = replay(s, "missing_file");
  const auto without = replay(s, "missing_file_no_review_arch");
  const bool arch_ok = with.outcome.architecture.subtasks.size() > without.outcome.architecture.subtasks.size() &&
                       without.outcome.iterations == 20 &&
                       without.outcome.stop_reason == orchestrator::StopReason::IterationCap &&
                       std::none_of(without.outcome.transcript.begin(), without.outcome.transcript.end(),
                                    [](const auto& e) { return e.action == "ReviseArchitecture"; });
  ok = ok && arch_ok;
  if (!arch_ok) detail += "no-review-arch changed the architecture or stopped early; ";

  bool rag_ok = true;
  for (const char* name : {"hit", "cavity"}) {
    const auto r = replay(s, name, {{"no_rag", true}});
    for (const auto& e : r.outcome.transcript) {
      if (e.kind == "retrieval") rag_ok = false;
      if (e.prompt.find("###case begin:") != std::string::npos ||
          e.prompt.find("``input_file_begin:") != std::string::npos) {
        rag_ok = false;
      }
    }
  }
  ok = ok && rag_ok;
  if (!rag_ok) detail += "tutorial text reached a prompt with retrieval disabled; ";
  if (detail.empty()) {
    detail = "no-reviewer 3 fail / 2 pass, no-review-arch " + std::to_string(without.outcome.iterations) +
             " iterations with " + std::to_string(without.outcome.architecture.subtasks.size()) +
             " subtasks, no-rag prompts clean";
  }
  return {ok, detail};
}

Verdict criterion_7(const Scratch& s) {
  const auto r = replay(s, "always_fail");
  const bool ok = r.outcome.iterations == 20 && r.outcome.stop_reason == orchestrator::StopReason::IterationCap &&
                  !r.outcome.passed();
  return {ok, "iterations " + std::to_string(r.outcome.iterations) + ", stop " +
                  std::string(orchestrator::to_string(r.outcome.stop_reason)) + ", score " +
                  std::to_string(r.outcome.executability.score)};
}

Verdict criterion_8(const Scratch& s) {
  auto emb = rag::make_default_embedder();
  const auto& db = tutorial_db();
  int correct = 0;
  int total = 0;
  for (const char* set : {"dataset1.json", "dataset2.json"}) {
    const auto manifest = eval::load_manifest(kData / "manifests" / set);
    for (const auto& bc : manifest.cases) {
      ++total;
      const auto q = emb->embed(bc.requirement);
      std::string best;
      double best_score = -2;
      for (const auto& c : db.architecture.entries) {
        const double sc = rag::cosine_similarity(q, c.embedding);
        if (sc > best_score) {
          best_score = sc;
          best = c.info.name;
        }
      }
      const auto hits = rag::retrieve_similar(db.architecture, bc.requirement, 1, *emb);
      if (best == bc.expected_tutorial && hits.front().chunk->info.name == bc.expected_tutorial) ++correct;
    }
  }

  const auto a = s.dir / "db-a";
  const auto b = s.dir / "db-b";
  rag::save_database(db, a);
  rag::save_database(rag::load_database(a, *emb), b);
  bool bytes_ok = true;
  for (const char* kind : {"architecture", "file_context", "allrun"}) {
    const auto text_a = text::read_file(a / (std::string(kind) + ".txt"));
    bytes_ok = bytes_ok && text_a == text::read_file(b / (std::string(kind) + ".txt"));
    bytes_ok = bytes_ok && text::read_file(a / (std::string(kind) + ".vectors.json")) ==
                               text::read_file(b / (std::string(kind) + ".vectors.json"));
    const auto parsed = rag::parse_chunk_stream(text_a, rag::chunk_kind_from_string(kind));
    bytes_ok = bytes_ok && rag::serialize_chunk_stream(parsed) == text_a;
  }
  return {correct == total && bytes_ok,
          std::to_string(correct) + "/" + std::to_string(total) + " requirements at rank 1, round trip " +
              (bytes_ok ? "byte-exact" : "differs")};
}

std::string word(std::mt19937_64& rng) {
  static const std::string alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_";
  std::uniform_int_distribution<std::size_t> len(1, 10);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string w(len(rng), 'a');
  for (auto& c : w) c = alphabet[pick(rng)];
  if (std::isdigit(static_cast<unsigned char>(w[0]))) w[0] = 'q';
  return w;
}

template <typename Fn>
bool raises(ErrorCode code, Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

Verdict criterion_9() {
  constexpr int kInstances = 1000;
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> small(1, 6);
  int subtask_ok = 0, fence_ok = 0, review_ok = 0, chunk_ok = 0;
  for (int i = 0; i < kInstances; ++i) {
    std::vector<agents::Subtask> subtasks;
    const int n = small(rng);
    for (int j = 0; j < n; ++j) subtasks.push_back({j + 1, word(rng) + std::to_string(j), word(rng), word(rng) + " " + word(rng)});
    if (agents::parse_subtask_list(agents::serialize_subtask_list(subtasks)) == subtasks) ++subtask_ok;

    std::string content;
    for (int j = 0; j < n; ++j) content += (j ? "\n" : "") + word(rng) + " " + word(rng) + ";";
    if (agents::extract_fenced_block(word(rng) + "\n```foam\n" + content + "\n```\n" + word(rng)) == content) {
      ++fence_ok;
    }

    agents::ReviewTargets t;
    for (int j = 0; j < n; ++j) {
      t.files.push_back(word(rng));
      t.folders.push_back(j % 2 ? "system" : "0");
    }
    if (agents::parse_review_targets("###" + text::join(t.files, ", ") + "### in ``" + text::join(t.folders, ", ") +
                                     "``") == t) {
      ++review_ok;
    }

    std::vector<rag::TutorialChunk> chunks;
    for (int j = 0; j < n; ++j) {
      const rag::CaseInfo info{word(rng) + std::to_string(j), word(rng), word(rng), word(rng)};
      chunks.push_back(rag::make_file_chunk(info, word(rng), word(rng), content));
    }
    const auto doc = rag::serialize_chunk_stream(chunks);
    if (rag::parse_chunk_stream(doc, rag::ChunkKind::FileContext) == chunks) ++chunk_ok;
  }

  using agents::parse_review_targets;
  using agents::parse_subtask_list;
  const std::vector<bool> errors = {
      raises(ErrorCode::NoHeader, [] { parse_subtask_list("subtask1: to Write a OpenFoam U foamfile in 0 folder"); }),
      raises(ErrorCode::CountMismatch,
             [] { parse_subtask_list("splits into 2 subtasks:\nsubtask1: to Write a OpenFoam U foamfile in 0 folder"); }),
      raises(ErrorCode::MalformedSubtaskLine, [] { parse_subtask_list("splits into 1 subtasks:\nsubtask1: U please"); }),
      raises(ErrorCode::DuplicateSubtask,
             [] {
               parse_subtask_list("splits into 2 subtasks:\nsubtask1: to Write a OpenFoam U foamfile in 0 folder\n"
                                  "subtask2: to Write a OpenFoam U foamfile in 0 folder");
             }),
      raises(ErrorCode::NoFence, [] { agents::extract_fenced_block("no fence"); }),
      raises(ErrorCode::UnterminatedFence, [] { agents::extract_fenced_block("```\nopen"); }),
      raises(ErrorCode::MissingFileMarkers, [] { parse_review_targets("U in 0"); }),
      raises(ErrorCode::MissingFolderMarkers, [] { parse_review_targets("###U### in 0"); }),
      raises(ErrorCode::ArityMismatch, [] { parse_review_targets("###U, p### in ``0``"); }),
      raises(ErrorCode::UnterminatedChunk,
             [] { rag::parse_chunk_stream("###case begin:\ncase name: a\n", rag::ChunkKind::Architecture); }),
      raises(ErrorCode::MissingHeaderField,
             [] { rag::parse_chunk_stream("###case begin:\ncase solver: x\ncase end.###", rag::ChunkKind::Architecture); }),
      raises(ErrorCode::DuplicateChunk,
             [] {
               rag::parse_chunk_stream("###case begin:\ncase name: a\ncase end.###\n###case begin:\ncase name: a\ncase end.###",
                                       rag::ChunkKind::Architecture);
             }),
  };
  const auto error_ok = std::count(errors.begin(), errors.end(), true);
  const bool ok = subtask_ok == kInstances && fence_ok == kInstances && review_ok == kInstances &&
                  chunk_ok == kInstances && error_ok == static_cast<long>(errors.size());
  return {ok, "round trips " + std::to_string(subtask_ok) + "/" + std::to_string(fence_ok) + "/" +
                  std::to_string(review_ok) + "/" + std::to_string(chunk_ok) + " of " + std::to_string(kInstances) +
                  ", error cases " + std::to_string(error_ok) + "/" + std::to_string(errors.size())};
}

Verdict criterion_10() {
  using executor::CheckResult;
  const std::vector<CheckResult> none;
  const std::vector<CheckResult> pass = {{"a", true}};
  const std::vector<CheckResult> fail = {{"a", false}};
  int total = 0;
  int right = 0;
  for (int bits = 0; bits < 16; ++bits) {
    const executor::LogSignals s{(bits & 1) != 0, (bits & 2) != 0, (bits & 4) != 0, (bits & 8) != 0};
    for (const auto* checks : {&none, &pass, &fail}) {
      for (const std::optional<bool> ov : {std::optional<bool>(), std::optional<bool>(true), std::optional<bool>(false)}) {
        int expected = 0;
        if (!s.mesh_ok) {
          expected = 0;
        } else if (!s.solver_started) {
          expected = 1;
        } else if (s.diverged || !s.end_time_reached) {
          expected = 2;
        } else if (ov == false || checks == &fail || (checks == &none && ov != true)) {
          expected = 3;
        } else {
          expected = 4;
        }
        ++total;
        if (executor::classify_executability(s, *checks, ov).score == expected) ++right;
      }
    }
  }
  return {right == total, std::to_string(right) + "/" + std::to_string(total) + " signal combinations"};
}

}  // namespace

int main() {
  Scratch scratch;
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"pass@k matches subset enumeration (n <= 8, 1e-12, < 1 s)", criterion_1},
      {"dataset 1 pass@1 per case and aggregate 85% and productivity 36.3 +- 0.05", criterion_2},
      {"iteration/token Pearson r = 0.89 +- 0.01", criterion_3},
      {"estimate_cost(44045, $5/1M) = $0.22 +- $0.005", criterion_4},
      {"HIT replay: success in 2 iterations, ledger = declared usage, < 5 s", [&] { return criterion_5(scratch); }},
      {"ablations: no-reviewer, no-review-arch, no-rag", [&] { return criterion_6(scratch); }},
      {"always-failing scenario stops at 20 iterations", [&] { return criterion_7(scratch); }},
      {"rank-1 retrieval for every requirement, byte-exact database", [&] { return criterion_8(scratch); }},
      {"parser round trips on 1000 instances plus error cases", criterion_9},
      {"executability rubric over all signal combinations", criterion_10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("%s  %2zu  %s  [%s]\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), v.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
