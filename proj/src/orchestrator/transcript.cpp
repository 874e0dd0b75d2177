#include "orchestrator/transcript.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"
#include "common/text.hpp"

using nlohmann::json;

namespace foamagent::orchestrator {

json entry_to_json(const TranscriptEntry& e, bool include_text) {
  json j = {{"kind", e.kind},
            {"role", e.role},
            {"action", e.action},
            {"iteration", e.iteration},
            {"prompt_digest", e.prompt_digest},
            {"reply_digest", e.reply_digest},
            {"usage", {{"prompt_tokens", e.usage.prompt_tokens},
                       {"completion_tokens", e.usage.completion_tokens}}},
            {"context_ids", e.context_ids},
            {"detail", e.detail}};
  if (include_text) {
    j["prompt"] = e.prompt;
    j["reply"] = e.reply;
  }
  return j;
}

json outcome_to_json(const RunOutcome& o) {
  json checks = json::array();
  for (const auto& c : o.executability.requirement_checks) {
    checks.push_back({{"id", c.id}, {"passed", c.passed}});
  }
  json by_label = json::object();
  for (const auto& [label, u] : o.ledger.by_label()) {
    by_label[label] = {{"prompt_tokens", u.prompt_tokens}, {"completion_tokens", u.completion_tokens}};
  }
  json subtasks = json::array();
  for (const auto& s : o.architecture.subtasks) subtasks.push_back(s.folder + "/" + s.file_name);
  json j = {{"passed", o.passed()},
            {"score", o.executability.score},
            {"rationale", o.executability.rationale},
            {"requirement_checks", std::move(checks)},
            {"iterations", o.iterations},
            {"stop_reason", std::string(to_string(o.stop_reason))},
            {"prompt_tokens", o.ledger.totals().prompt_tokens},
            {"completion_tokens", o.ledger.totals().completion_tokens},
            {"total_tokens", o.ledger.total_tokens()},
            {"usage_by_action", std::move(by_label)},
            {"file_count", o.code_stats.file_count},
            {"total_lines", o.code_stats.total_lines},
            {"lines_per_file", o.code_stats.lines_per_file},
            {"case_name", o.architecture.case_name},
            {"subtasks", std::move(subtasks)},
            {"transcript_entries", o.transcript.size()}};
  if (o.error) j["error"] = *o.error;
  return j;
}

void write_transcript(const std::filesystem::path& path, const RunOutcome& outcome,
                      const RunMeta& meta, bool include_text) {
  std::string out;
  for (const auto& e : outcome.transcript) out += entry_to_json(e, include_text).dump() + "\n";
  json final_record = {{"kind", "outcome"},
                       {"case_id", meta.case_id},
                       {"run_index", meta.run_index},
                       {"requirement", outcome.requirement},
                       {"wall_time", outcome.wall_time},
                       {"summary", outcome_to_json(outcome)}};
  out += final_record.dump() + "\n";
  text::write_file(path, out);
}

StoredRun read_transcript(const std::filesystem::path& path) {
  StoredRun run;
  bool found = false;
  std::uint64_t entry_tokens = 0;
  const auto content = text::read_file(path);
  for (const auto line : text::split_lines(content)) {
    if (text::trim(line).empty()) continue;
    try {
      const auto j = json::parse(line);
    if (j.value("kind", "") == "llm" && j.contains("usage")) {
      entry_tokens += j["usage"].value("prompt_tokens", std::uint64_t{0}) +
                      j["usage"].value("completion_tokens", std::uint64_t{0});
    }
    if (j.value("kind", "") != "outcome") continue;
    const auto& s = j.at("summary");
    run.meta = {j.value("case_id", ""), j.value("run_index", 0)};
    run.score = s.at("score").get<int>();
    run.iterations = s.at("iterations").get<int>();
    run.prompt_tokens = s.at("prompt_tokens").get<std::uint64_t>();
    run.completion_tokens = s.at("completion_tokens").get<std::uint64_t>();
    run.file_count = s.at("file_count").get<std::size_t>();
    run.total_lines = s.at("total_lines").get<std::size_t>();
    run.stop_reason = s.value("stop_reason", "");
    found = true;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what(), path.string());
    }
  }
  if (!found) {
    throw Error(ErrorCode::ConfigError, path.string() + " has no outcome record", path.string());
  }
  run.ledger_entry_tokens = entry_tokens;
  return run;
}

std::vector<std::string> diff_json(const json& expected, const json& actual, const std::string& prefix) {
  std::vector<std::string> out;
  if (expected.is_object() && actual.is_object()) {
    for (const auto& [key, value] : expected.items()) {
      const auto name = prefix.empty() ? key : prefix + "." + key;
      if (!actual.contains(key)) {
        out.push_back(name + ": expected " + value.dump() + ", missing");
        continue;
      }
      auto sub = diff_json(value, actual[key], name);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }
  if (expected.is_number() && actual.is_number()) {
    const double a = expected.get<double>();
    const double b = actual.get<double>();
    if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(a))) {
      out.push_back(prefix + ": expected " + expected.dump() + ", got " + actual.dump());
    }
    return out;
  }
  if (expected != actual) {
    out.push_back(prefix + ": expected " + expected.dump() + ", got " + actual.dump());
  }
  return out;
}

}  // namespace foamagent::orchestrator
