#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "orchestrator/pipeline.hpp"

namespace foamagent::orchestrator {

nlohmann::json entry_to_json(const TranscriptEntry& entry, bool include_text = false);

/// Summary of an outcome (no transcript entries, no wall time).
nlohmann::json outcome_to_json(const RunOutcome& outcome);

/// Run identity stored with a persisted transcript.
struct RunMeta {
  std::string case_id;
  int run_index = 0;
};

/// One JSON object per transcript entry, then a final {"kind": "outcome"}
/// record carrying the summary and `meta`.
void write_transcript(const std::filesystem::path& path, const RunOutcome& outcome,
                      const RunMeta& meta, bool include_text = false);

/// The per-run quantities the metrics report needs.
struct StoredRun {
  RunMeta meta;
  int score = 0;
  int iterations = 0;
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
  std::size_t file_count = 0;
  std::size_t total_lines = 0;
  std::string stop_reason;
  std::uint64_t ledger_entry_tokens = 0;  // sum over llm entries, for audits

  std::uint64_t total_tokens() const { return prompt_tokens + completion_tokens; }
};

/// Reads the outcome record of a transcript file. Throws IoFailure or
/// ConfigError when the file has no outcome record.
StoredRun read_transcript(const std::filesystem::path& path);

/// Field-level differences between two outcome summaries, e.g.
/// "iterations: 2 != 3". Empty when equal.
std::vector<std::string> diff_json(const nlohmann::json& expected, const nlohmann::json& actual,
                                   const std::string& prefix = {});

}  // namespace foamagent::orchestrator
