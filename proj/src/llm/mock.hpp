#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "llm/backend.hpp"

namespace foamagent::llm {

struct ScriptEntry {
  std::optional<std::string> match;
  std::string reply;
  std::optional<UsageRecord> usage;
  int repeat = 1;
};

/// Script JSON: an array of {match?, reply, usage?: {prompt_tokens,
/// completion_tokens}, repeat?} objects, or {"entries": [...]}.
std::vector<ScriptEntry> parse_script(const nlohmann::json& doc);
std::vector<ScriptEntry> load_script(const std::filesystem::path& path);
nlohmann::json script_to_json(const std::vector<ScriptEntry>& entries);

/// Replays a fixed queue of replies. Each call consumes the next entry; a
/// `match` substring absent from the request raises ScriptMismatch.
class MockBackend final : public LlmBackend {
 public:
  explicit MockBackend(std::vector<ScriptEntry> script);

  Completion complete(const ChatRequest& request) override;

  std::vector<ChatRequest> requests() const;
  std::size_t remaining() const;

 private:
  mutable std::mutex mutex_;
  std::vector<ScriptEntry> queue_;
  std::size_t cursor_ = 0;
  int used_of_current_ = 0;
  std::vector<ChatRequest> requests_;
};

}  // namespace foamagent::llm
