#include "llm/mock.hpp"

#include "common/error.hpp"
#include "common/text.hpp"

using nlohmann::json;

namespace foamagent::llm {

std::vector<ScriptEntry> parse_script(const json& doc) {
  const json& list = doc.is_object() ? doc.at("entries") : doc;
  if (!list.is_array()) throw Error(ErrorCode::ConfigError, "mock script must be a JSON array");
  std::vector<ScriptEntry> out;
  for (const auto& item : list) {
    ScriptEntry e;
    if (item.contains("match") && !item["match"].is_null()) e.match = item["match"].get<std::string>();
    e.reply = item.at("reply").get<std::string>();
    if (item.contains("usage")) {
      const auto& u = item["usage"];
      e.usage = UsageRecord{u.at("prompt_tokens").get<std::uint64_t>(),
                            u.at("completion_tokens").get<std::uint64_t>()};
    }
    e.repeat = item.value("repeat", 1);
    if (e.repeat < 1) throw Error(ErrorCode::ConfigError, "mock script repeat must be >= 1");
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ScriptEntry> load_script(const std::filesystem::path& path) {
  try {
    return parse_script(json::parse(text::read_file(path)));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what(), path.string());
  }
}

json script_to_json(const std::vector<ScriptEntry>& entries) {
  json out = json::array();
  for (const auto& e : entries) {
    json item;
    if (e.match) item["match"] = *e.match;
    item["reply"] = e.reply;
    if (e.usage) {
      item["usage"] = {{"prompt_tokens", e.usage->prompt_tokens},
                       {"completion_tokens", e.usage->completion_tokens}};
    }
    if (e.repeat != 1) item["repeat"] = e.repeat;
    out.push_back(std::move(item));
  }
  return out;
}

MockBackend::MockBackend(std::vector<ScriptEntry> script) : queue_(std::move(script)) {}

Completion MockBackend::complete(const ChatRequest& request) {
  std::lock_guard lock(mutex_);
  requests_.push_back(request);
  if (cursor_ >= queue_.size()) {
    throw Error(ErrorCode::BackendScriptExhausted,
                "mock script exhausted after " + std::to_string(requests_.size() - 1) + " replies");
  }
  const ScriptEntry& entry = queue_[cursor_];
  const auto prompt = request.joined_text();
  if (entry.match && prompt.find(*entry.match) == std::string::npos) {
    throw Error(ErrorCode::ScriptMismatch,
                "mock script entry " + std::to_string(cursor_) + " expects the request to contain '" +
                    *entry.match + "'; request begins: " + prompt.substr(0, 240),
                *entry.match);
  }
  Completion c;
  c.text = entry.reply;
  c.usage = entry.usage.value_or(
      UsageRecord{approx_tokens(prompt.size()), approx_tokens(entry.reply.size())});
  if (++used_of_current_ >= entry.repeat) {
    ++cursor_;
    used_of_current_ = 0;
  }
  return c;
}

std::vector<ChatRequest> MockBackend::requests() const {
  std::lock_guard lock(mutex_);
  return requests_;
}

std::size_t MockBackend::remaining() const {
  std::lock_guard lock(mutex_);
  std::size_t n = 0;
  for (std::size_t i = cursor_; i < queue_.size(); ++i) n += static_cast<std::size_t>(queue_[i].repeat);
  return n - static_cast<std::size_t>(used_of_current_);
}

}  // namespace foamagent::llm
