#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace foamagent::llm {

enum class Role { System, User, Assistant };

std::string_view to_string(Role role) noexcept;

struct ChatMessage {
  Role role = Role::User;
  std::string text;

  bool operator==(const ChatMessage&) const = default;
};

struct LlmParams {
  std::string model_id = "gpt-4o";
  double temperature = 0.01;
  int max_output_tokens = 4096;

  bool operator==(const LlmParams&) const = default;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  LlmParams params;

  /// Concatenated message texts, the basis of the fallback token count.
  std::string joined_text() const;

  bool operator==(const ChatRequest&) const = default;
};

/// Throws InvalidRequest: no messages, last message not from the user,
/// temperature outside [0,1], non-positive max_output_tokens.
void validate(const ChatRequest& request);

struct UsageRecord {
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;

  std::uint64_t total() const { return prompt_tokens + completion_tokens; }
  UsageRecord& operator+=(const UsageRecord& other) {
    prompt_tokens += other.prompt_tokens;
    completion_tokens += other.completion_tokens;
    return *this;
  }
  bool operator==(const UsageRecord&) const = default;
};

struct Completion {
  std::string text;
  UsageRecord usage;
};

/// ceil(chars / 4): token estimate used when no real count is available.
std::uint64_t approx_tokens(std::size_t chars);

class UsageLedger {
 public:
  struct Entry {
    std::string label;
    UsageRecord usage;
  };

  void record(const std::string& label, const UsageRecord& usage);

  const UsageRecord& totals() const { return totals_; }
  std::uint64_t total_tokens() const { return totals_.total(); }
  const std::map<std::string, UsageRecord>& by_label() const { return by_label_; }
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  UsageRecord totals_;
  std::map<std::string, UsageRecord> by_label_;
  std::vector<Entry> entries_;
};

UsageLedger record_usage(UsageLedger ledger, const std::string& action_label,
                         const UsageRecord& usage);

/// total_tokens * price_per_million / 1e6.
double estimate_cost(std::uint64_t total_tokens, double price_per_million);

}  // namespace foamagent::llm
