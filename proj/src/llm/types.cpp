#include "llm/types.hpp"

#include "common/error.hpp"

namespace foamagent::llm {

std::string_view to_string(Role role) noexcept {
  switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

std::string ChatRequest::joined_text() const {
  std::string out;
  for (const auto& m : messages) out += m.text;
  return out;
}

void validate(const ChatRequest& request) {
  if (request.messages.empty()) {
    throw Error(ErrorCode::InvalidRequest, "chat request has no messages");
  }
  if (request.messages.back().role != Role::User) {
    throw Error(ErrorCode::InvalidRequest, "last chat message must come from the user");
  }
  const double t = request.params.temperature;
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::InvalidRequest,
                "temperature " + std::to_string(t) + " outside [0, 1]");
  }
  if (request.params.max_output_tokens <= 0) {
    throw Error(ErrorCode::InvalidRequest, "max_output_tokens must be positive");
  }
}

std::uint64_t approx_tokens(std::size_t chars) { return (chars + 3) / 4; }

void UsageLedger::record(const std::string& label, const UsageRecord& usage) {
  totals_ += usage;
  by_label_[label] += usage;
  entries_.push_back({label, usage});
}

UsageLedger record_usage(UsageLedger ledger, const std::string& action_label,
                         const UsageRecord& usage) {
  ledger.record(action_label, usage);
  return ledger;
}

double estimate_cost(std::uint64_t total_tokens, double price_per_million) {
  if (price_per_million < 0) throw Error(ErrorCode::InvalidArgument, "price must be non-negative");
  return static_cast<double>(total_tokens) * price_per_million / 1e6;
}

}  // namespace foamagent::llm
