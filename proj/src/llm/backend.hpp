#pragma once

#include <memory>

#include "llm/types.hpp"

namespace foamagent::llm {

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual Completion complete(const ChatRequest& request) = 0;
};

/// Validates the request, then delegates to the backend.
Completion complete_chat(const ChatRequest& request, LlmBackend& backend);

}  // namespace foamagent::llm
