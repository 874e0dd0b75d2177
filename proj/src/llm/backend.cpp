#include "llm/backend.hpp"

namespace foamagent::llm {

Completion complete_chat(const ChatRequest& request, LlmBackend& backend) {
  validate(request);
  return backend.complete(request);
}

}  // namespace foamagent::llm
