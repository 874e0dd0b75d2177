#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "llm/backend.hpp"
#include "rag/embedder.hpp"

namespace foamagent::llm {

struct HttpResult {
  bool delivered = false;  // false: no HTTP response was received
  int status = 0;
  std::string body;
  std::string error;
};

using Headers = std::vector<std::pair<std::string, std::string>>;

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResult post(const std::string& url, const Headers& headers,
                          const std::string& body) = 0;
};

/// cpp-httplib client; https URLs go through OpenSSL.
class HttplibTransport final : public HttpTransport {
 public:
  explicit HttplibTransport(std::chrono::seconds timeout = std::chrono::seconds(120));
  HttpResult post(const std::string& url, const Headers& headers,
                  const std::string& body) override;

 private:
  std::chrono::seconds timeout_;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

struct RemoteConfig {
  std::string endpoint = "https://api.openai.com/v1";
  std::string api_key;
  std::string model = "gpt-4o";
  int max_retries = 3;
  std::vector<std::chrono::milliseconds> backoff = {std::chrono::milliseconds(1000),
                                                    std::chrono::milliseconds(2000),
                                                    std::chrono::milliseconds(4000)};
};

/// `endpoint` with "/chat/completions" (or another suffix) appended unless
/// already present.
std::string endpoint_url(const std::string& endpoint, const std::string& suffix);

/// Builds the chat-completions request body.
std::string chat_request_body(const ChatRequest& request);

/// Parses a chat-completions reply; usage falls back to the char/4 rule when
/// the provider omits it. Throws ProviderError.
Completion parse_chat_reply(const std::string& body, const ChatRequest& request);

/// Chat-completions over HTTP. Transport failures are retried with the
/// configured backoff; replies with an HTTP error status are not.
class RemoteBackend final : public LlmBackend {
 public:
  RemoteBackend(RemoteConfig config, std::shared_ptr<HttpTransport> transport = nullptr,
                Sleeper sleeper = nullptr);

  Completion complete(const ChatRequest& request) override;

 private:
  HttpResult post_with_retry(const std::string& url, const std::string& body);

  RemoteConfig config_;
  std::shared_ptr<HttpTransport> transport_;
  Sleeper sleeper_;
};

/// Embeddings endpoint adapter for the rag module.
class RemoteEmbedder final : public rag::Embedder {
 public:
  RemoteEmbedder(RemoteConfig config, std::string model, std::size_t dimension,
                 std::shared_ptr<HttpTransport> transport = nullptr);

  std::string identity() const override;
  std::size_t dimension() const override { return dimension_; }
  std::vector<double> embed(std::string_view text) const override;

 private:
  RemoteConfig config_;
  std::string model_;
  std::size_t dimension_;
  std::shared_ptr<HttpTransport> transport_;
};

}  // namespace foamagent::llm
