#include "llm/remote.hpp"

#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "common/error.hpp"

using nlohmann::json;

namespace foamagent::llm {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::ConfigError, "endpoint '" + url + "' lacks a scheme", url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

Headers auth_headers(const RemoteConfig& config) {
  Headers h;
  if (!config.api_key.empty()) h.emplace_back("Authorization", "Bearer " + config.api_key);
  return h;
}

std::string excerpt(const std::string& s) { return s.size() > 400 ? s.substr(0, 400) + "..." : s; }

}  // namespace

HttplibTransport::HttplibTransport(std::chrono::seconds timeout) : timeout_(timeout) {}

HttpResult HttplibTransport::post(const std::string& url, const Headers& headers,
                                  const std::string& body) {
  const auto parts = split_url(url);
  httplib::Client client(parts.origin);
  client.set_connection_timeout(std::chrono::seconds(30));
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  httplib::Headers h;
  for (const auto& [k, v] : headers) h.emplace(k, v);
  auto res = client.Post(parts.path, h, body, "application/json");
  HttpResult out;
  if (!res) {
    out.error = httplib::to_string(res.error());
    return out;
  }
  out.delivered = true;
  out.status = res->status;
  out.body = res->body;
  return out;
}

std::string endpoint_url(const std::string& endpoint, const std::string& suffix) {
  std::string base = endpoint;
  while (!base.empty() && base.back() == '/') base.pop_back();
  if (base.size() >= suffix.size() && base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return base;
  }
  return base + suffix;
}

std::string chat_request_body(const ChatRequest& request) {
  json messages = json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", std::string(to_string(m.role))}, {"content", m.text}});
  }
  return json{{"model", request.params.model_id},
              {"messages", std::move(messages)},
              {"temperature", request.params.temperature},
              {"max_tokens", request.params.max_output_tokens}}
      .dump();
}

Completion parse_chat_reply(const std::string& body, const ChatRequest& request) {
  Completion c;
  try {
    const auto doc = json::parse(body);
    const auto& content = doc.at("choices").at(0).at("message").at("content");
    c.text = content.is_null() ? std::string() : content.get<std::string>();
    if (doc.contains("usage") && doc["usage"].is_object()) {
      const auto& u = doc["usage"];
      c.usage.prompt_tokens = u.value("prompt_tokens", approx_tokens(request.joined_text().size()));
      c.usage.completion_tokens = u.value("completion_tokens", approx_tokens(c.text.size()));
    } else {
      c.usage = {approx_tokens(request.joined_text().size()), approx_tokens(c.text.size())};
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ProviderError,
                std::string("malformed chat-completions reply: ") + e.what() + "; body: " + excerpt(body));
  }
  return c;
}

RemoteBackend::RemoteBackend(RemoteConfig config, std::shared_ptr<HttpTransport> transport,
                             Sleeper sleeper)
    : config_(std::move(config)),
      transport_(transport ? std::move(transport) : std::make_shared<HttplibTransport>()),
      sleeper_(sleeper ? std::move(sleeper)
                       : Sleeper([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); })) {}

HttpResult RemoteBackend::post_with_retry(const std::string& url, const std::string& body) {
  auto headers = auth_headers(config_);
  HttpResult result;
  for (int attempt = 0;; ++attempt) {
    result = transport_->post(url, headers, body);
    if (result.delivered || attempt >= config_.max_retries) break;
    const auto& backoff = config_.backoff;
    if (!backoff.empty()) {
      sleeper_(backoff[std::min<std::size_t>(static_cast<std::size_t>(attempt), backoff.size() - 1)]);
    }
  }
  if (!result.delivered) {
    throw Error(ErrorCode::TransportError,
                "POST " + url + " failed after " + std::to_string(config_.max_retries + 1) +
                    " attempts: " + result.error,
                url);
  }
  return result;
}

Completion RemoteBackend::complete(const ChatRequest& request) {
  ChatRequest effective = request;
  if (effective.params.model_id.empty()) effective.params.model_id = config_.model;
  const auto url = endpoint_url(config_.endpoint, "/chat/completions");
  const auto result = post_with_retry(url, chat_request_body(effective));
  if (result.status < 200 || result.status >= 300) {
    throw Error(ErrorCode::ProviderError,
                "provider returned HTTP " + std::to_string(result.status) + ": " + excerpt(result.body),
                std::to_string(result.status));
  }
  return parse_chat_reply(result.body, effective);
}

RemoteEmbedder::RemoteEmbedder(RemoteConfig config, std::string model, std::size_t dimension,
                               std::shared_ptr<HttpTransport> transport)
    : config_(std::move(config)),
      model_(std::move(model)),
      dimension_(dimension),
      transport_(transport ? std::move(transport) : std::make_shared<HttplibTransport>()) {}

std::string RemoteEmbedder::identity() const {
  return "remote:" + model_ + ":" + std::to_string(dimension_);
}

std::vector<double> RemoteEmbedder::embed(std::string_view text) const {
  if (text.empty()) throw Error(ErrorCode::EmptyText, "cannot embed empty text");
  const auto url = endpoint_url(config_.endpoint, "/embeddings");
  const auto body = json{{"model", model_}, {"input", std::string(text)}}.dump();
  const auto result = transport_->post(url, auth_headers(config_), body);
  if (!result.delivered) {
    throw Error(ErrorCode::EmbedderFailure, "embedding request failed: " + result.error, url);
  }
  if (result.status < 200 || result.status >= 300) {
    throw Error(ErrorCode::EmbedderFailure,
                "embedding endpoint returned HTTP " + std::to_string(result.status), url);
  }
  try {
    auto v = json::parse(result.body).at("data").at(0).at("embedding").get<std::vector<double>>();
    if (v.size() != dimension_) {
      throw Error(ErrorCode::EmbedderFailure,
                  "embedding has " + std::to_string(v.size()) + " values, expected " +
                      std::to_string(dimension_));
    }
    return v;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::EmbedderFailure, std::string("malformed embedding reply: ") + e.what());
  }
}

}  // namespace foamagent::llm
