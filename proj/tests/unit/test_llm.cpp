#include <doctest.h>

#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "common/error.hpp"
#include "llm/mock.hpp"
#include "llm/remote.hpp"

using namespace foamagent;
using namespace foamagent::llm;
using nlohmann::json;

namespace {

ChatRequest user_request(const std::string& text) {
  ChatRequest r;
  r.messages = {{Role::System, "sys"}, {Role::User, text}};
  return r;
}

class FakeTransport final : public HttpTransport {
 public:
  std::vector<HttpResult> replies;
  std::vector<std::string> urls;
  std::vector<std::string> bodies;
  Headers last_headers;

  HttpResult post(const std::string& url, const Headers& headers, const std::string& body) override {
    urls.push_back(url);
    bodies.push_back(body);
    last_headers = headers;
    const auto i = std::min(urls.size() - 1, replies.size() - 1);
    return replies[i];
  }
};

const std::string kReply =
    R"({"choices":[{"message":{"role":"assistant","content":"hello"}}],)"
    R"("usage":{"prompt_tokens":11,"completion_tokens":3}})";

}  // namespace

TEST_CASE("usage ledger") {
  UsageLedger ledger;
  ledger.record("Architect", {100, 20});
  ledger.record("InputWriter", {50, 5});
  ledger.record("Architect", {1, 2});
  CHECK(ledger.totals() == UsageRecord{151, 27});
  CHECK(ledger.total_tokens() == 178);
  CHECK(ledger.by_label().at("Architect") == UsageRecord{101, 22});
  CHECK(ledger.entries().size() == 3);

  std::uint64_t sum = 0;
  for (const auto& [label, u] : ledger.by_label()) sum += u.total();
  CHECK(sum == ledger.total_tokens());

  const auto next = record_usage(ledger, "Reviewer", {9, 1});
  CHECK(next.total_tokens() == 188);
  CHECK(ledger.total_tokens() == 178);
}

TEST_CASE("cost and token estimates") {
  CHECK(std::abs(estimate_cost(44045, 5.0) - 0.22) <= 0.005);
  CHECK(estimate_cost(1'000'000, 5.0) == doctest::Approx(5.0));
  CHECK(approx_tokens(0) == 0);
  CHECK(approx_tokens(1) == 1);
  CHECK(approx_tokens(8) == 2);
  CHECK(approx_tokens(9) == 3);
}

TEST_CASE("request validation") {
  CHECK_NOTHROW(validate(user_request("x")));
  ChatRequest empty;
  CHECK_THROWS_AS(validate(empty), Error);
  auto r = user_request("x");
  r.messages.push_back({Role::Assistant, "y"});
  CHECK_THROWS_AS(validate(r), Error);
  r = user_request("x");
  r.params.temperature = 1.5;
  CHECK_THROWS_AS(validate(r), Error);
  r = user_request("x");
  r.params.max_output_tokens = 0;
  CHECK_THROWS_AS(validate(r), Error);
}

TEST_CASE("mock backend replays its script") {
  auto script = parse_script(json::parse(R"([
    {"match": "alpha", "reply": "one", "usage": {"prompt_tokens": 10, "completion_tokens": 2}},
    {"reply": "two", "repeat": 2},
    {"match": "gamma", "reply": "three"}
  ])"));
  MockBackend mock(script);
  CHECK(mock.remaining() == 4);
  const auto a = mock.complete(user_request("alpha beta"));
  CHECK(a.text == "one");
  CHECK(a.usage == UsageRecord{10, 2});
  CHECK(mock.complete(user_request("anything")).text == "two");
  const auto b = mock.complete(user_request("12345678"));
  CHECK(b.text == "two");
  CHECK(b.usage.completion_tokens == 1);
  CHECK(mock.remaining() == 1);

  try {
    mock.complete(user_request("delta"));
    FAIL("expected ScriptMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ScriptMismatch);
    CHECK(e.detail() == "gamma");
  }
  CHECK(mock.complete(user_request("gamma")).text == "three");
  try {
    mock.complete(user_request("gamma"));
    FAIL("expected BackendScriptExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BackendScriptExhausted);
  }
  CHECK(mock.requests().size() == 6);
  CHECK(parse_script(script_to_json(script)).size() == 3);
}

TEST_CASE("chat-completions wire format") {
  auto req = user_request("hi");
  req.params = {"gpt-4o", 0.01, 256};
  const auto body = json::parse(chat_request_body(req));
  CHECK(body["model"] == "gpt-4o");
  CHECK(body["temperature"].get<double>() == doctest::Approx(0.01));
  CHECK(body["max_tokens"] == 256);
  CHECK(body["messages"][0]["role"] == "system");
  CHECK(body["messages"][1]["content"] == "hi");

  const auto c = parse_chat_reply(kReply, req);
  CHECK(c.text == "hello");
  CHECK(c.usage == UsageRecord{11, 3});
  const auto fallback = parse_chat_reply(R"({"choices":[{"message":{"content":"abcdefgh"}}]})", req);
  CHECK(fallback.usage.completion_tokens == 2);
  CHECK(fallback.usage.prompt_tokens == approx_tokens(req.joined_text().size()));
  CHECK_THROWS_AS(parse_chat_reply("not json", req), Error);
  CHECK_THROWS_AS(parse_chat_reply(R"({"choices":[]})", req), Error);

  CHECK(endpoint_url("https://api.openai.com/v1", "/chat/completions") ==
        "https://api.openai.com/v1/chat/completions");
  CHECK(endpoint_url("http://h/v1/chat/completions/", "/chat/completions") == "http://h/v1/chat/completions");
}

TEST_CASE("remote backend retries transport failures only") {
  std::vector<std::chrono::milliseconds> slept;
  auto sleeper = [&](std::chrono::milliseconds d) { slept.push_back(d); };
  RemoteConfig cfg;
  cfg.endpoint = "http://example.invalid/v1";
  cfg.api_key = "sk-test";

  SUBCASE("two drops then success") {
    auto t = std::make_shared<FakeTransport>();
    t->replies = {{false, 0, "", "reset"}, {false, 0, "", "reset"}, {true, 200, kReply, ""}};
    RemoteBackend backend(cfg, t, sleeper);
    CHECK(backend.complete(user_request("x")).text == "hello");
    CHECK(t->urls.size() == 3);
    CHECK(t->urls[0] == "http://example.invalid/v1/chat/completions");
    CHECK(slept == std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(1000),
                                                          std::chrono::milliseconds(2000)});
    REQUIRE(t->last_headers.size() == 1);
    CHECK(t->last_headers[0].second == "Bearer sk-test");
  }
  SUBCASE("retries exhausted") {
    auto t = std::make_shared<FakeTransport>();
    t->replies = {{false, 0, "", "refused"}};
    RemoteBackend backend(cfg, t, sleeper);
    try {
      backend.complete(user_request("x"));
      FAIL("expected TransportError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TransportError);
    }
    CHECK(t->urls.size() == 4);
    CHECK(slept.size() == 3);
  }
  SUBCASE("HTTP error is not retried") {
    auto t = std::make_shared<FakeTransport>();
    t->replies = {{true, 429, R"({"error":"rate"})", ""}};
    RemoteBackend backend(cfg, t, sleeper);
    try {
      backend.complete(user_request("x"));
      FAIL("expected ProviderError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ProviderError);
      CHECK(e.detail() == "429");
    }
    CHECK(t->urls.size() == 1);
    CHECK(slept.empty());
  }
}

TEST_CASE("remote backend against a local server") {
  httplib::Server server;
  std::string seen_body;
  std::string seen_auth;
  server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    seen_body = req.body;
    seen_auth = req.get_header_value("Authorization");
    res.set_content(kReply, "application/json");
  });
  server.Post("/v1/embeddings", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"data":[{"embedding":[0.6,0.8]}]})", "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  RemoteConfig cfg;
  cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1";
  cfg.api_key = "k";
  RemoteBackend backend(cfg);
  const auto c = complete_chat(user_request("ping"), backend);
  CHECK(c.text == "hello");
  CHECK(c.usage.total() == 14);
  CHECK(seen_auth == "Bearer k");
  CHECK(json::parse(seen_body)["messages"][1]["content"] == "ping");

  RemoteEmbedder emb(cfg, "text-embedding-3-small", 2);
  CHECK(emb.embed("abc") == std::vector<double>{0.6, 0.8});
  CHECK(emb.identity() == "remote:text-embedding-3-small:2");
  RemoteEmbedder wrong(cfg, "m", 3);
  CHECK_THROWS_AS(wrong.embed("abc"), Error);

  server.stop();
  worker.join();
}
