// Copyright 2026 The gameform Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <string>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "gameform/engine.h"
#include "gameform/games.h"
#include "gameform/pipeline.h"

namespace gameform {
namespace {

// Local chat-completions stand-in. Fails the first `failures` calls with
// `fail_status`, then answers with the canonical dilemma.
class FakeServer {
 public:
  FakeServer(int failures, int fail_status)
      : failures_(failures), fail_status_(fail_status) {
    server_.Post("/v1/chat/completions",
                 [this](const httplib::Request& req, httplib::Response& res) {
                   int n = hits_++;
                   last_auth_ = req.get_header_value("Authorization");
                   last_body_ = req.body;
                   if (n < failures_) {
                     res.status = fail_status_;
                     res.set_content("{\"error\":\"nope\"}",
                                     "application/json");
                     return;
                   }
                   std::string code(
                       CanonicalSource(GameClass::kPrisonersDilemma));
                   nlohmann::json body = {
                       {"choices",
                        {{{"message",
                           {{"role", "assistant"},
                            {"content", "```prolog\n" + code + "```"}}}}}}};
                   res.set_content(body.dump(), "application/json");
                 });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeServer() {
    server_.stop();
    thread_.join();
  }

  std::string endpoint() const {
    return "http://127.0.0.1:" + std::to_string(port_) +
           "/v1/chat/completions";
  }
  int hits() const { return hits_; }
  std::string last_auth() const { return last_auth_; }
  std::string last_body() const { return last_body_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  int failures_;
  int fail_status_;
  std::atomic<int> hits_{0};
  std::string last_auth_;
  std::string last_body_;
};

LlmConfig ConfigFor(const FakeServer& s) {
  LlmConfig c;
  c.endpoint = s.endpoint();
  c.backoff_ms = 1;
  c.timeout_seconds = 10;
  return c;
}

TEST_CASE("http client sends an OpenAI-style request") {
  FakeServer server(0, 200);
  HttpChatClient client(server.endpoint(), "test-key", 10);
  ChatRequest req{"gpt-4o", {{"system", "s"}, {"user", "u"}}, 1.0, 1024};
  std::string content = client.Complete(req, {"x", 1});
  CHECK(content.find("payoff('C', 'C', 65, 65).") != std::string::npos);
  CHECK(server.last_auth() == "Bearer test-key");
  auto body = nlohmann::json::parse(server.last_body());
  CHECK(body["model"] == "gpt-4o");
  CHECK(body["messages"][1]["content"] == "u");
  CHECK(body["max_tokens"] == 1024);
}

TEST_CASE("the key is read from the configured environment variable") {
  FakeServer server(0, 200);
  LlmConfig c = ConfigFor(server);
  c.api_key_env = "GAMEFORM_TEST_KEY";
  setenv("GAMEFORM_TEST_KEY", "from-env", 1);
  HttpChatClient client = MakeHttpClient(c);
  client.Complete({"m", {{"user", "u"}}, 1.0, 16}, {"x", 1});
  CHECK(server.last_auth() == "Bearer from-env");
  unsetenv("GAMEFORM_TEST_KEY");
  HttpChatClient anonymous = MakeHttpClient(c);
  anonymous.Complete({"m", {{"user", "u"}}, 1.0, 16}, {"x", 1});
  CHECK(server.last_auth().empty());
}

TEST_CASE("server errors are retried and succeed within the budget") {
  FakeServer server(2, 500);
  LlmConfig c = ConfigFor(server);
  HttpChatClient client(c.endpoint, "", c.timeout_seconds);
  FormalizationResult r = Formalize(
      "x", "d", client, c, GameIndependentSource(), std::nullopt);
  CHECK(r.status == FormalizationStatus::kOkFirstTry);
  CHECK(server.hits() == 3);
  CHECK(r.llm_calls == 3);
}

TEST_CASE("rate limiting is retryable") {
  FakeServer server(1, 429);
  LlmConfig c = ConfigFor(server);
  HttpChatClient client(c.endpoint, "", c.timeout_seconds);
  CHECK(Formalize("x", "d", client, c, GameIndependentSource(), std::nullopt)
            .status == FormalizationStatus::kOkFirstTry);
}

TEST_CASE("authentication failure is not retried") {
  FakeServer server(100, 401);
  LlmConfig c = ConfigFor(server);
  HttpChatClient client(c.endpoint, "bad", c.timeout_seconds);
  FormalizationResult r = Formalize(
      "x", "d", client, c, GameIndependentSource(), std::nullopt);
  CHECK(r.status == FormalizationStatus::kLlmError);
  CHECK(server.hits() == 1);
  CHECK(r.error.find("HTTP 401") != std::string::npos);
}

TEST_CASE("an unreachable endpoint is a retryable transport error") {
  int port;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  HttpChatClient client(
      "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions", "",
      2);
  try {
    client.Complete({"m", {{"user", "u"}}, 1.0, 16}, {"x", 1});
    FAIL("expected a transport error");
  } catch (const ChatError& e) {
    CHECK(e.retryable());
  }
}

TEST_CASE("a malformed endpoint is rejected") {
  CHECK_THROWS_AS(HttpChatClient("localhost:8080", "", 1),
                  std::invalid_argument);
}

}  // namespace
}  // namespace gameform
