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

// Chat clients, configuration and transcripts.

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "httplib.h"
#include "gameform/pipeline.h"

namespace gameform {
namespace {

std::string Trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void BadConfig(int line, const std::string& message) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " +
                              message);
}

int ToInt(const std::string& v, int line, const std::string& key) {
  try {
    size_t used = 0;
    int out = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    BadConfig(line, key + " must be an integer, got '" + v + "'");
  }
}

double ToDouble(const std::string& v, int line, const std::string& key) {
  try {
    size_t used = 0;
    double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    BadConfig(line, key + " must be a number, got '" + v + "'");
  }
}

bool ToBool(const std::string& v, int line, const std::string& key) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  BadConfig(line, key + " must be true or false, got '" + v + "'");
}

std::string Unquote(const std::string& v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') &&
      v.back() == v.front()) {
    return v.substr(1, v.size() - 2);
  }
  return v;
}

}  // namespace

void LlmConfig::Validate() const {
  if (max_attempts < 1) {
    throw std::invalid_argument("max_attempts must be at least 1");
  }
  if (temperature < 0) {
    throw std::invalid_argument("temperature must not be negative");
  }
  if (max_output_tokens < 1) {
    throw std::invalid_argument("max_output_tokens must be at least 1");
  }
  if (timeout_seconds <= 0) {
    throw std::invalid_argument("timeout_seconds must be positive");
  }
  if (transport_retries < 0 || backoff_ms < 0) {
    throw std::invalid_argument(
        "transport_retries and backoff_ms must not be negative");
  }
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");
}

LlmConfig ParseConfig(std::string_view text, LlmConfig c) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    size_t hash = raw.find('#');
    std::string content = Trim(raw.substr(0, hash));
    if (content.empty()) continue;
    size_t eq = content.find('=');
    if (eq == std::string::npos) BadConfig(line, "expected 'key = value'");
    std::string key = Trim(content.substr(0, eq));
    std::string value = Unquote(Trim(content.substr(eq + 1)));
    if (key == "model" || key == "model_name") {
      c.model_name = value;
    } else if (key == "temperature") {
      c.temperature = ToDouble(value, line, key);
    } else if (key == "max_output_tokens") {
      c.max_output_tokens = ToInt(value, line, key);
    } else if (key == "endpoint") {
      c.endpoint = value;
    } else if (key == "timeout_seconds" || key == "timeout") {
      c.timeout_seconds = ToDouble(value, line, key);
    } else if (key == "max_attempts") {
      c.max_attempts = ToInt(value, line, key);
    } else if (key == "api_key_env") {
      c.api_key_env = value;
    } else if (key == "strict") {
      c.strict = ToBool(value, line, key);
    } else if (key == "fresh_restart") {
      c.fresh_restart = ToBool(value, line, key);
    } else if (key == "transport_retries") {
      c.transport_retries = ToInt(value, line, key);
    } else if (key == "backoff_ms") {
      c.backoff_ms = ToInt(value, line, key);
    } else if (key == "workers") {
      c.workers = ToInt(value, line, key);
    } else if (key == "api_key") {
      BadConfig(line,
                "API keys are read from the environment only; set "
                "api_key_env to the variable's name");
    } else {
      BadConfig(line, "unknown key '" + key + "'");
    }
  }
  c.Validate();
  return c;
}

LlmConfig LoadConfig(const std::string& path, LlmConfig base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseConfig(ss.str(), std::move(base));
}

nlohmann::json ChatRequest::ToJson() const {
  nlohmann::json msgs = nlohmann::json::array();
  for (const ChatMessage& m : messages) {
    msgs.push_back({{"role", m.role}, {"content", m.content}});
  }
  return {{"model", model},
          {"messages", msgs},
          {"temperature", temperature},
          {"max_tokens", max_tokens}};
}

ChatRequest ChatRequest::FromJson(const nlohmann::json& j) {
  ChatRequest r;
  r.model = j.at("model").get<std::string>();
  for (const auto& m : j.at("messages")) {
    r.messages.push_back({m.at("role").get<std::string>(),
                          m.at("content").get<std::string>()});
  }
  r.temperature = j.at("temperature").get<double>();
  r.max_tokens = j.at("max_tokens").get<int>();
  return r;
}

HttpChatClient::HttpChatClient(std::string endpoint, std::string api_key,
                               double timeout_seconds)
    : api_key_(std::move(api_key)), timeout_seconds_(timeout_seconds) {
  size_t scheme = endpoint.find("://");
  if (scheme == std::string::npos) {
    throw std::invalid_argument("endpoint must start with http:// or https://");
  }
  size_t slash = endpoint.find('/', scheme + 3);
  scheme_host_port_ = endpoint.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : endpoint.substr(slash);
}

std::string HttpChatClient::Complete(const ChatRequest& request,
                                     const CallContext&) {
  httplib::Client client(scheme_host_port_);
  if (!client.is_valid()) {
    throw ChatError("unsupported endpoint " + scheme_host_port_, false);
  }
  auto seconds = static_cast<time_t>(timeout_seconds_);
  auto micros = static_cast<time_t>((timeout_seconds_ - seconds) * 1e6);
  client.set_connection_timeout(seconds, micros);
  client.set_read_timeout(seconds, micros);
  client.set_write_timeout(seconds, micros);
  httplib::Headers headers;
  if (!api_key_.empty()) {
    headers.emplace("Authorization", "Bearer " + api_key_);
  }
  auto res = client.Post(path_, headers, request.ToJson().dump(),
                         "application/json");
  if (!res) {
    throw ChatError("transport error: " + httplib::to_string(res.error()),
                    true);
  }
  if (res->status != 200) {
    bool retryable = res->status == 429 || res->status >= 500;
    throw ChatError("HTTP " + std::to_string(res->status) + ": " +
                        res->body.substr(0, 500),
                    retryable);
  }
  try {
    auto body = nlohmann::json::parse(res->body);
    return body.at("choices").at(0).at("message").at("content")
        .get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ChatError(std::string("malformed chat-completions response: ") +
                        e.what(),
                    false);
  }
}

HttpChatClient MakeHttpClient(const LlmConfig& config) {
  const char* key = std::getenv(config.api_key_env.c_str());
  return HttpChatClient(config.endpoint, key ? key : "",
                        config.timeout_seconds);
}

std::string UtcTimestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::ordered_json TranscriptRecord::ToJson() const {
  nlohmann::ordered_json j;
  j["timestamp"] = timestamp;
  j["description_id"] = description_id;
  j["attempt_index"] = attempt_index;
  j["request"] = nlohmann::ordered_json::parse(request.dump());
  j["response"] = nlohmann::ordered_json::parse(response.dump());
  return j;
}

TranscriptRecord TranscriptRecord::FromJson(const nlohmann::json& j) {
  TranscriptRecord r;
  r.timestamp = j.value("timestamp", "");
  r.description_id = j.at("description_id").get<std::string>();
  r.attempt_index = j.at("attempt_index").get<int>();
  r.request = j.value("request", nlohmann::json());
  r.response = j.value("response", nlohmann::json());
  return r;
}

Transcript Transcript::Parse(std::string_view jsonl) {
  Transcript t;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      t.records_.push_back(
          TranscriptRecord::FromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("transcript line " +
                                  std::to_string(number) + ": " + e.what());
    }
    const TranscriptRecord& r = t.records_.back();
    if (!r.response.is_null()) {
      t.latest_[{r.description_id, r.attempt_index}] = t.records_.size() - 1;
    }
  }
  return t;
}

Transcript Transcript::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read transcript " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str());
}

const TranscriptRecord* Transcript::Find(const std::string& description_id,
                                         int attempt_index) const {
  auto it = latest_.find({description_id, attempt_index});
  return it == latest_.end() ? nullptr : &records_[it->second];
}

TranscriptWriter::TranscriptWriter(std::string path) : path_(std::move(path)) {
  std::ofstream probe(path_, std::ios::app);
  if (!probe) throw std::invalid_argument("cannot write transcript " + path_);
}

void TranscriptWriter::Append(const TranscriptRecord& record) {
  std::string line = record.ToJson().dump() + "\n";
  std::lock_guard<std::mutex> lock(mu_);
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  out << line;
  out.flush();
  if (!out) throw std::runtime_error("failed to append to " + path_);
}

ReplayChatClient::ReplayChatClient(Transcript transcript, bool verify_requests)
    : transcript_(std::move(transcript)), verify_requests_(verify_requests) {}

std::string ReplayChatClient::Complete(const ChatRequest& request,
                                       const CallContext& context) {
  const TranscriptRecord* r =
      transcript_.Find(context.description_id, context.attempt_index);
  std::string where = "'" + context.description_id + "' attempt " +
                      std::to_string(context.attempt_index);
  if (r == nullptr) {
    throw ChatError("no recorded response for " + where, false);
  }
  if (verify_requests_ && !r->request.is_null() &&
      r->request != request.ToJson()) {
    throw ChatError("recorded request for " + where +
                        " differs from the request being replayed",
                    false);
  }
  if (r->response.contains("error")) {
    throw ChatError("recorded error for " + where + ": " +
                        r->response["error"].get<std::string>(),
                    false);
  }
  return r->response.at("content").get<std::string>();
}

RecordingChatClient::RecordingChatClient(ChatClient& inner,
                                         TranscriptWriter& writer)
    : inner_(inner), writer_(writer) {}

std::string RecordingChatClient::Complete(const ChatRequest& request,
                                          const CallContext& context) {
  TranscriptRecord record;
  record.timestamp = UtcTimestamp();
  record.description_id = context.description_id;
  record.attempt_index = context.attempt_index;
  record.request = request.ToJson();
  writer_.Append(record);  // before the call leaves the process
  try {
    std::string content = inner_.Complete(request, context);
    record.timestamp = UtcTimestamp();
    record.response = {{"content", content}};
    writer_.Append(record);
    return content;
  } catch (const ChatError& e) {
    record.timestamp = UtcTimestamp();
    record.response = {{"error", e.what()}};
    writer_.Append(record);
    throw;
  }
}

}  // namespace gameform
