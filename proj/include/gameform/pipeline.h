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

#ifndef GAMEFORM_PIPELINE_H_
#define GAMEFORM_PIPELINE_H_

#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "gameform/parser.h"

namespace gameform {

// Stored with every result so recorded runs can be matched to the wording
// that produced them.
inline constexpr const char* kPromptTemplateVersion = "gameform-prompt-v1";

enum class PromptMode {
  kZeroShot,
  kOneShot,
  kRepair,  // self-correction request built from a syntax report
};

const char* ToString(PromptMode mode);

struct ChatMessage {
  std::string role;  // "system" or "user"
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct PromptBundle {
  std::string system_text;
  std::string user_text;
  PromptMode mode = PromptMode::kZeroShot;
  std::string gamma_src;
  std::optional<std::string> example_nl;
  std::optional<std::string> example_xi;
  std::string target_nl;
  std::string template_version = kPromptTemplateVersion;

  std::vector<ChatMessage> messages() const;

  friend bool operator==(const PromptBundle&, const PromptBundle&) = default;
};

// A worked description/program pair for one-shot prompting.
struct Example {
  std::string nl;
  std::string xi;
};

// Thrown by BuildPrompt when the example program fails the syntax check.
class InvalidExampleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

PromptBundle BuildPrompt(std::string_view gamma_src,
                         const std::optional<Example>& example,
                         std::string_view target_nl);

// Prompt asking the model to fix `previous_code`, listing every error with
// its position plus the dialect rules that apply to the observed errors.
PromptBundle RepairPrompt(std::string_view previous_code,
                          const SyntaxReport& report);

// The standard Prisoner's Dilemma description paired with the canonical
// program, used as the default one-shot example.
Example DefaultExample();

class CodeExtractionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Pulls program text out of a model reply: all fenced code blocks joined in
// order, or else the longest run of lines that parses as clauses.
std::string ExtractCode(std::string_view raw_response);

struct LlmConfig {
  std::string model_name = "gpt-4o";
  double temperature = 1.0;
  int max_output_tokens = 1024;
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  double timeout_seconds = 120;
  int max_attempts = 5;
  // Name of the environment variable holding the API key. The key itself
  // never appears in configuration.
  std::string api_key_env = "OPENAI_API_KEY";
  bool strict = false;         // singleton warnings fail the syntax gate
  bool fresh_restart = false;  // last attempt re-sends the translate prompt
  int transport_retries = 3;
  int backoff_ms = 500;        // doubled after every failed transport try
  int workers = 1;

  // Throws std::invalid_argument on out-of-range values.
  void Validate() const;
};

// Parses "key = value" lines; '#' starts a comment. Unknown keys and
// malformed values throw std::invalid_argument with the line number.
LlmConfig ParseConfig(std::string_view text, LlmConfig base = {});
LlmConfig LoadConfig(const std::string& path, LlmConfig base = {});

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 1.0;
  int max_tokens = 1024;

  nlohmann::json ToJson() const;
  static ChatRequest FromJson(const nlohmann::json& j);

  friend bool operator==(const ChatRequest&, const ChatRequest&) = default;
};

// Identifies one model call within a run.
struct CallContext {
  std::string description_id;
  int attempt_index = 1;  // 1-based formalization attempt
};

// A failed model call. Retryable errors (network, timeouts, 5xx) are tried
// again with backoff; the others fail the description at once.
class ChatError : public std::runtime_error {
 public:
  ChatError(const std::string& message, bool retryable)
      : std::runtime_error(message), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  // Returns the assistant message text. Throws ChatError. Must be safe to
  // call from several threads at once.
  virtual std::string Complete(const ChatRequest& request,
                               const CallContext& context) = 0;
};

// OpenAI-compatible chat-completions client over HTTP(S).
class HttpChatClient : public ChatClient {
 public:
  // `api_key` may be empty for local endpoints that need no auth.
  HttpChatClient(std::string endpoint, std::string api_key,
                 double timeout_seconds);
  std::string Complete(const ChatRequest& request,
                       const CallContext& context) override;

 private:
  std::string scheme_host_port_;
  std::string path_;
  std::string api_key_;
  double timeout_seconds_;
};

// Builds an HttpChatClient from the configuration, reading the key from the
// configured environment variable.
HttpChatClient MakeHttpClient(const LlmConfig& config);

struct TranscriptRecord {
  std::string timestamp;  // ISO-8601 UTC
  std::string description_id;
  int attempt_index = 1;
  nlohmann::json request;   // ChatRequest JSON
  nlohmann::json response;  // null (pending), {"content":..} or {"error":..}

  nlohmann::ordered_json ToJson() const;
  static TranscriptRecord FromJson(const nlohmann::json& j);
};

// In-memory view of a JSON-lines transcript.
class Transcript {
 public:
  static Transcript Parse(std::string_view jsonl);
  static Transcript Load(const std::string& path);

  const std::vector<TranscriptRecord>& records() const { return records_; }
  // Last record with a non-null response for the call, if any.
  const TranscriptRecord* Find(const std::string& description_id,
                               int attempt_index) const;

 private:
  std::vector<TranscriptRecord> records_;
  std::map<std::pair<std::string, int>, size_t> latest_;
};

// Append-only JSON-lines writer; one line per record, flushed immediately.
class TranscriptWriter {
 public:
  explicit TranscriptWriter(std::string path);
  void Append(const TranscriptRecord& record);

 private:
  std::string path_;
  std::mutex mu_;
};

// Serves responses from a transcript. With `verify_requests`, a recorded
// request must equal the one being made.
class ReplayChatClient : public ChatClient {
 public:
  explicit ReplayChatClient(Transcript transcript,
                            bool verify_requests = true);
  std::string Complete(const ChatRequest& request,
                       const CallContext& context) override;

 private:
  Transcript transcript_;
  bool verify_requests_;
};

// Logs every request before forwarding it, then logs the response or error.
class RecordingChatClient : public ChatClient {
 public:
  RecordingChatClient(ChatClient& inner, TranscriptWriter& writer);
  std::string Complete(const ChatRequest& request,
                       const CallContext& context) override;

 private:
  ChatClient& inner_;
  TranscriptWriter& writer_;
};

enum class FormalizationStatus {
  kOkFirstTry,
  kOkAfterRepair,
  kFailedSyntax,
  kLlmError,
};

const char* ToString(FormalizationStatus status);
std::optional<FormalizationStatus> ParseFormalizationStatus(
    std::string_view name);

struct Attempt {
  std::string kind;  // "translate" or "self_correct"
  PromptBundle prompt;
  std::string raw_response;
  std::string extracted_code;
  SyntaxReport report;
};

struct FormalizationResult {
  std::string description_id;
  std::optional<std::string> final_program;
  std::vector<Attempt> attempts;
  FormalizationStatus status = FormalizationStatus::kLlmError;
  bool first_attempt_syntax_ok = false;
  int llm_calls = 0;  // including transport retries
  std::string error;  // set for llm_error
  std::string template_version = kPromptTemplateVersion;
};

nlohmann::json ToJson(const FormalizationResult& r);

// Runs the translate / check / self-correct loop for one description.
FormalizationResult Formalize(const std::string& description_id,
                              std::string_view target_nl, ChatClient& llm,
                              const LlmConfig& config,
                              std::string_view gamma_src,
                              const std::optional<Example>& example);

struct FormalizationTask {
  std::string description_id;
  std::string target_nl;
};

// Formalizes independent descriptions on `config.workers` threads. Results
// keep the order of `tasks`. The first exception other than a ChatError
// (for example a transcript I/O failure) stops the batch and is rethrown.
std::vector<FormalizationResult> FormalizeBatch(
    const std::vector<FormalizationTask>& tasks, ChatClient& llm,
    const LlmConfig& config, std::string_view gamma_src,
    const std::optional<Example>& example);

// Current UTC time as "2026-01-31T12:00:00Z".
std::string UtcTimestamp();

}  // namespace gameform

#endif  // GAMEFORM_PIPELINE_H_
