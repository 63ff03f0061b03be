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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

#include "gameform/pipeline.h"

namespace gameform {
namespace {

struct StatusName {
  FormalizationStatus status;
  const char* name;
};

constexpr StatusName kStatusNames[] = {
    {FormalizationStatus::kOkFirstTry, "ok_first_try"},
    {FormalizationStatus::kOkAfterRepair, "ok_after_repair"},
    {FormalizationStatus::kFailedSyntax, "failed_syntax"},
    {FormalizationStatus::kLlmError, "llm_error"},
};

// Calls the model, retrying transport failures with exponential backoff.
// Retries do not count as formalization attempts.
std::string CallWithRetries(ChatClient& llm, const ChatRequest& request,
                            const CallContext& context,
                            const LlmConfig& config, int& calls) {
  for (int attempt = 0;; ++attempt) {
    ++calls;
    try {
      return llm.Complete(request, context);
    } catch (const ChatError& e) {
      if (!e.retryable() || attempt >= config.transport_retries) throw;
      std::this_thread::sleep_for(
          std::chrono::milliseconds(config.backoff_ms << attempt));
    }
  }
}

nlohmann::ordered_json PromptJson(const PromptBundle& p) {
  nlohmann::ordered_json j;
  j["mode"] = ToString(p.mode);
  j["template_version"] = p.template_version;
  j["system_text"] = p.system_text;
  j["user_text"] = p.user_text;
  return j;
}

}  // namespace

const char* ToString(FormalizationStatus status) {
  for (const auto& s : kStatusNames) {
    if (s.status == status) return s.name;
  }
  return "unknown";
}

std::optional<FormalizationStatus> ParseFormalizationStatus(
    std::string_view name) {
  for (const auto& s : kStatusNames) {
    if (name == s.name) return s.status;
  }
  return std::nullopt;
}

nlohmann::json ToJson(const FormalizationResult& r) {
  nlohmann::ordered_json j;
  j["description_id"] = r.description_id;
  j["status"] = ToString(r.status);
  j["first_attempt_syntax_ok"] = r.first_attempt_syntax_ok;
  j["final_program"] = r.final_program ? nlohmann::ordered_json(*r.final_program)
                                       : nlohmann::ordered_json(nullptr);
  j["llm_calls"] = r.llm_calls;
  j["template_version"] = r.template_version;
  if (!r.error.empty()) j["error"] = r.error;
  nlohmann::ordered_json attempts = nlohmann::ordered_json::array();
  for (const Attempt& a : r.attempts) {
    nlohmann::ordered_json aj;
    aj["kind"] = a.kind;
    aj["prompt"] = PromptJson(a.prompt);
    aj["raw_response"] = a.raw_response;
    aj["extracted_code"] = a.extracted_code;
    aj["report"] = nlohmann::ordered_json::parse(ToJson(a.report).dump());
    attempts.push_back(aj);
  }
  j["attempts"] = attempts;
  return nlohmann::json::parse(j.dump());
}

FormalizationResult Formalize(const std::string& description_id,
                              std::string_view target_nl, ChatClient& llm,
                              const LlmConfig& config,
                              std::string_view gamma_src,
                              const std::optional<Example>& example) {
  config.Validate();
  FormalizationResult result;
  result.description_id = description_id;
  const PromptBundle translate = BuildPrompt(gamma_src, example, target_nl);

  for (int k = 1; k <= config.max_attempts; ++k) {
    bool restart = config.fresh_restart && k == config.max_attempts && k > 1;
    Attempt attempt;
    if (k == 1 || restart) {
      attempt.kind = "translate";
      attempt.prompt = translate;
    } else {
      const Attempt& last = result.attempts.back();
      attempt.kind = "self_correct";
      // Without extracted code the model gets its whole reply back.
      attempt.prompt = RepairPrompt(
          last.extracted_code.empty() ? last.raw_response : last.extracted_code,
          last.report);
    }
    ChatRequest request{config.model_name, attempt.prompt.messages(),
                        config.temperature, config.max_output_tokens};
    try {
      attempt.raw_response = CallWithRetries(
          llm, request, {description_id, k}, config, result.llm_calls);
    } catch (const ChatError& e) {
      result.status = FormalizationStatus::kLlmError;
      result.error = e.what();
      return result;
    }
    try {
      attempt.extracted_code = ExtractCode(attempt.raw_response);
      attempt.report = CheckSyntax(attempt.extracted_code, config.strict);
    } catch (const CodeExtractionError& e) {
      attempt.report.ok = false;
      attempt.report.errors.push_back(
          {std::string("no code found in the response: ") + e.what(), Span{},
           "extraction"});
    }
    bool ok = attempt.report.ok;
    if (k == 1) result.first_attempt_syntax_ok = ok;
    result.attempts.push_back(std::move(attempt));
    if (ok) {
      result.final_program = result.attempts.back().extracted_code;
      result.status = k == 1 ? FormalizationStatus::kOkFirstTry
                             : FormalizationStatus::kOkAfterRepair;
      return result;
    }
  }
  result.status = FormalizationStatus::kFailedSyntax;
  result.error =
      "unable to generate valid predicates within " +
      std::to_string(config.max_attempts) + " attempts";
  return result;
}

std::vector<FormalizationResult> FormalizeBatch(
    const std::vector<FormalizationTask>& tasks, ChatClient& llm,
    const LlmConfig& config, std::string_view gamma_src,
    const std::optional<Example>& example) {
  config.Validate();
  BuildPrompt(gamma_src, example, "");  // rejects a bad example up front
  const size_t n = tasks.size();
  std::vector<FormalizationResult> results(n);
  std::atomic<size_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;
  auto work = [&] {
    for (size_t i = next++; i < n; i = next++) {
      try {
        results[i] = Formalize(tasks[i].description_id, tasks[i].target_nl,
                               llm, config, gamma_src, example);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        next = n;
        return;
      }
    }
  };
  size_t width = std::min<size_t>(config.workers, std::max<size_t>(n, 1));
  if (width <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < width; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace gameform
