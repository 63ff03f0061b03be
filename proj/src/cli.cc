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

#include "gameform/cli.h"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "gameform/corpus.h"
#include "gameform/engine.h"
#include "gameform/eval.h"
#include "gameform/games.h"
#include "gameform/parser.h"
#include "gameform/pipeline.h"

namespace gameform {
namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

// A usage problem found after argument parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

// Parses a game file, printing located errors to `err` when it is broken.
std::optional<Program> LoadProgram(const std::string& path, bool strict,
                                   std::ostream& err) {
  std::string text = ReadFile(path);
  auto [program, report] = ParseProgram(text, path);
  if (strict) report = CheckSyntax(text, true);
  if (report.ok) return program;
  for (const SyntaxError& e : report.errors) {
    err << path << ":" << e.span.line << ":" << e.span.col << ": "
        << e.message << "\n";
  }
  return std::nullopt;
}

void PrintJson(std::ostream& out, const nlohmann::json& j) {
  out << j.dump(2) << "\n";
}

nlohmann::json ErrorJson(const std::string& kind, const std::string& msg) {
  return {{"error", {{"kind", kind}, {"message", msg}}}};
}

EngineLimits Limits(uint64_t max_steps) {
  EngineLimits limits;
  limits.max_inference_steps = max_steps;
  return limits;
}

// Prints every answer to one query in the interactive format, then
// "false.".
void RunQuery(const Engine& engine, const std::string& text,
              const EngineLimits& limits, std::ostream& out) {
  Query query = engine.Solve(text, limits);
  while (auto s = query.Next()) {
    out << FormatSolution(*s) << " ;\n";
  }
  out << "false.\n";
}

// Model settings shared by formalize, eval and replay. Flags override the
// configuration file, which overrides the defaults.
struct LlmFlags {
  std::string config_path;
  std::string mode = "live";
  std::string transcript;
  bool no_verify = false;
  bool zero_shot = false;
  bool strict = false;
  bool fresh_restart = false;
  int max_attempts = 5;
  int workers = 1;
  std::string model;
  std::string endpoint;
  double temperature = 1;

  CLI::Option* strict_opt = nullptr;
  CLI::Option* fresh_opt = nullptr;
  CLI::Option* attempts_opt = nullptr;
  CLI::Option* workers_opt = nullptr;
  CLI::Option* model_opt = nullptr;
  CLI::Option* endpoint_opt = nullptr;
  CLI::Option* temperature_opt = nullptr;

  void Register(CLI::App* app, const std::string& default_mode) {
    mode = default_mode;
    app->add_option("--config", config_path,
                    "Configuration file (key = value lines)")
        ->check(CLI::ExistingFile);
    app->add_option("--mode", mode, "Model access: live or replay")
        ->check(CLI::IsMember({"live", "replay"}))
        ->capture_default_str();
    app->add_option("--transcript", transcript,
                    "Transcript to replay from, or to record to when live");
    app->add_flag("--no-verify", no_verify,
                  "Replay without comparing recorded requests");
    app->add_flag("--zero-shot", zero_shot,
                  "Leave the worked example out of the prompt");
    strict_opt = app->add_flag("--strict", strict,
                               "Treat singleton variables as errors");
    fresh_opt = app->add_flag("--fresh-restart", fresh_restart,
                              "Re-send the translation prompt last");
    attempts_opt = app->add_option("--max-attempts", max_attempts,
                                   "Formalization attempts per description")
                       ->check(CLI::PositiveNumber);
    workers_opt = app->add_option("--workers", workers,
                                  "Descriptions processed in parallel")
                      ->check(CLI::PositiveNumber);
    model_opt = app->add_option("--model", model, "Model name");
    endpoint_opt =
        app->add_option("--endpoint", endpoint, "Chat-completions URL");
    temperature_opt =
        app->add_option("--temperature", temperature, "Sampling temperature")
            ->check(CLI::NonNegativeNumber);
  }

  LlmConfig Config() const {
    LlmConfig c;
    if (!config_path.empty()) c = LoadConfig(config_path);
    if (strict_opt->count()) c.strict = true;
    if (fresh_opt->count()) c.fresh_restart = true;
    if (attempts_opt->count()) c.max_attempts = max_attempts;
    if (workers_opt->count()) c.workers = workers;
    if (model_opt->count()) c.model_name = model;
    if (endpoint_opt->count()) c.endpoint = endpoint;
    if (temperature_opt->count()) c.temperature = temperature;
    c.Validate();
    return c;
  }

  std::optional<Example> MakeExample() const {
    if (zero_shot) return std::nullopt;
    return DefaultExample();
  }
};

// The chat client chosen by the flags, with its transcript plumbing.
class ClientStack {
 public:
  ClientStack(const LlmFlags& flags, const LlmConfig& config,
              std::ostream& err) {
    if (flags.mode == "replay") {
      if (flags.transcript.empty()) {
        throw UsageError("--mode replay needs --transcript");
      }
      base_ = std::make_unique<ReplayChatClient>(
          Transcript::Load(flags.transcript), !flags.no_verify);
      return;
    }
    if (std::getenv(config.api_key_env.c_str()) == nullptr) {
      err << "warning: environment variable " << config.api_key_env
          << " is not set; sending requests without a key\n";
    }
    base_ = std::make_unique<HttpChatClient>(MakeHttpClient(config));
    if (!flags.transcript.empty()) {
      writer_ = std::make_unique<TranscriptWriter>(flags.transcript);
      recorder_ = std::make_unique<RecordingChatClient>(*base_, *writer_);
    }
  }

  ChatClient& client() { return recorder_ ? *recorder_ : *base_; }

 private:
  std::unique_ptr<ChatClient> base_;
  std::unique_ptr<TranscriptWriter> writer_;
  std::unique_ptr<ChatClient> recorder_;
};

bool Succeeded(const FormalizationResult& r) {
  return r.status == FormalizationStatus::kOkFirstTry ||
         r.status == FormalizationStatus::kOkAfterRepair;
}

// Records selected by --id, or all records when none is given.
std::vector<FormalizationTask> SelectTasks(const Manifest& m,
                                           const std::vector<std::string>& ids) {
  std::vector<FormalizationTask> tasks;
  if (ids.empty()) {
    for (const auto& r : m.records) tasks.push_back({r.id, r.text});
    return tasks;
  }
  for (const std::string& id : ids) {
    const DescriptionRecord* r = m.Find(id);
    if (r == nullptr) throw UsageError("no record with id '" + id + "'");
    tasks.push_back({r->id, r->text});
  }
  return tasks;
}

nlohmann::json ResultsJson(const std::vector<FormalizationResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) arr.push_back(ToJson(r));
  return arr;
}

std::string ClassNames() {
  std::string out;
  for (GameClass c : kAllGameClasses) {
    if (!out.empty()) out += ", ";
    out += ToString(c);
  }
  return out;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err, std::istream& in) {
  CLI::App app{"Game descriptions in a situation-calculus Prolog dialect: "
               "checking, solving, classifying and LLM formalization.",
               "gameform"};
  app.require_subcommand(1);
  app.fallthrough(false);

  // parse
  std::string file;
  bool strict = false;
  CLI::App* parse = app.add_subcommand(
      "parse", "Check a game file and print the syntax report as JSON");
  parse->add_option("file", file, "Game file")->required()->check(
      CLI::ExistingFile);
  parse->add_flag("--strict", strict, "Treat singleton variables as errors");

  // solve
  std::string query_text;
  bool no_builtin = false;
  uint64_t max_steps = EngineLimits{}.max_inference_steps;
  CLI::App* solve = app.add_subcommand(
      "solve", "Answer a query, or '?- Goal.' lines from stdin");
  solve->add_option("file", file, "Game file")->required()->check(
      CLI::ExistingFile);
  solve->add_option("--query,-q", query_text, "Query to answer");
  solve->add_flag("--no-builtin-rules", no_builtin,
                  "Do not load the game-independent rules");
  solve->add_option("--max-steps", max_steps, "Inference step limit")
      ->capture_default_str();

  // outcomes
  CLI::App* outcomes = app.add_subcommand(
      "outcomes", "Enumerate complete plays and their outcomes as JSON");
  outcomes->add_option("file", file, "Game file")->required()->check(
      CLI::ExistingFile);
  outcomes->add_option("--max-steps", max_steps, "Inference step limit")
      ->capture_default_str();

  // classify
  std::string expect;
  bool no_zero_sum = false, weak = false;
  CLI::App* classify = app.add_subcommand(
      "classify", "Extract the payoff matrix and classify the game");
  classify->add_option("file", file, "Game file")->required()->check(
      CLI::ExistingFile);
  classify->add_option("--expect", expect,
                       "Expected class; exit 1 unless the verdict is ok (" +
                           ClassNames() + ")");
  classify->add_flag("--no-zero-sum", no_zero_sum,
                     "Do not require zero-sum payoffs for matching pennies");
  classify->add_flag("--weak", weak, "Use >= instead of > in the orderings");
  classify->add_option("--max-steps", max_steps, "Inference step limit")
      ->capture_default_str();

  // formalize
  std::string text, text_file, manifest_path, id = "cli";
  std::vector<std::string> ids;
  LlmFlags formalize_flags;
  CLI::App* formalize = app.add_subcommand(
      "formalize", "Translate descriptions into game programs");
  formalize->add_option("--text", text, "Description text");
  formalize->add_option("--text-file", text_file, "File holding the description")
      ->check(CLI::ExistingFile);
  formalize->add_option("--manifest", manifest_path, "Description manifest")
      ->check(CLI::ExistingFile);
  formalize->add_option("--id", ids,
                        "Manifest record(s); with --text, the id to log");
  formalize_flags.Register(formalize, "live");

  // eval
  std::string json_out, markdown_out, format = "json";
  bool quiet = false;
  LlmFlags eval_flags;
  CLI::App* eval = app.add_subcommand(
      "eval", "Formalize a manifest and report accuracy");
  eval->add_option("--manifest", manifest_path, "Description manifest")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--json-out", json_out, "Write the JSON report here");
  eval->add_option("--markdown-out", markdown_out,
                   "Write the Markdown report here");
  eval->add_option("--format", format, "Report format on stdout")
      ->check(CLI::IsMember({"json", "markdown"}))
      ->capture_default_str();
  eval->add_flag("--no-zero-sum", no_zero_sum,
                 "Do not require zero-sum payoffs for matching pennies");
  eval->add_flag("--weak", weak, "Use >= instead of > in the orderings");
  eval->add_flag("--quiet", quiet, "No progress lines on stderr");
  eval_flags.Register(eval, "replay");

  // replay
  LlmFlags replay_flags;
  CLI::App* replay = app.add_subcommand(
      "replay", "Re-run formalization from a recorded transcript");
  replay->add_option("--manifest", manifest_path, "Description manifest")
      ->required()
      ->check(CLI::ExistingFile);
  replay->add_option("--id", ids, "Record(s) to replay; default all");
  replay_flags.Register(replay, "replay");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* shown = &app;
    for (const CLI::App* sub : app.get_subcommands()) shown = sub;
    err << shown->help();
    return kUsage;
  }

  const CLI::App* used = app.get_subcommands().front();
  try {
    if (used == parse) {
      SyntaxReport report = CheckSyntax(ReadFile(file), strict);
      PrintJson(out, ToJson(report));
      return report.ok ? kOk : kFailure;
    }

    if (used == solve) {
      auto program = LoadProgram(file, false, err);
      if (!program) return kFailure;
      Engine engine(*program, !no_builtin);
      EngineLimits limits = Limits(max_steps);
      if (!query_text.empty()) {
        try {
          RunQuery(engine, query_text, limits, out);
        } catch (const ParseError& e) {
          throw UsageError(std::string("query: ") + e.what());
        }
        return kOk;
      }
      int status = kOk;
      std::string line;
      while (std::getline(in, line)) {
        size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '%') continue;
        try {
          RunQuery(engine, line.substr(b), limits, out);
        } catch (const std::exception& e) {
          err << "error: " << e.what() << "\n";
          status = kFailure;
        }
      }
      return status;
    }

    if (used == outcomes) {
      auto program = LoadProgram(file, false, err);
      if (!program) return kFailure;
      try {
        auto list = EnumerateOutcomes(*program, Limits(max_steps));
        nlohmann::json arr = nlohmann::json::array();
        for (const Outcome& o : list) {
          arr.push_back(
              {{"trace", ToString(o.trace)}, {"outcome", ToString(o.outcome)}});
        }
        PrintJson(out, {{"count", list.size()}, {"outcomes", arr}});
        return kOk;
      } catch (const EngineError& e) {
        PrintJson(out, ErrorJson(ToString(e.kind()), e.what()));
        return kFailure;
      }
    }

    if (used == classify) {
      auto program = LoadProgram(file, false, err);
      if (!program) return kFailure;
      ClassifyOptions options;
      options.strict = !weak;
      options.require_zero_sum = !no_zero_sum;
      EngineLimits limits = Limits(max_steps);
      if (!expect.empty()) {
        auto cls = ParseGameClass(expect);
        if (!cls) {
          throw UsageError("unknown game class '" + expect +
                           "'; expected one of " + ClassNames());
        }
        SemanticVerdict v = CheckSemantics(*program, *cls, limits, options);
        PrintJson(out, ToJson(v));
        return v.ok ? kOk : kFailure;
      }
      try {
        PayoffMatrix m = ExtractMatrix(*program, limits);
        nlohmann::json detected = nlohmann::json::array();
        for (GameClass c : Classify(m, options)) detected.push_back(ToString(c));
        PrintJson(out, {{"detected_classes", detected}, {"matrix", ToJson(m)}});
        return kOk;
      } catch (const ExtractionError& e) {
        PrintJson(out, ErrorJson(e.reason(), e.what()));
        return kFailure;
      }
    }

    if (used == formalize) {
      LlmConfig config = formalize_flags.Config();
      std::vector<FormalizationTask> tasks;
      int sources = !text.empty() + !text_file.empty() + !manifest_path.empty();
      if (sources != 1) {
        throw UsageError(
            "give exactly one of --text, --text-file or --manifest");
      }
      if (manifest_path.empty()) {
        if (ids.size() > 1) throw UsageError("--text takes a single --id");
        tasks.push_back({ids.empty() ? id : ids.front(),
                         text.empty() ? ReadFile(text_file) : text});
      } else {
        tasks = SelectTasks(LoadManifest(manifest_path), ids);
      }
      ClientStack stack(formalize_flags, config, err);
      auto results = FormalizeBatch(tasks, stack.client(), config,
                                    GameIndependentSource(),
                                    formalize_flags.MakeExample());
      if (results.size() == 1 && manifest_path.empty()) {
        PrintJson(out, ToJson(results.front()));
      } else {
        PrintJson(out, ResultsJson(results));
      }
      bool all_ok = std::all_of(results.begin(), results.end(), Succeeded);
      return all_ok ? kOk : kFailure;
    }

    if (used == eval) {
      EvalOptions options;
      options.config = eval_flags.Config();
      options.example = eval_flags.MakeExample();
      options.classify.strict = !weak;
      options.classify.require_zero_sum = !no_zero_sum;
      if (!quiet) options.log = &err;
      Manifest m = LoadManifest(manifest_path);
      ClientStack stack(eval_flags, options.config, err);
      EvalReport report = Evaluate(m, stack.client(), options);
      std::string json = RenderReport(report, ReportFormat::kJson);
      std::string markdown = RenderReport(report, ReportFormat::kMarkdown);
      if (!json_out.empty()) WriteFile(json_out, json);
      if (!markdown_out.empty()) WriteFile(markdown_out, markdown);
      out << (format == "json" ? json : markdown);
      return kOk;
    }

    if (used == replay) {
      LlmConfig config = replay_flags.Config();
      if (replay_flags.mode != "replay") {
        throw UsageError("replay always reads from a transcript");
      }
      auto tasks = SelectTasks(LoadManifest(manifest_path), ids);
      ClientStack stack(replay_flags, config, err);
      auto results = FormalizeBatch(tasks, stack.client(), config,
                                    GameIndependentSource(),
                                    replay_flags.MakeExample());
      PrintJson(out, ResultsJson(results));
      bool complete = std::none_of(
          results.begin(), results.end(), [](const FormalizationResult& r) {
            return r.status == FormalizationStatus::kLlmError;
          });
      return complete ? kOk : kFailure;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << used->help();
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace gameform
