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

#ifndef GAMEFORM_EVAL_H_
#define GAMEFORM_EVAL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "gameform/corpus.h"
#include "gameform/engine.h"
#include "gameform/games.h"
#include "gameform/pipeline.h"

namespace gameform {

// An accuracy kept as exact counts. 0/0 is undefined.
struct Ratio {
  int64_t num = 0;
  int64_t den = 0;

  bool defined() const { return den > 0; }
  double value() const { return defined() ? double(num) / double(den) : 0; }
  // "0.90", or "undefined" for 0/0.
  std::string Format(int decimals = 2) const;

  friend bool operator==(const Ratio&, const Ratio&) = default;
};

// Outcome for one manifest record.
struct EvalRow {
  std::string id;
  GameClass game_class = GameClass::kPrisonersDilemma;
  Style style = Style::kStandard;
  PayoffKind payoffs = PayoffKind::kNumerical;
  FormalizationStatus status = FormalizationStatus::kLlmError;
  bool first_attempt_syntax_ok = false;
  int attempts = 0;
  int llm_calls = 0;
  std::string error;
  std::optional<std::string> exclusion;  // the record's note, if excluded
  // True when the row counts toward semantic accuracy: not excluded and a
  // final program exists.
  bool scored = false;
  std::optional<bool> semantic_ok;  // verdict.ok, when a program exists
  nlohmann::json verdict;           // SemanticVerdict JSON or null

  friend bool operator==(const EvalRow&, const EvalRow&) = default;
};

struct CellReport {
  Ratio syntactic;  // first-attempt validity over all records of the cell
  Ratio semantic;   // verdict.ok over scored records of the cell

  friend bool operator==(const CellReport&, const CellReport&) = default;
};

struct ClassReport {
  Ratio semantic;               // all styles
  Ratio semantic_non_standard;  // non-standard records only

  friend bool operator==(const ClassReport&, const ClassReport&) = default;
};

struct Exclusion {
  std::string id;
  std::string reason;

  friend bool operator==(const Exclusion&, const Exclusion&) = default;
};

struct EvalReport {
  std::string template_version = kPromptTemplateVersion;
  std::map<CellKey, CellReport> cells;  // always the four cells
  std::map<GameClass, ClassReport> classes;  // always all classes
  Ratio syntactic;
  Ratio semantic;
  std::vector<Exclusion> exclusions;
  std::vector<EvalRow> rows;  // manifest order

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

struct EvalOptions {
  LlmConfig config;
  std::optional<Example> example = DefaultExample();
  EngineLimits limits;
  ClassifyOptions classify;
  std::ostream* log = nullptr;  // one progress line per record
};

// Formalizes every record (see FormalizeBatch), checks each
// final program against the record's class and aggregates. Per-record
// failures become rows; only I/O errors and an invalid example propagate.
EvalReport Evaluate(const Manifest& manifest, ChatClient& llm,
                    const EvalOptions& options);

// Builds the row for one record from its formalization result.
EvalRow ScoreRecord(const DescriptionRecord& record,
                    const FormalizationResult& result,
                    const EngineLimits& limits = {},
                    const ClassifyOptions& classify = {});

// Folds rows into cell, class and overall ratios.
EvalReport Aggregate(std::vector<EvalRow> rows);

nlohmann::json ToJson(const EvalReport& report);
EvalReport ReportFromJson(const nlohmann::json& j);

enum class ReportFormat { kJson, kMarkdown };
std::string RenderReport(const EvalReport& report, ReportFormat format);

}  // namespace gameform

#endif  // GAMEFORM_EVAL_H_
