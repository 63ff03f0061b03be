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

#include "gameform/eval.h"

#include <cstdio>
#include <sstream>

#include "gameform/parser.h"

namespace gameform {
namespace {

using ojson = nlohmann::ordered_json;

constexpr Style kStyles[] = {Style::kStandard, Style::kNonStandard};
constexpr PayoffKind kPayoffKinds[] = {PayoffKind::kNumerical,
                                       PayoffKind::kNonNumerical};

void Count(Ratio& r, bool hit) {
  ++r.den;
  if (hit) ++r.num;
}

ojson RatioJson(const Ratio& r) {
  ojson j;
  j["numerator"] = r.num;
  j["denominator"] = r.den;
  j["value"] = r.defined() ? ojson(r.value()) : ojson(nullptr);
  return j;
}

Ratio RatioFromJson(const nlohmann::json& j) {
  return {j.at("numerator").get<int64_t>(), j.at("denominator").get<int64_t>()};
}

template <typename T>
T Require(std::optional<T> v, const std::string& what) {
  if (!v) throw std::invalid_argument("report: unknown " + what);
  return *v;
}

// "0.90 (43/48)" or "undefined (0/0)".
std::string Cell(const Ratio& r) {
  return r.Format() + " (" + std::to_string(r.num) + "/" +
         std::to_string(r.den) + ")";
}

std::string Bar(const Ratio& r) {
  constexpr int kWidth = 20;
  if (!r.defined()) return "";
  int filled = int(r.value() * kWidth + 0.5);
  return std::string(filled, '#') + std::string(kWidth - filled, '.');
}

const char* PayoffLabel(PayoffKind p) {
  return p == PayoffKind::kNumerical ? "Numerical" : "Non-numerical";
}

std::string Markdown(const EvalReport& r) {
  std::ostringstream out;
  out << "# Evaluation report\n\n"
      << "Prompt template: " << r.template_version << "\n\n"
      << "Descriptions: " << r.rows.size() << " (" << r.exclusions.size()
      << " excluded from semantic scoring)\n\n"
      << "Syntactic accuracy (first attempt): " << Cell(r.syntactic) << "\n\n"
      << "Semantic accuracy: " << Cell(r.semantic) << "\n\n";

  out << "## Accuracy by variant\n\n"
      << "| | Standard synt | Standard sem | Non-standard synt | "
         "Non-standard sem |\n"
      << "|---|---|---|---|---|\n";
  for (PayoffKind p : kPayoffKinds) {
    out << "| " << PayoffLabel(p);
    for (Style s : kStyles) {
      const CellReport& c = r.cells.at({s, p});
      out << " | " << Cell(c.syntactic) << " | " << Cell(c.semantic);
    }
    out << " |\n";
  }

  out << "\n## Semantic accuracy by game\n\n"
      << "| Game | All | | Non-standard only | |\n"
      << "|---|---|---|---|---|\n";
  for (GameClass c : kAllGameClasses) {
    const ClassReport& cr = r.classes.at(c);
    if (!cr.semantic.defined() && !cr.semantic_non_standard.defined()) {
      continue;
    }
    out << "| " << ShortName(c) << " | " << Cell(cr.semantic) << " | `"
        << Bar(cr.semantic) << "` | " << Cell(cr.semantic_non_standard)
        << " | `" << Bar(cr.semantic_non_standard) << "` |\n";
  }

  out << "\n## Exclusions\n\n";
  if (r.exclusions.empty()) out << "None.\n";
  for (const Exclusion& e : r.exclusions) {
    out << "- " << e.id << ": " << e.reason << "\n";
  }

  out << "\n## Descriptions\n\n"
      << "| Id | Game | Style | Payoffs | Status | Semantic |\n"
      << "|---|---|---|---|---|---|\n";
  for (const EvalRow& row : r.rows) {
    std::string sem = !row.semantic_ok ? "-"
                      : *row.semantic_ok ? "ok"
                                         : "defective";
    if (row.exclusion) sem += " (excluded)";
    out << "| " << row.id << " | " << ShortName(row.game_class) << " | "
        << ToString(row.style) << " | " << ToString(row.payoffs) << " | "
        << ToString(row.status) << " | " << sem << " |\n";
  }
  return out.str();
}

}  // namespace

std::string Ratio::Format(int decimals) const {
  if (!defined()) return "undefined";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value());
  return buf;
}

EvalRow ScoreRecord(const DescriptionRecord& record,
                    const FormalizationResult& result,
                    const EngineLimits& limits,
                    const ClassifyOptions& classify) {
  EvalRow row;
  row.id = record.id;
  row.game_class = record.game_class;
  row.style = record.style;
  row.payoffs = record.payoffs;
  row.status = result.status;
  row.first_attempt_syntax_ok = result.first_attempt_syntax_ok;
  row.attempts = int(result.attempts.size());
  row.llm_calls = result.llm_calls;
  row.error = result.error;
  if (record.excluded()) row.exclusion = record.notes;
  if (result.final_program) {
    Program program = ParseProgram(*result.final_program).first;
    SemanticVerdict v =
        CheckSemantics(program, record.game_class, limits, classify);
    row.semantic_ok = v.ok;
    row.verdict = ToJson(v);
    row.scored = !record.excluded();
  }
  return row;
}

EvalReport Aggregate(std::vector<EvalRow> rows) {
  EvalReport r;
  for (Style s : kStyles) {
    for (PayoffKind p : kPayoffKinds) r.cells[{s, p}] = {};
  }
  for (GameClass c : kAllGameClasses) r.classes[c] = {};
  for (const EvalRow& row : rows) {
    CellReport& cell = r.cells[{row.style, row.payoffs}];
    Count(cell.syntactic, row.first_attempt_syntax_ok);
    Count(r.syntactic, row.first_attempt_syntax_ok);
    if (row.exclusion) r.exclusions.push_back({row.id, *row.exclusion});
    if (!row.scored) continue;
    bool ok = row.semantic_ok.value_or(false);
    Count(cell.semantic, ok);
    Count(r.semantic, ok);
    ClassReport& cls = r.classes[row.game_class];
    Count(cls.semantic, ok);
    if (row.style == Style::kNonStandard) {
      Count(cls.semantic_non_standard, ok);
    }
  }
  r.rows = std::move(rows);
  return r;
}

EvalReport Evaluate(const Manifest& manifest, ChatClient& llm,
                    const EvalOptions& options) {
  std::vector<FormalizationTask> tasks;
  for (const DescriptionRecord& r : manifest.records) {
    tasks.push_back({r.id, r.text});
  }
  std::vector<FormalizationResult> results =
      FormalizeBatch(tasks, llm, options.config, GameIndependentSource(),
                     options.example);
  std::vector<EvalRow> rows;
  for (size_t i = 0; i < results.size(); ++i) {
    rows.push_back(ScoreRecord(manifest.records[i], results[i],
                               options.limits, options.classify));
    if (options.log) {
      const EvalRow& row = rows.back();
      *options.log << row.id << ": " << ToString(row.status);
      if (row.semantic_ok) {
        *options.log << (*row.semantic_ok ? ", semantics ok"
                                          : ", semantics defective");
      }
      *options.log << "\n";
    }
  }
  return Aggregate(std::move(rows));
}

namespace {

ojson ReportJson(const EvalReport& r) {
  ojson j;
  j["template_version"] = r.template_version;
  j["syntactic"] = RatioJson(r.syntactic);
  j["semantic"] = RatioJson(r.semantic);
  ojson cells = ojson::array();
  for (const auto& [key, c] : r.cells) {
    ojson cj;
    cj["style"] = ToString(key.first);
    cj["payoffs"] = ToString(key.second);
    cj["syntactic"] = RatioJson(c.syntactic);
    cj["semantic"] = RatioJson(c.semantic);
    cells.push_back(cj);
  }
  j["cells"] = cells;
  ojson classes = ojson::array();
  for (const auto& [cls, c] : r.classes) {
    ojson cj;
    cj["game_class"] = ToString(cls);
    cj["semantic"] = RatioJson(c.semantic);
    cj["semantic_non_standard"] = RatioJson(c.semantic_non_standard);
    classes.push_back(cj);
  }
  j["classes"] = classes;
  ojson exclusions = ojson::array();
  for (const Exclusion& e : r.exclusions) {
    exclusions.push_back({{"id", e.id}, {"reason", e.reason}});
  }
  j["exclusions"] = exclusions;
  ojson rows = ojson::array();
  for (const EvalRow& row : r.rows) {
    ojson rj;
    rj["id"] = row.id;
    rj["game_class"] = ToString(row.game_class);
    rj["style"] = ToString(row.style);
    rj["payoffs"] = ToString(row.payoffs);
    rj["status"] = ToString(row.status);
    rj["first_attempt_syntax_ok"] = row.first_attempt_syntax_ok;
    rj["attempts"] = row.attempts;
    rj["llm_calls"] = row.llm_calls;
    rj["error"] = row.error;
    rj["exclusion"] = row.exclusion ? ojson(*row.exclusion) : ojson(nullptr);
    rj["scored"] = row.scored;
    rj["semantic_ok"] =
        row.semantic_ok ? ojson(*row.semantic_ok) : ojson(nullptr);
    rj["verdict"] = ojson::parse(row.verdict.dump());
    rows.push_back(rj);
  }
  j["rows"] = rows;
  return j;
}

}  // namespace

nlohmann::json ToJson(const EvalReport& r) {
  return nlohmann::json::parse(ReportJson(r).dump());
}

EvalReport ReportFromJson(const nlohmann::json& j) {
  EvalReport r;
  r.template_version = j.at("template_version").get<std::string>();
  r.syntactic = RatioFromJson(j.at("syntactic"));
  r.semantic = RatioFromJson(j.at("semantic"));
  for (const auto& cj : j.at("cells")) {
    CellKey key{
        Require(ParseStyle(cj.at("style").get<std::string>()), "style"),
        Require(ParsePayoffKind(cj.at("payoffs").get<std::string>()),
                "payoffs")};
    r.cells[key] = {RatioFromJson(cj.at("syntactic")),
                    RatioFromJson(cj.at("semantic"))};
  }
  for (const auto& cj : j.at("classes")) {
    GameClass c = Require(
        ParseGameClass(cj.at("game_class").get<std::string>()), "game_class");
    r.classes[c] = {RatioFromJson(cj.at("semantic")),
                    RatioFromJson(cj.at("semantic_non_standard"))};
  }
  for (const auto& e : j.at("exclusions")) {
    r.exclusions.push_back(
        {e.at("id").get<std::string>(), e.at("reason").get<std::string>()});
  }
  for (const auto& rj : j.at("rows")) {
    EvalRow row;
    row.id = rj.at("id").get<std::string>();
    row.game_class = Require(
        ParseGameClass(rj.at("game_class").get<std::string>()), "game_class");
    row.style = Require(ParseStyle(rj.at("style").get<std::string>()), "style");
    row.payoffs = Require(
        ParsePayoffKind(rj.at("payoffs").get<std::string>()), "payoffs");
    row.status = Require(
        ParseFormalizationStatus(rj.at("status").get<std::string>()),
        "status");
    row.first_attempt_syntax_ok = rj.at("first_attempt_syntax_ok").get<bool>();
    row.attempts = rj.at("attempts").get<int>();
    row.llm_calls = rj.at("llm_calls").get<int>();
    row.error = rj.at("error").get<std::string>();
    if (!rj.at("exclusion").is_null()) {
      row.exclusion = rj["exclusion"].get<std::string>();
    }
    row.scored = rj.at("scored").get<bool>();
    if (!rj.at("semantic_ok").is_null()) {
      row.semantic_ok = rj["semantic_ok"].get<bool>();
    }
    row.verdict = rj.at("verdict");
    r.rows.push_back(std::move(row));
  }
  return r;
}

std::string RenderReport(const EvalReport& report, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    return ReportJson(report).dump(2) + "\n";
  }
  return Markdown(report);
}

}  // namespace gameform
