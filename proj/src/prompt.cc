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

// Prompt templates and code extraction for the formalization loop.

#include <algorithm>
#include <set>
#include <sstream>

#include "gameform/games.h"
#include "gameform/pipeline.h"

namespace gameform {
namespace {

constexpr std::string_view kSystemText =
    "You translate natural-language descriptions of strategic games into "
    "logic programs for a situation-calculus game solver written in a Prolog "
    "dialect. Reply with the game-specific clauses only, in a single fenced "
    "code block.";

constexpr std::string_view kPdDescription =
    "Two suspects, p1 and p2, are arrested and questioned in separate rooms. "
    "Each suspect can either cooperate with the other by staying silent "
    "('C') or defect by testifying against the other ('D'). If both stay "
    "silent, each receives a payoff of 65. If both testify, each receives "
    "35. If one testifies while the other stays silent, the one who "
    "testifies receives 100 and the silent one receives 10. The suspects "
    "choose at the same time, without knowing the other's choice.";

void Fence(std::ostringstream& out, std::string_view code) {
  out << "```prolog\n" << code;
  if (!code.empty() && code.back() != '\n') out << '\n';
  out << "```\n";
}

std::string_view Trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> Lines(std::string_view text) {
  std::vector<std::string_view> out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) {
      if (pos < text.size()) out.push_back(text.substr(pos));
      break;
    }
    out.push_back(text.substr(pos, eol - pos));
    pos = eol + 1;
  }
  return out;
}

size_t ClauseCount(std::string_view code) {
  return ParseProgram(code).first.clauses.size();
}

}  // namespace

const char* ToString(PromptMode mode) {
  switch (mode) {
    case PromptMode::kZeroShot: return "zero_shot";
    case PromptMode::kOneShot: return "one_shot";
    case PromptMode::kRepair: return "repair";
  }
  return "unknown";
}

std::vector<ChatMessage> PromptBundle::messages() const {
  return {{"system", system_text}, {"user", user_text}};
}

PromptBundle BuildPrompt(std::string_view gamma_src,
                         const std::optional<Example>& example,
                         std::string_view target_nl) {
  PromptBundle b;
  b.system_text = kSystemText;
  b.gamma_src = gamma_src;
  b.target_nl = target_nl;
  b.mode = example ? PromptMode::kOneShot : PromptMode::kZeroShot;

  std::ostringstream out;
  out << "The solver already contains the following game-independent "
         "rules:\n\n";
  Fence(out, gamma_src);
  if (example) {
    SyntaxReport report = CheckSyntax(example->xi);
    if (!report.ok) {
      throw InvalidExampleError(
          "example program has syntax errors: " +
          report.errors.front().message + " at line " +
          std::to_string(report.errors.front().span.line));
    }
    b.example_nl = example->nl;
    b.example_xi = example->xi;
    out << "\nExample description:\n" << example->nl << "\n\n"
        << "Game-specific clauses for the example:\n\n";
    Fence(out, example->xi);
    out << "\nWrite the game-specific clauses for the following "
           "description in the same way.\n";
  } else {
    out << "\nWrite the game-specific clauses (initial/1, initially/2, "
           "possible/2, legal/2, effect/3, abnormal/3, final/1 and "
           "finally/2) for the following description.\n";
  }
  out << "\nDescription:\n" << target_nl << "\n\n"
      << "Output only the game-specific clauses for this game in one "
         "```prolog fenced code block. Use % for comments.\n";
  b.user_text = out.str();
  return b;
}

PromptBundle RepairPrompt(std::string_view previous_code,
                          const SyntaxReport& report) {
  PromptBundle b;
  b.system_text = kSystemText;
  b.mode = PromptMode::kRepair;

  std::ostringstream out;
  out << "The solver rejected the following game-specific clauses.\n\n";
  Fence(out, previous_code);
  out << "\nSolver trace:\n";
  std::set<std::string> codes;
  for (const SyntaxError& e : report.errors) {
    out << "line " << e.span.line << ", column " << e.span.col << ": "
        << e.message << "\n";
    codes.insert(e.code);
    if (e.message.find("missing '.'") != std::string::npos) {
      codes.insert("missing_end");
    }
  }
  out << "\nRules of the dialect:\n";
  if (codes.count("comment_delimiter")) {
    out << "- comments must use %; '//' does not start a comment\n";
  }
  if (codes.count("singleton_variable")) {
    out << "- every named variable must occur at least twice in its clause; "
           "write _ for an argument whose value is not used\n";
  }
  if (codes.count("unterminated_quote")) {
    out << "- quoted atoms must be closed with a matching '\n";
  }
  if (codes.count("missing_end")) {
    out << "- every clause must end with '.' followed by a newline\n";
  }
  if (codes.count("extraction")) {
    out << "- the answer must contain the clauses in a ```prolog fenced code "
           "block\n";
  }
  if (codes.count("syntax") || codes.count("unexpected_character") ||
      codes.count("number_range")) {
    out << "- only these operators are available: :- ; -> , \\+ = \\= == "
           "\\== is < > =< >= + - * /\n"
        << "- variables start with an uppercase letter or _, atoms with a "
           "lowercase letter or are quoted with '\n";
  }
  out << "- use % for comments\n"
      << "\nFix every error and output the complete corrected clauses in one "
         "```prolog fenced code block.\n";
  b.user_text = out.str();
  return b;
}

Example DefaultExample() {
  return {std::string(kPdDescription),
          std::string(CanonicalSource(GameClass::kPrisonersDilemma))};
}

std::string ExtractCode(std::string_view raw) {
  std::vector<std::string_view> lines = Lines(raw);

  std::string fenced;
  bool in_fence = false, any_fence = false;
  for (std::string_view line : lines) {
    if (Trim(line).substr(0, 3) == "```") {
      in_fence = !in_fence;
      any_fence = true;
      continue;
    }
    if (in_fence) {
      fenced.append(line);
      fenced.push_back('\n');
    }
  }
  if (any_fence && ClauseCount(fenced) > 0) return fenced;

  // No usable fence: the longest run of lines that parses cleanly and ends
  // with a clause terminator.
  size_t best_begin = 0, best_end = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    std::string candidate;
    for (size_t j = i; j < lines.size(); ++j) {
      candidate.append(lines[j]);
      candidate.push_back('\n');
      std::string_view t = Trim(lines[j]);
      if (t.empty() || t.back() != '.') continue;
      if (j + 1 - i <= best_end - best_begin) continue;
      auto [program, report] = ParseProgram(candidate);
      if (report.ok && !program.clauses.empty()) {
        best_begin = i;
        best_end = j + 1;
      }
    }
  }
  if (best_end == best_begin) {
    throw CodeExtractionError("the response contains no parsable clause");
  }
  std::string out;
  for (size_t k = best_begin; k < best_end; ++k) {
    out.append(lines[k]);
    out.push_back('\n');
  }
  return out;
}

}  // namespace gameform
