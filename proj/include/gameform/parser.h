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

#ifndef GAMEFORM_PARSER_H_
#define GAMEFORM_PARSER_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "gameform/term.h"

namespace gameform {

enum class WarningKind { kSingletonVariable, kUnknownDirective };

const char* ToString(WarningKind kind);

struct SyntaxError {
  std::string message;
  Span span;
  // Stable machine-readable category, used to pick repair hints. Not part of
  // the JSON shape.
  std::string code;
};

struct SyntaxWarning {
  WarningKind kind;
  std::string message;
  Span span;
  std::string subject;  // e.g. the singleton variable's name
};

// Result of checking a source text. Warnings never change `ok`.
struct SyntaxReport {
  bool ok = true;
  std::vector<SyntaxError> errors;
  std::vector<SyntaxWarning> warnings;
};

// {ok, errors:[{message,line,col}], warnings:[{kind,message,line,col}]}
nlohmann::json ToJson(const SyntaxReport& report);

// Parses a program in the game-description dialect. Parsing never throws:
// all problems end up in the report, and parsing resumes after the next
// clause terminator so every broken clause is reported.
std::pair<Program, SyntaxReport> ParseProgram(std::string_view text,
                                              std::string source_name = "");

// The validation gate used by the formalization loop. With `strict`, every
// singleton-variable warning is also reported as an error.
SyntaxReport CheckSyntax(std::string_view text, bool strict = false);

// Thrown by ParseQuery and ParseTerm.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, Span span)
      : std::runtime_error(message), span_(span) {}
  const Span& span() const { return span_; }

 private:
  Span span_;
};

struct ParsedQuery {
  std::vector<Term> goals;
  // Named variables in order of first occurrence; ids are 0..size-1 except
  // that anonymous variables take further ids.
  std::vector<std::pair<std::string, int>> variables;
  int num_vars = 0;
};

// Parses "game(s0,F), finally(goal(p1,100),F)" with an optional leading
// "?-" and an optional final ".".
ParsedQuery ParseQuery(std::string_view text);

// Parses a single term; variables get ids in order of first occurrence.
Term ParseTerm(std::string_view text);

// Splits a conjunction ','(A, ','(B, C)) into [A, B, C].
std::vector<Term> FlattenConjunction(const Term& body);

}  // namespace gameform

#endif  // GAMEFORM_PARSER_H_
