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

#ifndef GAMEFORM_LEXER_H_
#define GAMEFORM_LEXER_H_

#include <string>
#include <string_view>
#include <vector>

#include "gameform/term.h"

namespace gameform {

enum class TokenKind {
  kAtom,        // foo, 'D', :-, \+, is
  kFunctor,     // an atom immediately followed by "(", e.g. "payoff("
  kVar,         // X, _Foo, _
  kNumber,      // 35, 1.5 (sign is handled by the parser)
  kPunct,       // ( ) , | [ ]
  kEnd,         // "." followed by whitespace, "%" or end of input
  kError,       // placeholder for a reported lexical error
};

struct Token {
  TokenKind kind;
  std::string text;     // atom/functor name without quotes, var name, digits
  Span span;
  bool quoted = false;  // atom or functor written as '...'
  bool layout_before = false;  // whitespace or comment precedes the token
};

// Lexical diagnostic with a stable message and a machine-readable code.
struct LexError {
  std::string code;  // "comment_delimiter", "unterminated_quote", ...
  std::string message;
  Span span;
};

struct TokenizeResult {
  std::vector<Token> tokens;
  std::vector<LexError> errors;

  bool ok() const { return errors.empty(); }
};

// Splits source text into tokens. Comments ("%" to end of line) are
// stripped. The lexer never stops at an error: it records the error, emits a
// kError token and resumes at the next line, so the parser can keep
// reporting later problems.
TokenizeResult Tokenize(std::string_view text);

const char* ToString(TokenKind kind);

}  // namespace gameform

#endif  // GAMEFORM_LEXER_H_
