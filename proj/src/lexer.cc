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

#include "gameform/lexer.h"

#include "gameform/operators.h"

namespace gameform {
namespace {

bool IsLayout(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}
bool IsDigit(char c) { return c >= '0' && c <= '9'; }
bool IsLower(char c) {
  return (c >= 'a' && c <= 'z') || static_cast<unsigned char>(c) >= 0x80;
}
bool IsUpper(char c) { return (c >= 'A' && c <= 'Z') || c == '_'; }
bool IsAlnum(char c) { return IsLower(c) || IsUpper(c) || IsDigit(c); }
bool IsSymbolChar(char c) {
  return std::string_view("+-*/\\^<>=~:.?@#&$").find(c) !=
         std::string_view::npos;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  TokenizeResult Run() {
    while (true) {
      bool layout = SkipLayout();
      if (pos_ >= text_.size()) break;
      size_t before = result_.tokens.size();
      LexOne();
      if (result_.tokens.size() > before) {
        result_.tokens[before].layout_before = layout;
      }
    }
    return std::move(result_);
  }

 private:
  char Peek(size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  bool AtEnd(size_t at) const { return at >= text_.size(); }

  Span SpanAt(size_t begin, size_t end) const {
    Span s;
    s.line = line_;
    s.begin = begin;
    s.end = end;
    int col = 1;
    for (size_t i = line_start_; i < begin; ++i) {
      if ((static_cast<unsigned char>(text_[i]) & 0xC0) != 0x80) ++col;
    }
    s.col = col;
    return s;
  }

  void Advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      line_start_ = pos_ + 1;
    }
    ++pos_;
  }

  // Returns true when any layout or comment was skipped.
  bool SkipLayout() {
    bool skipped = false;
    while (!AtEnd(pos_)) {
      char c = text_[pos_];
      if (IsLayout(c)) {
        Advance();
        skipped = true;
      } else if (c == '%') {
        SkipLine();
        skipped = true;
      } else {
        break;
      }
    }
    return skipped;
  }

  void SkipLine() {
    while (!AtEnd(pos_) && text_[pos_] != '\n') ++pos_;
  }

  void Emit(TokenKind kind, std::string text, size_t begin, bool quoted = false) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.span = SpanAt(begin, pos_);
    t.quoted = quoted;
    result_.tokens.push_back(std::move(t));
  }

  void Error(std::string code, std::string message, size_t begin, size_t end,
             bool emit_token) {
    LexError e{std::move(code), std::move(message), SpanAt(begin, end)};
    if (emit_token) {
      Token t;
      t.kind = TokenKind::kError;
      t.text = e.message;
      t.span = e.span;
      result_.tokens.push_back(std::move(t));
    }
    result_.errors.push_back(std::move(e));
  }

  // An atom name becomes a functor token when "(" follows with no layout.
  void EmitName(std::string name, size_t begin, bool quoted) {
    if (Peek() == '(') {
      Emit(TokenKind::kFunctor, std::move(name), begin, quoted);
      ++pos_;  // the "(" belongs to the functor token
      result_.tokens.back().span.end = pos_;
    } else {
      Emit(TokenKind::kAtom, std::move(name), begin, quoted);
    }
  }

  bool EndFollows(size_t at) const {
    return AtEnd(at) || IsLayout(text_[at]) || text_[at] == '%';
  }

  void LexOne() {
    size_t begin = pos_;
    char c = text_[pos_];
    if (IsDigit(c)) {
      LexNumber();
    } else if (IsUpper(c)) {
      while (!AtEnd(pos_) && IsAlnum(text_[pos_])) ++pos_;
      Emit(TokenKind::kVar, std::string(text_.substr(begin, pos_ - begin)),
           begin);
    } else if (IsLower(c)) {
      while (!AtEnd(pos_) && IsAlnum(text_[pos_])) ++pos_;
      EmitName(std::string(text_.substr(begin, pos_ - begin)), begin, false);
    } else if (c == '\'') {
      LexQuoted();
    } else if (c == '(' || c == ')' || c == ',' || c == '|' || c == '[' ||
               c == ']') {
      ++pos_;
      Emit(TokenKind::kPunct, std::string(1, c), begin);
    } else if (c == ';') {
      ++pos_;
      EmitName(";", begin, false);
    } else if (IsSymbolChar(c)) {
      LexSymbols();
    } else {
      size_t len = 1;
      // Report a whole UTF-8 sequence as one character.
      while (!AtEnd(pos_ + len) &&
             (static_cast<unsigned char>(text_[pos_ + len]) & 0xC0) == 0x80) {
        ++len;
      }
      pos_ += len;
      Error("unexpected_character",
            "unexpected character '" +
                std::string(text_.substr(begin, len)) + "'",
            begin, pos_, true);
    }
  }

  void LexNumber() {
    size_t begin = pos_;
    while (!AtEnd(pos_) && IsDigit(text_[pos_])) ++pos_;
    if (Peek() == '.' && IsDigit(Peek(1))) {
      ++pos_;
      while (!AtEnd(pos_) && IsDigit(text_[pos_])) ++pos_;
    }
    std::string digits(text_.substr(begin, pos_ - begin));
    if (!Number::Parse(digits)) {
      Error("number_range", "number '" + digits + "' is out of range", begin,
            pos_, true);
      return;
    }
    Emit(TokenKind::kNumber, std::move(digits), begin);
  }

  void LexQuoted() {
    size_t begin = pos_;
    ++pos_;
    std::string name;
    while (true) {
      if (AtEnd(pos_) || text_[pos_] == '\n') {
        Error("unterminated_quote", "unterminated quoted atom", begin, pos_,
              true);
        SkipLine();
        return;
      }
      char c = text_[pos_];
      if (c == '\'') {
        if (Peek(1) == '\'') {
          name += '\'';
          pos_ += 2;
          continue;
        }
        ++pos_;
        break;
      }
      if (c == '\\' && !AtEnd(pos_ + 1) && text_[pos_ + 1] != '\n') {
        char e = text_[pos_ + 1];
        name += e == 'n' ? '\n' : e == 't' ? '\t' : e;
        pos_ += 2;
        continue;
      }
      name += c;
      ++pos_;
    }
    EmitName(std::move(name), begin, true);
  }

  void LexSymbols() {
    size_t begin = pos_;
    size_t end = pos_;
    while (!AtEnd(end) && IsSymbolChar(text_[end])) ++end;
    std::string_view run = text_.substr(begin, end - begin);

    size_t slashes = run.find("//");
    if (slashes != std::string_view::npos) {
      // Treated like a comment for recovery so the rest of the program is
      // still checked.
      pos_ = begin + slashes;
      Error("comment_delimiter",
            "unsupported comment delimiter '//'; comments must start with %",
            pos_, pos_ + 2, false);
      SkipLine();
      return;
    }
    if (run == "." && EndFollows(end)) {
      pos_ = end;
      Emit(TokenKind::kEnd, ".", begin);
      return;
    }
    bool trailing_end = run.size() > 1 && run.back() == '.' && EndFollows(end);
    if (trailing_end) {
      run.remove_suffix(1);
      --end;
    }
    if (!IsOperatorAtom(run)) {
      pos_ = end;
      Error("unknown_symbol", "unsupported symbol '" + std::string(run) + "'",
            begin, end, true);
      return;
    }
    pos_ = end;
    if (trailing_end) {
      Emit(TokenKind::kAtom, std::string(run), begin);
      size_t dot = pos_;
      ++pos_;
      Emit(TokenKind::kEnd, ".", dot);
    } else {
      EmitName(std::string(run), begin, false);
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  size_t line_start_ = 0;
  TokenizeResult result_;
};

}  // namespace

TokenizeResult Tokenize(std::string_view text) { return Lexer(text).Run(); }

const char* ToString(TokenKind kind) {
  switch (kind) {
    case TokenKind::kAtom: return "atom";
    case TokenKind::kFunctor: return "functor";
    case TokenKind::kVar: return "variable";
    case TokenKind::kNumber: return "number";
    case TokenKind::kPunct: return "punctuation";
    case TokenKind::kEnd: return "end";
    case TokenKind::kError: return "error";
  }
  return "?";
}

}  // namespace gameform
