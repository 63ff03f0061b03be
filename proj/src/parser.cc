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

#include "gameform/parser.h"

#include <map>
#include <optional>
#include <unordered_map>

#include "gameform/lexer.h"
#include "gameform/operators.h"

namespace gameform {
namespace {

// Thrown inside the parser; `silent` marks failures already reported by the
// lexer.
struct Failure {
  std::string message;
  Span span;
  std::string code;
  bool silent = false;
};

std::string Describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::kFunctor:
      return "'" + t.text + "('";
    case TokenKind::kEnd:
      return "'.'";
    default:
      return "'" + t.text + "'";
  }
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  // Parses clauses until the tokens run out, recovering after errors.
  void ParseAll(Program& program, SyntaxReport& report) {
    while (pos_ < tokens_.size()) {
      size_t start = pos_;
      try {
        ParseClause(program, report);
      } catch (const Failure& f) {
        if (!f.silent) {
          report.errors.push_back({f.message, f.span, f.code});
        }
        // Resume after the clause terminator that follows the failure point.
        if (pos_ == start) ++pos_;
        while (pos_ < tokens_.size() &&
               tokens_[pos_ - 1].kind != TokenKind::kEnd) {
          if (tokens_[pos_].kind == TokenKind::kEnd) {
            ++pos_;
            break;
          }
          ++pos_;
        }
      }
    }
  }

  ParsedQuery ParseQueryTokens() {
    ResetVars();
    ParsedQuery q;
    if (pos_ >= tokens_.size()) {
      throw Failure{"empty query", Span{}, "syntax"};
    }
    auto [t, prec] = Parse(kMaxPriority);
    (void)prec;
    if (t.Is("?-", 1)) t = t.arg(0);
    if (pos_ < tokens_.size() && tokens_[pos_].kind == TokenKind::kEnd) ++pos_;
    if (pos_ < tokens_.size()) {
      throw Failure{"unexpected " + Describe(tokens_[pos_]) + " after query",
                    tokens_[pos_].span, "syntax"};
    }
    q.goals = FlattenConjunction(t);
    for (const std::string& name : var_names_in_order_) {
      q.variables.emplace_back(name, var_ids_.at(name));
    }
    q.num_vars = next_var_;
    return q;
  }

  Term ParseSingleTerm() {
    ResetVars();
    auto [t, prec] = Parse(kMaxPriority);
    (void)prec;
    if (pos_ < tokens_.size() && tokens_[pos_].kind == TokenKind::kEnd) ++pos_;
    if (pos_ < tokens_.size()) {
      throw Failure{"unexpected " + Describe(tokens_[pos_]),
                    tokens_[pos_].span, "syntax"};
    }
    return t;
  }

 private:
  struct VarInfo {
    int count = 0;
    Span first;
  };

  void ResetVars() {
    var_ids_.clear();
    var_order_.clear();
    var_names_in_order_.clear();
    spans_.clear();
    next_var_ = 0;
  }

  const Token* PeekToken() const {
    return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr;
  }

  [[noreturn]] void FailAt(const Token* t, const std::string& message) {
    if (t == nullptr) {
      const Token& last = tokens_.back();
      throw Failure{message, last.span, "syntax"};
    }
    if (t->kind == TokenKind::kError) {
      throw Failure{t->text, t->span, "lexical", true};
    }
    throw Failure{message, t->span, "syntax"};
  }

  const Token& Next() {
    const Token* t = PeekToken();
    if (t == nullptr) FailAt(nullptr, "unexpected end of input");
    if (t->kind == TokenKind::kError) FailAt(t, "");
    ++pos_;
    return *t;
  }

  bool IsPunct(const Token* t, char c) const {
    return t != nullptr && t->kind == TokenKind::kPunct && t->text[0] == c;
  }

  // Whether the token can begin an operand, used to tell a prefix operator
  // from a plain atom.
  bool CanStartTerm(const Token* t) const {
    if (t == nullptr) return false;
    switch (t->kind) {
      case TokenKind::kNumber:
      case TokenKind::kVar:
      case TokenKind::kFunctor:
        return true;
      case TokenKind::kAtom: {
        if (!InfixOp(t->text).has_value() || PrefixOp(t->text).has_value()) {
          return true;
        }
        // An infix operator atom is an operand when nothing can follow it,
        // as in "\+ is)".
        const Token* after = t + 1 < tokens_.data() + tokens_.size()
                                 ? t + 1
                                 : nullptr;
        return after == nullptr || after->kind == TokenKind::kEnd ||
               (after->kind == TokenKind::kPunct && after->text != "(" &&
                after->text != "[");
      }
      case TokenKind::kPunct:
        return t->text == "(" || t->text == "[";
      default:
        return false;
    }
  }

  Term Record(Term t, const Span& span) {
    spans_[t.identity()] = span;
    return t;
  }

  Span SpanOf(const Term& t, const Span& fallback) const {
    auto it = spans_.find(t.identity());
    return it == spans_.end() ? fallback : it->second;
  }

  Term MakeVar(const Token& tok) {
    if (tok.text == "_") return Term::Var("_", next_var_++);
    auto it = var_ids_.find(tok.text);
    int id;
    if (it == var_ids_.end()) {
      id = next_var_++;
      var_ids_.emplace(tok.text, id);
      var_names_in_order_.push_back(tok.text);
      var_order_[tok.text].first = tok.span;
    } else {
      id = it->second;
    }
    ++var_order_[tok.text].count;
    return Term::Var(tok.text, id);
  }

  std::pair<Term, int> ParsePrimary(int max_priority) {
    const Token& tok = Next();
    switch (tok.kind) {
      case TokenKind::kNumber:
        return {Record(Term::Num(*Number::Parse(tok.text)), tok.span), 0};
      case TokenKind::kVar:
        return {Record(MakeVar(tok), tok.span), 0};
      case TokenKind::kFunctor: {
        std::vector<Term> args;
        while (true) {
          args.push_back(Parse(kArgPriority).first);
          const Token* sep = PeekToken();
          if (IsPunct(sep, ',')) {
            ++pos_;
            continue;
          }
          if (IsPunct(sep, ')')) {
            ++pos_;
            break;
          }
          FailAt(sep, sep == nullptr
                          ? "unexpected end of input in arguments of " +
                                FormatAtom(tok.text)
                          : "expected ',' or ')' but found " + Describe(*sep));
        }
        return {Record(Term::Compound(tok.text, std::move(args)), tok.span),
                0};
      }
      case TokenKind::kPunct:
        if (tok.text == "(") {
          Term inner = Parse(kMaxPriority).first;
          const Token* close = PeekToken();
          if (!IsPunct(close, ')')) {
            FailAt(close, close == nullptr
                              ? "unexpected end of input, expected ')'"
                              : "expected ')' but found " + Describe(*close));
          }
          ++pos_;
          return {inner, 0};
        }
        if (tok.text == "[") return {Record(ParseList(), tok.span), 0};
        FailAt(&tok, "unexpected " + Describe(tok));
      case TokenKind::kEnd:
        FailAt(&tok, "unexpected end of clause");
      case TokenKind::kAtom:
        return ParseAtomOrPrefix(tok, max_priority);
      case TokenKind::kError:
        FailAt(&tok, "");
    }
    FailAt(&tok, "unexpected " + Describe(tok));
  }

  std::pair<Term, int> ParseAtomOrPrefix(const Token& tok, int max_priority) {
    const Token* next = PeekToken();
    if (!tok.quoted && tok.text == "-" && next != nullptr &&
        next->kind == TokenKind::kNumber && !next->layout_before) {
      ++pos_;
      Term n = Term::Num(-*Number::Parse(next->text));
      return {Record(n, tok.span), 0};
    }
    if (auto op = PrefixOp(tok.text); op && !tok.quoted && CanStartTerm(next)) {
      if (op->priority > max_priority) {
        FailAt(&tok, "operator priority clash for " + Describe(tok));
      }
      Term operand = Parse(op->RightMax()).first;
      return {Record(Term::Compound(tok.text, {operand}), tok.span),
              op->priority};
    }
    return {Record(Term::Atom(tok.text), tok.span), 0};
  }

  Term ParseList() {
    if (IsPunct(PeekToken(), ']')) {
      ++pos_;
      return Term::Atom("[]");
    }
    std::vector<Term> items;
    Term tail = Term::Atom("[]");
    while (true) {
      items.push_back(Parse(kArgPriority).first);
      const Token* sep = PeekToken();
      if (IsPunct(sep, ',')) {
        ++pos_;
        continue;
      }
      if (IsPunct(sep, '|')) {
        ++pos_;
        tail = Parse(kArgPriority).first;
        sep = PeekToken();
      }
      if (IsPunct(sep, ']')) {
        ++pos_;
        break;
      }
      FailAt(sep, sep == nullptr ? "unexpected end of input in list"
                                 : "expected ',' '|' or ']' in list but found " +
                                       Describe(*sep));
    }
    Term list = tail;
    for (auto it = items.rbegin(); it != items.rend(); ++it) {
      list = Term::Compound(".", {*it, list});
    }
    return list;
  }

  std::pair<Term, int> Parse(int max_priority) {
    const Token* first = PeekToken();
    auto [left, left_priority] = ParsePrimary(max_priority);
    while (true) {
      const Token* t = PeekToken();
      if (t == nullptr) break;
      std::string name;
      if (t->kind == TokenKind::kAtom && !t->quoted) {
        name = t->text;
      } else if (IsPunct(t, ',')) {
        name = ",";
      } else {
        break;
      }
      std::optional<OpDef> op = InfixOp(name);
      if (!op) break;
      if (op->priority > max_priority) break;
      if (left_priority > op->LeftMax()) {
        FailAt(t, "operator priority clash for " + Describe(*t));
      }
      ++pos_;
      Term right = Parse(op->RightMax()).first;
      left = Record(Term::Compound(name, {left, right}), first->span);
      left_priority = op->priority;
    }
    return {left, left_priority};
  }

  void ParseClause(Program& program, SyntaxReport& report) {
    ResetVars();
    const Token& first = tokens_[pos_];
    auto [term, priority] = Parse(kMaxPriority);
    (void)priority;
    const Token* end = PeekToken();
    if (end == nullptr) {
      FailAt(nullptr, "missing '.' at end of clause");
    }
    if (end->kind != TokenKind::kEnd) {
      FailAt(end, "unexpected " + Describe(*end) +
                      " (expected an operator or '.')");
    }
    ++pos_;

    Span span = first.span;
    span.end = end->span.end;

    if (term.Is(":-", 1) || term.Is("?-", 1)) {
      report.warnings.push_back(
          {WarningKind::kUnknownDirective,
           "unknown directive '" + ToString(term) + "' ignored", span, ""});
      return;
    }

    Clause clause;
    clause.span = span;
    if (term.Is(":-", 2)) {
      clause.head = term.arg(0);
      clause.body = FlattenConjunction(term.arg(1));
    } else {
      clause.head = term;
    }
    if (clause.head.is_var()) {
      throw Failure{"clause head cannot be a variable",
                    SpanOf(clause.head, span), "head"};
    }
    if (clause.head.is_number()) {
      throw Failure{"clause head cannot be a number",
                    SpanOf(clause.head, span), "head"};
    }
    for (const Term& goal : clause.body) {
      if (goal.is_number()) {
        throw Failure{"body goal cannot be a number", SpanOf(goal, span),
                      "body"};
      }
    }
    clause.num_vars = next_var_;

    for (const std::string& name : var_names_in_order_) {
      const VarInfo& info = var_order_.at(name);
      if (info.count == 1) {
        report.warnings.push_back({WarningKind::kSingletonVariable,
                                   "singleton variable '" + name + "'",
                                   info.first, name});
      }
    }
    program.clauses.push_back(std::move(clause));
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;

  std::map<std::string, int> var_ids_;
  std::map<std::string, VarInfo> var_order_;
  std::vector<std::string> var_names_in_order_;
  std::unordered_map<const void*, Span> spans_;
  int next_var_ = 0;
};

}  // namespace

const char* ToString(WarningKind kind) {
  switch (kind) {
    case WarningKind::kSingletonVariable:
      return "singleton_variable";
    case WarningKind::kUnknownDirective:
      return "unknown_directive";
  }
  return "?";
}

nlohmann::json ToJson(const SyntaxReport& report) {
  nlohmann::ordered_json out;
  out["ok"] = report.ok;
  out["errors"] = nlohmann::ordered_json::array();
  for (const SyntaxError& e : report.errors) {
    out["errors"].push_back(
        {{"message", e.message}, {"line", e.span.line}, {"col", e.span.col}});
  }
  out["warnings"] = nlohmann::ordered_json::array();
  for (const SyntaxWarning& w : report.warnings) {
    out["warnings"].push_back({{"kind", ToString(w.kind)},
                               {"message", w.message},
                               {"line", w.span.line},
                               {"col", w.span.col}});
  }
  return out;
}

std::vector<Term> FlattenConjunction(const Term& body) {
  std::vector<Term> goals;
  Term cur = body;
  while (cur.Is(",", 2)) {
    goals.push_back(cur.arg(0));
    cur = cur.arg(1);
  }
  goals.push_back(cur);
  return goals;
}

std::pair<Program, SyntaxReport> ParseProgram(std::string_view text,
                                              std::string source_name) {
  Program program;
  program.source_name = std::move(source_name);
  SyntaxReport report;

  TokenizeResult lexed = Tokenize(text);
  for (const LexError& e : lexed.errors) {
    report.errors.push_back({e.message, e.span, e.code});
  }
  if (!lexed.tokens.empty()) {
    Parser parser(std::move(lexed.tokens));
    parser.ParseAll(program, report);
  }
  // Lexical and syntax errors are collected separately; report them in
  // source order.
  std::stable_sort(report.errors.begin(), report.errors.end(),
                   [](const SyntaxError& a, const SyntaxError& b) {
                     return a.span.begin < b.span.begin;
                   });
  report.ok = report.errors.empty();
  return {std::move(program), std::move(report)};
}

SyntaxReport CheckSyntax(std::string_view text, bool strict) {
  SyntaxReport report = ParseProgram(text).second;
  if (strict) {
    for (const SyntaxWarning& w : report.warnings) {
      if (w.kind == WarningKind::kSingletonVariable) {
        report.errors.push_back({w.message, w.span, "singleton_variable"});
      }
    }
    std::stable_sort(report.errors.begin(), report.errors.end(),
                     [](const SyntaxError& a, const SyntaxError& b) {
                       return a.span.begin < b.span.begin;
                     });
    report.ok = report.errors.empty();
  }
  return report;
}

namespace {

template <typename Fn>
auto WithParser(std::string_view text, Fn fn) {
  TokenizeResult lexed = Tokenize(text);
  if (!lexed.ok()) {
    throw ParseError(lexed.errors.front().message, lexed.errors.front().span);
  }
  Parser parser(std::move(lexed.tokens));
  try {
    return fn(parser);
  } catch (const Failure& f) {
    throw ParseError(f.message, f.span);
  }
}

}  // namespace

ParsedQuery ParseQuery(std::string_view text) {
  return WithParser(text, [](Parser& p) { return p.ParseQueryTokens(); });
}

Term ParseTerm(std::string_view text) {
  return WithParser(text, [](Parser& p) {
    return p.ParseSingleTerm();
  });
}

}  // namespace gameform
