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

#include "gameform/term.h"

#include <algorithm>
#include <array>
#include <utility>

#include "gameform/operators.h"

namespace gameform {

std::optional<OpDef> InfixOp(std::string_view name) {
  static constexpr std::array<std::pair<std::string_view, OpDef>, 16> kOps = {{
      {":-", {1200, OpType::kXfx}},
      {";", {1100, OpType::kXfy}},
      {"->", {1050, OpType::kXfy}},
      {",", {1000, OpType::kXfy}},
      {"=", {700, OpType::kXfx}},
      {"\\=", {700, OpType::kXfx}},
      {"==", {700, OpType::kXfx}},
      {"\\==", {700, OpType::kXfx}},
      {"is", {700, OpType::kXfx}},
      {"<", {700, OpType::kXfx}},
      {">", {700, OpType::kXfx}},
      {"=<", {700, OpType::kXfx}},
      {">=", {700, OpType::kXfx}},
      {"+", {500, OpType::kYfx}},
      {"-", {500, OpType::kYfx}},
      {"*", {400, OpType::kYfx}},
  }};
  for (const auto& [op, def] : kOps) {
    if (op == name) return def;
  }
  if (name == "/") return OpDef{400, OpType::kYfx};
  return std::nullopt;
}

std::optional<OpDef> PrefixOp(std::string_view name) {
  if (name == ":-" || name == "?-") return OpDef{1200, OpType::kFx};
  if (name == "\\+") return OpDef{900, OpType::kFy};
  if (name == "-") return OpDef{200, OpType::kFy};
  return std::nullopt;
}

bool IsOperatorAtom(std::string_view name) {
  return InfixOp(name).has_value() || PrefixOp(name).has_value();
}

Term Term::Atom(std::string name) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kAtom;
  node->name = std::move(name);
  return Term(std::move(node));
}

Term Term::Num(Number value) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kNumber;
  node->number = value;
  return Term(std::move(node));
}

Term Term::Var(std::string name, int id) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kVar;
  node->name = std::move(name);
  node->var_id = id;
  return Term(std::move(node));
}

Term Term::Compound(std::string functor, std::vector<Term> args) {
  if (args.empty()) return Atom(std::move(functor));
  auto node = std::make_shared<Node>();
  node->kind = Kind::kCompound;
  node->name = std::move(functor);
  node->args = std::move(args);
  return Term(std::move(node));
}

bool Term::Is(std::string_view name, size_t arity) const {
  if (!valid() || !is_callable()) return false;
  return node_->name == name && node_->args.size() == arity;
}

bool Term::IsGround() const {
  switch (kind()) {
    case Kind::kVar:
      return false;
    case Kind::kCompound:
      return std::all_of(node_->args.begin(), node_->args.end(),
                         [](const Term& a) { return a.IsGround(); });
    default:
      return true;
  }
}

size_t Term::Depth() const {
  if (!is_compound()) return 1;
  size_t deepest = 0;
  for (const Term& a : node_->args) deepest = std::max(deepest, a.Depth());
  return deepest + 1;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.valid() || !b.valid()) return false;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::kAtom:
      return a.name() == b.name();
    case Term::Kind::kNumber:
      return a.number() == b.number();
    case Term::Kind::kVar:
      return a.var_id() == b.var_id();
    case Term::Kind::kCompound:
      if (a.name() != b.name() || a.arity() != b.arity()) return false;
      for (size_t i = 0; i < a.arity(); ++i) {
        if (!(a.arg(i) == b.arg(i))) return false;
      }
      return true;
  }
  return false;
}

std::string Indicator(const Term& t) {
  return t.name() + "/" + std::to_string(t.is_compound() ? t.arity() : 0);
}

namespace {

bool IsSymbolChar(char c) {
  return std::string_view("+-*/\\^<>=~:.?@#&$").find(c) !=
         std::string_view::npos;
}

bool IsAlnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool IsListCell(const Term& t) { return t.Is(".", 2); }

class Printer {
 public:
  std::string Print(const Term& t, int max_priority) {
    out_.clear();
    Emit(t, max_priority);
    return out_;
  }

 private:
  void Emit(const Term& t, int max_priority) {
    switch (t.kind()) {
      case Term::Kind::kAtom:
        if (max_priority < kMaxPriority && IsOperatorAtom(t.name())) {
          out_ += "(" + FormatAtom(t.name()) + ")";
        } else {
          out_ += FormatAtom(t.name());
        }
        return;
      case Term::Kind::kNumber:
        out_ += t.number().ToString();
        return;
      case Term::Kind::kVar:
        if (t.name().empty()) {
          out_ += "_G" + std::to_string(t.var_id());
        } else {
          out_ += t.name();
        }
        return;
      case Term::Kind::kCompound:
        EmitCompound(t, max_priority);
        return;
    }
  }

  void EmitCompound(const Term& t, int max_priority) {
    if (IsListCell(t)) {
      EmitList(t);
      return;
    }
    if (t.arity() == 2) {
      if (auto op = InfixOp(t.name())) {
        bool parens = op->priority > max_priority;
        if (parens) out_ += "(";
        Emit(t.arg(0), op->LeftMax());
        if (t.name() == ",") {
          out_ += ",";
        } else {
          out_ += " " + t.name() + " ";
        }
        Emit(t.arg(1), op->RightMax());
        if (parens) out_ += ")";
        return;
      }
    }
    if (t.arity() == 1) {
      if (auto op = PrefixOp(t.name())) {
        bool parens = op->priority > max_priority;
        if (parens) out_ += "(";
        out_ += t.name() + " ";
        Emit(t.arg(0), op->RightMax());
        if (parens) out_ += ")";
        return;
      }
    }
    out_ += FormatAtom(t.name());
    out_ += "(";
    for (size_t i = 0; i < t.arity(); ++i) {
      if (i > 0) out_ += ",";
      Emit(t.arg(i), kArgPriority);
    }
    out_ += ")";
  }

  void EmitList(const Term& t) {
    out_ += "[";
    Term cur = t;
    bool first = true;
    while (IsListCell(cur)) {
      if (!first) out_ += ",";
      first = false;
      Emit(cur.arg(0), kArgPriority);
      cur = cur.arg(1);
    }
    if (!(cur.is_atom() && cur.name() == "[]")) {
      out_ += "|";
      Emit(cur, kArgPriority);
    }
    out_ += "]";
  }

  std::string out_;
};

}  // namespace

std::string FormatAtom(const std::string& name) {
  if (name == "[]" || name == ";") return name;
  bool bare = false;
  if (!name.empty() && name[0] >= 'a' && name[0] <= 'z') {
    bare = std::all_of(name.begin(), name.end(), IsAlnum);
  } else if (!name.empty() &&
             std::all_of(name.begin(), name.end(), IsSymbolChar)) {
    bare = IsOperatorAtom(name);
  }
  if (bare) return name;
  std::string out = "'";
  for (char c : name) {
    if (c == '\'' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  out += "'";
  return out;
}

std::string ToString(const Term& t) {
  if (!t.valid()) return "<null>";
  return Printer().Print(t, kMaxPriority);
}

bool Clause::SameAs(const Clause& other) const {
  if (!(head == other.head) || body.size() != other.body.size()) return false;
  for (size_t i = 0; i < body.size(); ++i) {
    if (!(body[i] == other.body[i])) return false;
  }
  return true;
}

Program Program::Append(const Program& other) const {
  Program out = *this;
  out.clauses.insert(out.clauses.end(), other.clauses.begin(),
                     other.clauses.end());
  return out;
}

bool Program::SameAs(const Program& other) const {
  if (clauses.size() != other.clauses.size()) return false;
  for (size_t i = 0; i < clauses.size(); ++i) {
    if (!clauses[i].SameAs(other.clauses[i])) return false;
  }
  return true;
}

std::string ToString(const Clause& c) {
  Printer printer;
  std::string out = printer.Print(c.head, kArgPriority);
  if (c.body.empty()) return out + ".";
  out += " :-";
  for (size_t i = 0; i < c.body.size(); ++i) {
    out += "\n    " + printer.Print(c.body[i], kArgPriority);
    out += (i + 1 < c.body.size()) ? "," : ".";
  }
  return out;
}

std::string ToString(const Program& p) {
  std::string out;
  for (const Clause& c : p.clauses) {
    out += ToString(c);
    out += "\n";
  }
  return out;
}

}  // namespace gameform
