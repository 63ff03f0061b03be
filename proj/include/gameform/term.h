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

#ifndef GAMEFORM_TERM_H_
#define GAMEFORM_TERM_H_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gameform/number.h"

namespace gameform {

// Source range. Lines and columns are 1-based; columns count code points.
// Byte offsets are 0-based and half-open.
struct Span {
  int line = 1;
  int col = 1;
  size_t begin = 0;
  size_t end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

// Immutable logic term with shared structure. Copying a Term is cheap.
//
// Atoms compare by name only; whether the source spelled them quoted is not
// part of the value. Variables compare by id, their name is only used for
// printing.
class Term {
 public:
  enum class Kind { kAtom, kNumber, kVar, kCompound };

  Term() = default;  // null term, only valid as a placeholder

  static Term Atom(std::string name);
  static Term Num(Number value);
  static Term Var(std::string name, int id);
  // Zero-argument compounds collapse into atoms.
  static Term Compound(std::string functor, std::vector<Term> args);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const { return node_->kind; }
  bool is_atom() const { return kind() == Kind::kAtom; }
  bool is_number() const { return kind() == Kind::kNumber; }
  bool is_var() const { return kind() == Kind::kVar; }
  bool is_compound() const { return kind() == Kind::kCompound; }
  bool is_callable() const { return is_atom() || is_compound(); }

  // Atom name, variable name or compound functor.
  const std::string& name() const { return node_->name; }
  const Number& number() const { return node_->number; }
  int var_id() const { return node_->var_id; }
  size_t arity() const { return node_->args.size(); }
  std::span<const Term> args() const { return node_->args; }
  const Term& arg(size_t i) const { return node_->args[i]; }

  // True for an atom or compound with this name and arity.
  bool Is(std::string_view name, size_t arity) const;
  bool IsGround() const;
  // Nesting depth; atoms, numbers and variables have depth 1.
  size_t Depth() const;

  bool SameNode(const Term& other) const { return node_ == other.node_; }
  // Address of the shared node; stable for the lifetime of the term.
  const void* identity() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node {
    Kind kind;
    std::string name;
    Number number;
    int var_id = -1;
    std::vector<Term> args;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

// "pred/arity" indicator of a callable term.
std::string Indicator(const Term& t);

// Returns the atom text in source form, quoted when needed ('D', abc, '[]').
std::string FormatAtom(const std::string& name);

// Operator-aware printer. Output reparses to an equal term.
std::string ToString(const Term& t);

struct Clause {
  Term head;
  std::vector<Term> body;  // empty for facts
  Span span;
  int num_vars = 0;        // variable ids are 0..num_vars-1

  bool is_fact() const { return body.empty(); }
  // Structural comparison; spans are ignored.
  bool SameAs(const Clause& other) const;
};

struct Program {
  std::vector<Clause> clauses;
  std::string source_name;

  // Concatenation keeps clause order: this program first.
  Program Append(const Program& other) const;
  bool SameAs(const Program& other) const;
};

// Clause in source form, e.g. "holds(F,do(M,S)) :-\n    effect(F,M,S)."
std::string ToString(const Clause& c);
std::string ToString(const Program& p);

}  // namespace gameform

#endif  // GAMEFORM_TERM_H_
