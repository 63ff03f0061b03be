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

#ifndef GAMEFORM_ENGINE_H_
#define GAMEFORM_ENGINE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gameform/term.h"

namespace gameform {

enum class EngineErrorKind {
  kResourceLimit,
  kTypeError,
  kNoInitial,   // no initial/1 fact in the game program
  kNoOutcomes,  // no ground outcome derivable for the reachable finals
};

const char* ToString(EngineErrorKind kind);

class EngineError : public std::runtime_error {
 public:
  EngineError(EngineErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  EngineErrorKind kind() const { return kind_; }

 private:
  EngineErrorKind kind_;
};

// Exceeding any limit raises EngineError(kResourceLimit).
struct EngineLimits {
  uint64_t max_inference_steps = 1'000'000;
  size_t max_term_depth = 512;
  std::optional<uint64_t> max_solutions;  // unbounded when empty
};

// Variable bindings with an undo trail. Bound values may mention further
// variables; unification applies the occurs check so chains never cycle.
class Bindings {
 public:
  // Creates a fresh unbound variable id.
  int NewVar();
  int size() const { return static_cast<int>(values_.size()); }

  // Follows variable bindings until an unbound variable or non-variable.
  Term Deref(Term t) const;
  // Applies bindings everywhere inside `t`. Throws kResourceLimit if the
  // result is deeper than `max_depth`.
  Term Resolve(const Term& t, size_t max_depth = 1 << 20) const;

  bool Bind(int var, const Term& value);
  const Term* Lookup(int var) const;

  size_t mark() const { return trail_.size(); }
  void UndoTo(size_t mark);

 private:
  std::vector<Term> values_;  // null term == unbound
  std::vector<int> trail_;
};

// Most general unifier extending `env`, with the occurs check. On failure
// the bindings are restored and false is returned.
bool Unify(const Term& a, const Term& b, Bindings& env);

// Standard order is not needed by the dialect; this is plain structural
// identity after dereferencing (==/2).
bool Identical(const Term& a, const Term& b, const Bindings& env);

struct Solution {
  // Query variables (by name, in order of first occurrence) and their values.
  std::vector<std::pair<std::string, Term>> bindings;
  size_t index = 0;  // 0-based derivation order
};

// Counters that never influence answers; used for lint and grading output.
struct Diagnostics {
  // Calls to predicates that have no clauses, by indicator.
  std::map<std::string, uint64_t> unknown_predicates;
  uint64_t nonground_negations = 0;
};

class Database;

// Lazy solution sequence of one query. Single-threaded; the engine it came
// from must outlive it.
class Query {
 public:
  Query(std::shared_ptr<const Database> db, std::vector<Term> goals,
        std::vector<std::pair<std::string, int>> variables, int num_vars,
        EngineLimits limits);
  ~Query();
  Query(Query&&) noexcept;
  Query& operator=(Query&&) noexcept;

  // Next solution in depth-first, clause-order, left-to-right order, or
  // nullopt once exhausted. Throws EngineError.
  std::optional<Solution> Next();

  // Materializes all remaining solutions.
  std::vector<Solution> All();

  uint64_t steps() const;
  const Diagnostics& diagnostics() const;

 private:
  class Machine;
  std::unique_ptr<Machine> machine_;
};

// A compiled program, optionally preceded by the built-in game-independent
// rules (game/2 and holds/2).
class Engine {
 public:
  explicit Engine(const Program& program, bool with_game_rules = true);

  Query Solve(std::vector<Term> goals, EngineLimits limits = {}) const;
  // Parses "game(s0,F), finally(goal(p1,100),F)"; a leading "?-" and
  // trailing "." are optional. Throws ParseError.
  Query Solve(std::string_view query_text, EngineLimits limits = {}) const;

  // True iff holds(fluent, situation) has at least one solution.
  bool HoldsIn(const Term& fluent, const Term& situation,
               EngineLimits limits = {}) const;

  const Program& program() const;

 private:
  std::shared_ptr<const Database> db_;
};

// The game-independent rule set: game/2 (2 clauses) followed by holds/2
// (initially, effect, frame).
const Program& GameIndependentProgram();
std::string_view GameIndependentSource();

// Ground play history: s0 or do(choice(P,M), Inner).
struct Outcome {
  Term trace;
  Term outcome;  // outcome(P1,M1,U1,P2,M2,U2)
};

// Runs game(I,F) from every initial(I) fact and collects each ground
// outcome derivable via finally(outcome(...), F). Exact duplicates (same
// printed trace and outcome) are reported once.
//
// Throws EngineError with kNoInitial, kNoOutcomes, kResourceLimit or
// kTypeError.
std::vector<Outcome> EnumerateOutcomes(const Program& game_program,
                                       EngineLimits limits = {});

// Formats one solution as "F=do(...)" lines joined with ",\n", or "true"
// when the query has no named variables.
std::string FormatSolution(const Solution& s);

}  // namespace gameform

#endif  // GAMEFORM_ENGINE_H_
