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

#include "gameform/engine.h"

#include <set>
#include <unordered_map>

#include "gameform/parser.h"

namespace gameform {

const char* ToString(EngineErrorKind kind) {
  switch (kind) {
    case EngineErrorKind::kResourceLimit: return "resource_limit";
    case EngineErrorKind::kTypeError: return "type_error";
    case EngineErrorKind::kNoInitial: return "no_initial";
    case EngineErrorKind::kNoOutcomes: return "no_outcomes";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Bindings and unification

int Bindings::NewVar() {
  values_.emplace_back();
  return static_cast<int>(values_.size()) - 1;
}

const Term* Bindings::Lookup(int var) const {
  if (var < 0 || var >= size() || !values_[var].valid()) return nullptr;
  return &values_[var];
}

Term Bindings::Deref(Term t) const {
  while (t.is_var()) {
    const Term* bound = Lookup(t.var_id());
    if (bound == nullptr) break;
    t = *bound;
  }
  return t;
}

namespace {

Term ResolveRec(const Bindings& env, const Term& t, size_t depth,
                size_t max_depth) {
  if (depth > max_depth) {
    throw EngineError(EngineErrorKind::kResourceLimit,
                      "term depth limit of " + std::to_string(max_depth) +
                          " exceeded");
  }
  Term d = env.Deref(t);
  if (!d.is_compound()) return d;
  std::vector<Term> args;
  args.reserve(d.arity());
  bool changed = false;
  for (const Term& a : d.args()) {
    args.push_back(ResolveRec(env, a, depth + 1, max_depth));
    if (!args.back().SameNode(a)) changed = true;
  }
  if (!changed) return d;
  return Term::Compound(d.name(), std::move(args));
}

bool OccursIn(int var, const Term& t, const Bindings& env) {
  Term d = env.Deref(t);
  if (d.is_var()) return d.var_id() == var;
  if (!d.is_compound()) return false;
  for (const Term& a : d.args()) {
    if (OccursIn(var, a, env)) return true;
  }
  return false;
}

bool UnifyRec(const Term& a, const Term& b, Bindings& env) {
  Term x = env.Deref(a);
  Term y = env.Deref(b);
  if (x.SameNode(y)) return true;
  if (x.is_var()) {
    if (y.is_var() && y.var_id() == x.var_id()) return true;
    if (OccursIn(x.var_id(), y, env)) return false;
    return env.Bind(x.var_id(), y);
  }
  if (y.is_var()) {
    if (OccursIn(y.var_id(), x, env)) return false;
    return env.Bind(y.var_id(), x);
  }
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case Term::Kind::kAtom:
      return x.name() == y.name();
    case Term::Kind::kNumber:
      return x.number() == y.number();
    case Term::Kind::kCompound:
      if (x.name() != y.name() || x.arity() != y.arity()) return false;
      for (size_t i = 0; i < x.arity(); ++i) {
        if (!UnifyRec(x.arg(i), y.arg(i), env)) return false;
      }
      return true;
    case Term::Kind::kVar:
      break;
  }
  return false;
}

}  // namespace

Term Bindings::Resolve(const Term& t, size_t max_depth) const {
  return ResolveRec(*this, t, 1, max_depth);
}

bool Bindings::Bind(int var, const Term& value) {
  values_[var] = value;
  trail_.push_back(var);
  return true;
}

void Bindings::UndoTo(size_t mark) {
  while (trail_.size() > mark) {
    values_[trail_.back()] = Term();
    trail_.pop_back();
  }
}

bool Unify(const Term& a, const Term& b, Bindings& env) {
  size_t mark = env.mark();
  if (UnifyRec(a, b, env)) return true;
  env.UndoTo(mark);
  return false;
}

bool Identical(const Term& a, const Term& b, const Bindings& env) {
  Term x = env.Deref(a);
  Term y = env.Deref(b);
  if (x.SameNode(y)) return true;
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case Term::Kind::kVar:
      return x.var_id() == y.var_id();
    case Term::Kind::kAtom:
      return x.name() == y.name();
    case Term::Kind::kNumber:
      return x.number() == y.number();
    case Term::Kind::kCompound:
      if (x.name() != y.name() || x.arity() != y.arity()) return false;
      for (size_t i = 0; i < x.arity(); ++i) {
        if (!Identical(x.arg(i), y.arg(i), env)) return false;
      }
      return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Database

class Database {
 public:
  Database(Program program) : program_(std::move(program)) {
    for (size_t i = 0; i < program_.clauses.size(); ++i) {
      index_[Indicator(program_.clauses[i].head)].push_back(i);
    }
  }

  const Program& program() const { return program_; }

  const std::vector<size_t>* Lookup(const std::string& indicator) const {
    auto it = index_.find(indicator);
    return it == index_.end() ? nullptr : &it->second;
  }

  const Clause& clause(size_t i) const { return program_.clauses[i]; }

 private:
  Program program_;
  std::unordered_map<std::string, std::vector<size_t>> index_;
};

// ---------------------------------------------------------------------------
// Resolution machine

namespace {

struct ContNode;
using Cont = std::shared_ptr<const ContNode>;

// Goal continuation as a persistent list, so choicepoints can capture it
// without copying.
struct ContNode {
  Term goal;              // invalid for cut markers
  size_t cut_height = 0;  // choicepoint stack height to cut back to
  Cont next;
};

Cont PushGoal(Term goal, Cont next) {
  return std::make_shared<const ContNode>(
      ContNode{std::move(goal), 0, std::move(next)});
}

Cont PushCut(size_t height, Cont next) {
  return std::make_shared<const ContNode>(ContNode{Term(), height, std::move(next)});
}

struct ChoicePoint {
  size_t trail_mark;
  Cont cont;
  // Set when the alternative is "try the remaining clauses for goal".
  Term goal;
  const std::vector<size_t>* clauses = nullptr;
  size_t next_clause = 0;
};

// Whether a clause head can possibly match the goal, judged on the
// principal functors of head and first argument.
bool MayMatch(const Term& goal, const Term& head, const Bindings& env) {
  if (!goal.is_compound()) return true;
  Term g = env.Deref(goal.arg(0));
  const Term& h = head.arg(0);
  if (g.is_var() || h.is_var()) return true;
  if (g.kind() != h.kind()) return false;
  switch (g.kind()) {
    case Term::Kind::kAtom:
      return g.name() == h.name();
    case Term::Kind::kNumber:
      return g.number() == h.number();
    case Term::Kind::kCompound:
      return g.name() == h.name() && g.arity() == h.arity();
    default:
      return true;
  }
}

}  // namespace

class Query::Machine {
 public:
  Machine(std::shared_ptr<const Database> db, std::vector<Term> goals,
          std::vector<std::pair<std::string, int>> variables, int num_vars,
          EngineLimits limits)
      : db_(std::move(db)),
        variables_(std::move(variables)),
        limits_(limits) {
    for (int i = 0; i < num_vars; ++i) env_.NewVar();
    for (auto it = goals.rbegin(); it != goals.rend(); ++it) {
      cont_ = PushGoal(*it, cont_);
    }
  }

  std::optional<Solution> Next() {
    if (done_) return std::nullopt;
    bool found = started_ ? (Backtrack() && Run()) : Run();
    started_ = true;
    if (!found) {
      done_ = true;
      return std::nullopt;
    }
    if (limits_.max_solutions && found_ >= *limits_.max_solutions) {
      done_ = true;
      throw EngineError(EngineErrorKind::kResourceLimit,
                        "solution limit of " +
                            std::to_string(*limits_.max_solutions) +
                            " exceeded");
    }
    Solution s;
    s.index = found_++;
    for (const auto& [name, id] : variables_) {
      s.bindings.emplace_back(
          name, env_.Resolve(Term::Var(name, id), limits_.max_term_depth));
    }
    return s;
  }

  uint64_t steps() const { return steps_; }
  const Diagnostics& diagnostics() const { return diagnostics_; }

 private:
  void Step() {
    if (++steps_ > limits_.max_inference_steps) {
      done_ = true;
      throw EngineError(EngineErrorKind::kResourceLimit,
                        "inference step limit of " +
                            std::to_string(limits_.max_inference_steps) +
                            " exceeded");
    }
  }

  // Runs until the continuation is empty (a solution) or no choicepoint is
  // left.
  bool Run() {
    while (cont_ != nullptr) {
      Cont node = cont_;
      cont_ = node->next;
      if (!node->goal.valid()) {
        choicepoints_.resize(node->cut_height);
        continue;
      }
      Step();
      if (!Call(node->goal) && !Backtrack()) return false;
    }
    return true;
  }

  bool Backtrack() {
    while (!choicepoints_.empty()) {
      ChoicePoint cp = std::move(choicepoints_.back());
      choicepoints_.pop_back();
      env_.UndoTo(cp.trail_mark);
      if (cp.clauses == nullptr) {
        cont_ = std::move(cp.cont);
        return true;
      }
      Step();
      if (TryClauses(cp.goal, cp.cont, *cp.clauses, cp.next_clause)) {
        return true;
      }
    }
    return false;
  }

  size_t BoundedDepth(const Term& t, size_t depth) const {
    if (depth > limits_.max_term_depth) return depth;
    Term d = env_.Deref(t);
    if (!d.is_compound()) return depth;
    size_t deepest = depth;
    for (const Term& a : d.args()) {
      deepest = std::max(deepest, BoundedDepth(a, depth + 1));
      if (deepest > limits_.max_term_depth) break;
    }
    return deepest;
  }

  Term Rename(const Term& t, int base) {
    switch (t.kind()) {
      case Term::Kind::kVar:
        return Term::Var("", base + t.var_id());
      case Term::Kind::kCompound: {
        std::vector<Term> args;
        args.reserve(t.arity());
        bool changed = false;
        for (const Term& a : t.args()) {
          args.push_back(Rename(a, base));
          if (!args.back().SameNode(a)) changed = true;
        }
        if (!changed) return t;
        return Term::Compound(t.name(), std::move(args));
      }
      default:
        return t;
    }
  }

  bool TryClauses(const Term& goal, const Cont& cont,
                  const std::vector<size_t>& clauses, size_t start) {
    for (size_t i = start; i < clauses.size(); ++i) {
      const Clause& clause = db_->clause(clauses[i]);
      if (!MayMatch(goal, clause.head, env_)) continue;
      size_t mark = env_.mark();
      int base = env_.size();
      for (int v = 0; v < clause.num_vars; ++v) env_.NewVar();
      Term head = Rename(clause.head, base);
      if (!Unify(goal, head, env_)) {
        env_.UndoTo(mark);
        continue;
      }
      if (i + 1 < clauses.size()) {
        choicepoints_.push_back({mark, cont, goal, &clauses, i + 1});
      }
      cont_ = cont;
      for (auto it = clause.body.rbegin(); it != clause.body.rend(); ++it) {
        cont_ = PushGoal(Rename(*it, base), cont_);
      }
      return true;
    }
    return false;
  }

  [[noreturn]] void TypeError(const std::string& message) {
    done_ = true;
    throw EngineError(EngineErrorKind::kTypeError, message);
  }

  Number Eval(const Term& t) {
    Term d = env_.Deref(t);
    if (d.is_number()) return d.number();
    if (d.is_var()) TypeError("instantiation error in arithmetic expression");
    try {
      if (d.is_compound() && d.arity() == 2) {
        if (d.name() == "+") return Eval(d.arg(0)) + Eval(d.arg(1));
        if (d.name() == "-") return Eval(d.arg(0)) - Eval(d.arg(1));
        if (d.name() == "*") return Eval(d.arg(0)) * Eval(d.arg(1));
        if (d.name() == "/") return Eval(d.arg(0)) / Eval(d.arg(1));
      }
      if (d.is_compound() && d.arity() == 1 && d.name() == "-") {
        return -Eval(d.arg(0));
      }
    } catch (const ArithmeticError& e) {
      TypeError(std::string("evaluation error: ") + e.what());
    }
    TypeError("type error: evaluable expected, found " +
              ToString(env_.Resolve(d, limits_.max_term_depth)));
  }

  bool Compare(const std::string& op, const Term& a, const Term& b) {
    Number x = Eval(a);
    Number y = Eval(b);
    if (op == "<") return x < y;
    if (op == ">") return x > y;
    if (op == "=<") return x <= y;
    return x >= y;
  }

  bool Call(const Term& raw) {
    Term goal = env_.Deref(raw);
    if (goal.is_var()) TypeError("instantiation error: unbound goal");
    if (goal.is_number()) {
      TypeError("type error: callable expected, found " +
                goal.number().ToString());
    }
    if (BoundedDepth(goal, 1) > limits_.max_term_depth) {
      done_ = true;
      throw EngineError(EngineErrorKind::kResourceLimit,
                        "term depth limit of " +
                            std::to_string(limits_.max_term_depth) +
                            " exceeded");
    }
    const std::string& name = goal.name();
    const size_t arity = goal.is_compound() ? goal.arity() : 0;

    if (arity == 0) {
      if (name == "true") return true;
      if (name == "fail" || name == "false") return false;
    } else if (arity == 1) {
      if (name == "\\+") {
        if (!env_.Resolve(goal.arg(0), limits_.max_term_depth).IsGround()) {
          ++diagnostics_.nonground_negations;
        }
        // \+ G behaves as (G -> fail ; true).
        size_t barrier = choicepoints_.size();
        choicepoints_.push_back({env_.mark(), cont_, Term(), nullptr, 0});
        cont_ = PushGoal(goal.arg(0),
                         PushCut(barrier, PushGoal(Term::Atom("fail"), nullptr)));
        return true;
      }
      if (name == "ground") {
        return env_.Resolve(goal.arg(0), limits_.max_term_depth).IsGround();
      }
    } else if (arity == 2) {
      const Term& a = goal.arg(0);
      const Term& b = goal.arg(1);
      if (name == ",") {
        cont_ = PushGoal(a, PushGoal(b, cont_));
        return true;
      }
      if (name == ";") {
        Term lhs = env_.Deref(a);
        size_t barrier = choicepoints_.size();
        choicepoints_.push_back(
            {env_.mark(), PushGoal(b, cont_), Term(), nullptr, 0});
        if (lhs.Is("->", 2)) {
          cont_ = PushGoal(lhs.arg(0),
                           PushCut(barrier, PushGoal(lhs.arg(1), cont_)));
        } else {
          cont_ = PushGoal(a, cont_);
        }
        return true;
      }
      if (name == "->") {
        size_t barrier = choicepoints_.size();
        cont_ = PushGoal(a, PushCut(barrier, PushGoal(b, cont_)));
        return true;
      }
      if (name == "=") return Unify(a, b, env_);
      if (name == "\\=") {
        size_t mark = env_.mark();
        bool unifies = Unify(a, b, env_);
        env_.UndoTo(mark);
        return !unifies;
      }
      if (name == "==") return Identical(a, b, env_);
      if (name == "\\==") return !Identical(a, b, env_);
      if (name == "is") return Unify(a, Term::Num(Eval(b)), env_);
      if (name == "<" || name == ">" || name == "=<" || name == ">=") {
        return Compare(name, a, b);
      }
    }

    std::string indicator = name + "/" + std::to_string(arity);
    const std::vector<size_t>* clauses = db_->Lookup(indicator);
    if (clauses == nullptr) {
      ++diagnostics_.unknown_predicates[indicator];
      return false;
    }
    return TryClauses(goal, cont_, *clauses, 0);
  }

  std::shared_ptr<const Database> db_;
  std::vector<std::pair<std::string, int>> variables_;
  EngineLimits limits_;
  Bindings env_;
  Cont cont_;
  std::vector<ChoicePoint> choicepoints_;
  Diagnostics diagnostics_;
  uint64_t steps_ = 0;
  uint64_t found_ = 0;
  bool started_ = false;
  bool done_ = false;
};

Query::Query(std::shared_ptr<const Database> db, std::vector<Term> goals,
             std::vector<std::pair<std::string, int>> variables, int num_vars,
             EngineLimits limits)
    : machine_(std::make_unique<Machine>(std::move(db), std::move(goals),
                                         std::move(variables), num_vars,
                                         limits)) {}
Query::~Query() = default;
Query::Query(Query&&) noexcept = default;
Query& Query::operator=(Query&&) noexcept = default;

std::optional<Solution> Query::Next() { return machine_->Next(); }

std::vector<Solution> Query::All() {
  std::vector<Solution> out;
  while (auto s = Next()) out.push_back(std::move(*s));
  return out;
}

uint64_t Query::steps() const { return machine_->steps(); }
const Diagnostics& Query::diagnostics() const {
  return machine_->diagnostics();
}

// ---------------------------------------------------------------------------
// Engine

namespace {

constexpr std::string_view kGameIndependentSource =
    R"(game(F,F):-
    final(F).
game(S,F):-
    \+ final(S),
    legal(M,S),
    game(do(M,S),F).
holds(F, S):-
    initially(F, S).
holds(F, do(M, S)):-
    effect(F, M, S).
holds(F, do(M, S)):-
    holds(F, S),
    \+ abnormal(F, M, S).
)";

void CollectVars(const Term& t, std::vector<std::pair<std::string, int>>& out,
                 std::set<int>& seen, int& max_id) {
  if (t.is_var()) {
    max_id = std::max(max_id, t.var_id());
    if (t.name() != "_" && !t.name().empty() && seen.insert(t.var_id()).second) {
      out.emplace_back(t.name(), t.var_id());
    }
    return;
  }
  if (t.is_compound()) {
    for (const Term& a : t.args()) CollectVars(a, out, seen, max_id);
  }
}

}  // namespace

std::string_view GameIndependentSource() { return kGameIndependentSource; }

const Program& GameIndependentProgram() {
  static const Program* program = [] {
    auto [parsed, report] = ParseProgram(kGameIndependentSource, "gamma");
    (void)report;
    return new Program(std::move(parsed));
  }();
  return *program;
}

Engine::Engine(const Program& program, bool with_game_rules)
    : db_(std::make_shared<const Database>(
          with_game_rules ? GameIndependentProgram().Append(program)
                          : program)) {}

const Program& Engine::program() const { return db_->program(); }

Query Engine::Solve(std::vector<Term> goals, EngineLimits limits) const {
  std::vector<std::pair<std::string, int>> variables;
  std::set<int> seen;
  int max_id = -1;
  for (const Term& g : goals) CollectVars(g, variables, seen, max_id);
  return Query(db_, std::move(goals), std::move(variables), max_id + 1,
               limits);
}

Query Engine::Solve(std::string_view query_text, EngineLimits limits) const {
  ParsedQuery q = ParseQuery(query_text);
  std::set<int> seen;
  return Query(db_, std::move(q.goals), std::move(q.variables), q.num_vars,
               limits);
}

bool Engine::HoldsIn(const Term& fluent, const Term& situation,
                     EngineLimits limits) const {
  Query q = Solve({Term::Compound("holds", {fluent, situation})}, limits);
  return q.Next().has_value();
}

std::vector<Outcome> EnumerateOutcomes(const Program& game_program,
                                       EngineLimits limits) {
  Engine engine(game_program);
  Term init_var = Term::Var("I", 0);
  std::vector<Term> initials;
  {
    Query q = engine.Solve({Term::Compound("initial", {init_var})}, limits);
    while (auto s = q.Next()) initials.push_back(s->bindings.at(0).second);
  }
  if (initials.empty()) {
    throw EngineError(EngineErrorKind::kNoInitial,
                      "no initial/1 fact declares an initial situation");
  }

  std::vector<Outcome> outcomes;
  std::set<std::string> seen;
  size_t finals = 0;
  for (const Term& initial : initials) {
    Term final_var = Term::Var("F", 0);
    Query games =
        engine.Solve({Term::Compound("game", {initial, final_var})}, limits);
    std::vector<Term> traces;
    while (auto s = games.Next()) {
      if (s->bindings.at(0).second.IsGround()) {
        traces.push_back(s->bindings.at(0).second);
      }
    }
    finals += traces.size();
    for (const Term& trace : traces) {
      std::vector<Term> vars;
      for (int i = 0; i < 6; ++i) vars.push_back(Term::Var("U" + std::to_string(i), i));
      Term outcome = Term::Compound("outcome", vars);
      Query q = engine.Solve(
          {Term::Compound("finally", {outcome, trace})}, limits);
      while (auto s = q.Next()) {
        std::vector<Term> values;
        for (const auto& [name, value] : s->bindings) values.push_back(value);
        Term resolved = Term::Compound("outcome", std::move(values));
        if (!resolved.IsGround()) continue;
        std::string key = ToString(trace) + "|" + ToString(resolved);
        if (seen.insert(key).second) outcomes.push_back({trace, resolved});
      }
    }
  }
  if (finals == 0) {
    throw EngineError(EngineErrorKind::kNoOutcomes,
                      "no final situation is reachable from the initial "
                      "situation");
  }
  if (outcomes.empty()) {
    throw EngineError(EngineErrorKind::kNoOutcomes,
                      "final situations are reachable but no ground "
                      "finally(outcome(P1,M1,U1,P2,M2,U2), S) is derivable");
  }
  return outcomes;
}

std::string FormatSolution(const Solution& s) {
  if (s.bindings.empty()) return "true";
  std::string out;
  for (size_t i = 0; i < s.bindings.size(); ++i) {
    if (i > 0) out += ",\n";
    out += s.bindings[i].first + "=" + ToString(s.bindings[i].second);
  }
  return out;
}

}  // namespace gameform
