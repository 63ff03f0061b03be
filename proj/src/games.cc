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

#include "gameform/games.h"

#include <algorithm>
#include <cctype>

#include "gameform/parser.h"

namespace gameform {
namespace internal {
extern const std::string_view kPdSource;
extern const std::string_view kHdSource;
extern const std::string_view kMpSource;
extern const std::string_view kShSource;
extern const std::string_view kBosSource;
extern const std::string_view kSeqPdSource;
extern const std::string_view kRpsSource;
}  // namespace internal

namespace {

struct ClassNames {
  GameClass c;
  const char* snake;
  const char* short_name;
};

constexpr ClassNames kNames[] = {
    {GameClass::kPrisonersDilemma, "prisoners_dilemma", "PD"},
    {GameClass::kHawkDove, "hawk_dove", "HD"},
    {GameClass::kMatchingPennies, "matching_pennies", "MP"},
    {GameClass::kStagHunt, "stag_hunt", "SH"},
    {GameClass::kBattleOfSexes, "battle_of_sexes", "BS"},
    {GameClass::kSequentialPD, "sequential_pd", "SeqPD"},
    {GameClass::kRockPaperScissors, "rock_paper_scissors", "RPS"},
};

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) {
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  return out;
}

std::string MoveLabel(const Term& t) {
  return t.is_atom() ? t.name() : ToString(t);
}

// One strict (or weak) inequality between two named quad entries.
struct Constraint {
  bool column;  // which player's perspective
  char lhs;     // one of T R P S
  char rhs;
};

const Number& Pick(const OutcomeQuad& q, bool column, char which) {
  switch (which) {
    case 'T': return column ? q.t2 : q.t;
    case 'R': return column ? q.r2 : q.r;
    case 'P': return column ? q.p2 : q.p;
    default: return column ? q.s2 : q.s;
  }
}

// Adds "a > b" constraints for a chain such as "TRPS", for both players.
void Chain(std::vector<Constraint>& out, std::string_view order, bool row,
           bool column) {
  for (size_t i = 0; i + 1 < order.size(); ++i) {
    if (row) out.push_back({false, order[i], order[i + 1]});
    if (column) out.push_back({true, order[i], order[i + 1]});
  }
}

std::vector<Constraint> ConstraintsFor(GameClass c) {
  std::vector<Constraint> out;
  switch (c) {
    case GameClass::kPrisonersDilemma:
    case GameClass::kSequentialPD:
      Chain(out, "TRPS", true, true);
      break;
    case GameClass::kHawkDove:
      Chain(out, "TRSP", true, true);
      break;
    case GameClass::kStagHunt:
      Chain(out, "RTPS", true, true);
      break;
    case GameClass::kBattleOfSexes:
      out = {{false, 'R', 'P'}, {false, 'P', 'T'}, {false, 'P', 'S'},
             {true, 'P', 'R'},  {true, 'R', 'T'},  {true, 'R', 'S'}};
      break;
    case GameClass::kMatchingPennies:
      out = {{false, 'R', 'T'}, {false, 'R', 'S'}, {false, 'P', 'T'},
             {false, 'P', 'S'}, {true, 'T', 'R'},  {true, 'T', 'P'},
             {true, 'S', 'R'},  {true, 'S', 'P'}};
      break;
    case GameClass::kRockPaperScissors:
      break;
  }
  return out;
}

bool Holds(const Constraint& k, const OutcomeQuad& q, bool strict) {
  const Number& a = Pick(q, k.column, k.lhs);
  const Number& b = Pick(q, k.column, k.rhs);
  return strict ? a > b : a >= b;
}

std::string Describe(const Constraint& k, const OutcomeQuad& q, bool strict) {
  const Number& a = Pick(q, k.column, k.lhs);
  const Number& b = Pick(q, k.column, k.rhs);
  std::string out = k.column ? "col: " : "row: ";
  out += std::string(1, k.lhs) + "=" + a.ToString() +
         (strict ? " not > " : " not >= ") + std::string(1, k.rhs) + "=" +
         b.ToString();
  if (a == b) out += " (tie)";
  return out;
}

std::vector<Constraint> Violations(GameClass c, const OutcomeQuad& q,
                                   bool strict) {
  std::vector<Constraint> out;
  for (const Constraint& k : ConstraintsFor(c)) {
    if (!Holds(k, q, strict)) out.push_back(k);
  }
  return out;
}

bool SameLabelSet(const PayoffMatrix& m) {
  std::set<std::string> rows(m.row_actions.begin(), m.row_actions.end());
  std::set<std::string> cols(m.col_actions.begin(), m.col_actions.end());
  return rows == cols;
}

// Returns an empty string when the row-player signs on the off-diagonal
// cells follow a three-cycle a beats b beats c beats a, in either
// orientation of the row action order; otherwise a description.
std::string CyclicDominanceFailure(const PayoffMatrix& m) {
  const auto& a = m.row_actions;
  auto beats = [&](const std::string& x, const std::string& y) {
    return m.at(x, y).first > Number(0) && m.at(y, x).first < Number(0);
  };
  for (int orientation = 0; orientation < 2; ++orientation) {
    bool all = true;
    for (size_t i = 0; i < 3 && all; ++i) {
      size_t j = orientation == 0 ? (i + 1) % 3 : (i + 2) % 3;
      all = beats(a[i], a[j]);
    }
    if (all) return "";
  }
  for (size_t i = 0; i < 3; ++i) {
    for (size_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      const Number& u = m.at(a[i], a[j]).first;
      const Number& v = m.at(a[j], a[i]).first;
      if (!(u > Number(0) && v < Number(0)) &&
          !(u < Number(0) && v > Number(0))) {
        return "no strict winner between " + a[i] + " and " + a[j] +
               ": row payoffs " + u.ToString() + " and " + v.ToString();
      }
    }
  }
  return "dominance is transitive, not cyclic";
}

// Structural check for a sequential game: exactly one player controls the
// initial situation and control passes to exactly one other player after
// every legal first move. Returns a description of the first problem.
std::string SequentialStructureFailure(const Program& program,
                                       EngineLimits limits) {
  Engine engine(program);
  Term var_i = Term::Var("I", 0);
  std::vector<Term> initials;
  {
    Query q = engine.Solve({Term::Compound("initial", {var_i})}, limits);
    for (auto& s : q.All()) initials.push_back(s.bindings.at(0).second);
  }
  if (initials.empty()) return "no initial situation";

  auto controllers = [&](const Term& situation) {
    Term p = Term::Var("P", 0);
    Query q = engine.Solve(
        {Term::Compound("holds",
                        {Term::Compound("control", {p}), situation})},
        limits);
    std::set<std::string> out;
    for (auto& s : q.All()) out.insert(ToString(s.bindings.at(0).second));
    return out;
  };
  auto join = [](const std::set<std::string>& names) {
    std::string out;
    for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
    return out.empty() ? std::string("nobody") : out;
  };

  for (const Term& initial : initials) {
    std::set<std::string> first = controllers(initial);
    if (first.size() != 1) {
      return "expected exactly one player in control of " +
             ToString(initial) + ", found " + join(first);
    }
    Term mover = ParseTerm(*first.begin());
    Term m = Term::Var("M", 0);
    Query q = engine.Solve(
        {Term::Compound("legal",
                        {Term::Compound("choice", {mover, m}), initial})},
        limits);
    std::vector<Solution> moves = q.All();
    if (moves.empty()) return "the first mover has no legal move";
    for (const Solution& s : moves) {
      Term move = Term::Compound("choice", {mover, s.bindings.at(0).second});
      Term next = Term::Compound("do", {move, initial});
      std::set<std::string> second = controllers(next);
      if (second.size() != 1 || second.count(*first.begin())) {
        return "expected control to pass to exactly one other player after " +
               ToString(move) + ", found " + join(second);
      }
    }
  }
  return "";
}

nlohmann::ordered_json NumberJson(const Number& n) {
  if (n.is_integer()) return n.numerator();
  return n.ToString();
}

}  // namespace

const char* ToString(GameClass c) {
  for (const auto& n : kNames) {
    if (n.c == c) return n.snake;
  }
  return "unknown";
}

const char* ShortName(GameClass c) {
  for (const auto& n : kNames) {
    if (n.c == c) return n.short_name;
  }
  return "?";
}

std::optional<GameClass> ParseGameClass(std::string_view name) {
  std::string key = Lower(name);
  for (const auto& n : kNames) {
    if (key == n.snake || key == Lower(n.short_name)) return n.c;
  }
  // CamelCase enum spellings such as "PrisonersDilemma".
  std::string squashed;
  for (char ch : key) {
    if (ch != '_' && ch != '-') squashed += ch;
  }
  for (const auto& n : kNames) {
    std::string s;
    for (const char* p = n.snake; *p; ++p) {
      if (*p != '_') s += *p;
    }
    if (s == squashed) return n.c;
  }
  return std::nullopt;
}

std::string_view CanonicalSource(GameClass c) {
  switch (c) {
    case GameClass::kPrisonersDilemma: return internal::kPdSource;
    case GameClass::kHawkDove: return internal::kHdSource;
    case GameClass::kMatchingPennies: return internal::kMpSource;
    case GameClass::kStagHunt: return internal::kShSource;
    case GameClass::kBattleOfSexes: return internal::kBosSource;
    case GameClass::kSequentialPD: return internal::kSeqPdSource;
    case GameClass::kRockPaperScissors: return internal::kRpsSource;
  }
  return {};
}

Program CanonicalGame(GameClass c) {
  auto [program, report] =
      ParseProgram(CanonicalSource(c), std::string(ToString(c)) + ".pl");
  if (!report.ok) {
    throw std::logic_error(std::string("canonical game does not parse: ") +
                           ToString(c));
  }
  return program;
}

bool PayoffMatrix::IsZeroSum() const {
  for (const auto& [key, payoff] : cells) {
    if (payoff.first + payoff.second != Number(0)) return false;
  }
  return true;
}

PayoffMatrix PayoffMatrix::FromCells(std::vector<std::string> rows,
                                     std::vector<std::string> cols,
                                     const std::vector<PayoffPair>& row_major) {
  if (row_major.size() != rows.size() * cols.size()) {
    throw std::invalid_argument("cell count does not match matrix shape");
  }
  PayoffMatrix m;
  m.row_actions = std::move(rows);
  m.col_actions = std::move(cols);
  size_t k = 0;
  for (const auto& r : m.row_actions) {
    for (const auto& c : m.col_actions) m.cells[{r, c}] = row_major[k++];
  }
  return m;
}

nlohmann::json ToJson(const PayoffMatrix& m) {
  nlohmann::ordered_json j;
  j["row_actions"] = m.row_actions;
  j["col_actions"] = m.col_actions;
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const auto& r : m.row_actions) {
    for (const auto& c : m.col_actions) {
      auto it = m.cells.find({r, c});
      if (it == m.cells.end()) continue;
      cells.push_back({{"row", r},
                       {"col", c},
                       {"u_row", NumberJson(it->second.first)},
                       {"u_col", NumberJson(it->second.second)}});
    }
  }
  j["cells"] = cells;
  return nlohmann::json::parse(j.dump());
}

PayoffMatrix ExtractMatrix(const Program& game_program, EngineLimits limits) {
  std::vector<Outcome> outcomes;
  try {
    outcomes = EnumerateOutcomes(game_program, limits);
  } catch (const EngineError& e) {
    throw ExtractionError(ToString(e.kind()), e.what());
  } catch (const ArithmeticError& e) {
    throw ExtractionError("type_error", e.what());
  }

  PayoffMatrix m;
  for (const Outcome& o : outcomes) {
    const Term& u_row = o.outcome.arg(2);
    const Term& u_col = o.outcome.arg(5);
    if (!u_row.is_number() || !u_col.is_number()) {
      throw ExtractionError(
          "non_numeric_payoff",
          "payoffs must be numbers, found " + ToString(o.outcome));
    }
    std::string row = MoveLabel(o.outcome.arg(1));
    std::string col = MoveLabel(o.outcome.arg(4));
    if (std::find(m.row_actions.begin(), m.row_actions.end(), row) ==
        m.row_actions.end()) {
      m.row_actions.push_back(row);
    }
    if (std::find(m.col_actions.begin(), m.col_actions.end(), col) ==
        m.col_actions.end()) {
      m.col_actions.push_back(col);
    }
    PayoffPair payoff{u_row.number(), u_col.number()};
    auto [it, inserted] = m.cells.emplace(std::make_pair(row, col), payoff);
    if (!inserted && it->second != payoff) {
      throw ExtractionError(
          "conflict", "profile (" + row + ", " + col + ") has payoffs (" +
                          it->second.first.ToString() + ", " +
                          it->second.second.ToString() + ") and (" +
                          payoff.first.ToString() + ", " +
                          payoff.second.ToString() + ")");
    }
  }
  for (const auto& r : m.row_actions) {
    for (const auto& c : m.col_actions) {
      if (!m.cells.count({r, c})) {
        throw ExtractionError("incomplete", "no outcome for profile (" + r +
                                                ", " + c + ")");
      }
    }
  }
  return m;
}

OutcomeQuad QuadFor(const PayoffMatrix& m, const Labeling& l) {
  const PayoffPair& cc = m.at(l.row_cooperate, l.col_cooperate);
  const PayoffPair& cd = m.at(l.row_cooperate, l.col_defect);
  const PayoffPair& dc = m.at(l.row_defect, l.col_cooperate);
  const PayoffPair& dd = m.at(l.row_defect, l.col_defect);
  OutcomeQuad q;
  q.r = cc.first;
  q.s = cd.first;
  q.t = dc.first;
  q.p = dd.first;
  q.r2 = cc.second;
  q.t2 = cd.second;
  q.s2 = dc.second;
  q.p2 = dd.second;
  return q;
}

std::vector<Labeling> Labelings(const PayoffMatrix& m) {
  std::vector<Labeling> out;
  if (!m.HasShape(2, 2)) return out;
  const auto& r = m.row_actions;
  const auto& c = m.col_actions;
  for (int rs = 0; rs < 2; ++rs) {
    for (int cs = 0; cs < 2; ++cs) {
      out.push_back({r[rs], r[1 - rs], c[cs], c[1 - cs]});
    }
  }
  return out;
}

std::set<GameClass> Classify(const PayoffMatrix& m,
                             const ClassifyOptions& options) {
  std::set<GameClass> out;
  if (m.HasShape(3, 3)) {
    if (m.IsZeroSum()) out.insert(GameClass::kRockPaperScissors);
    return out;
  }
  if (!m.HasShape(2, 2)) return out;
  for (const Labeling& l : Labelings(m)) {
    OutcomeQuad q = QuadFor(m, l);
    for (GameClass c : kClassicGameClasses) {
      if (!Violations(c, q, options.strict).empty()) continue;
      if (c == GameClass::kMatchingPennies && options.require_zero_sum &&
          !m.IsZeroSum()) {
        continue;
      }
      out.insert(c);
    }
  }
  return out;
}

const char* ToString(DefectKind kind) {
  switch (kind) {
    case DefectKind::kOrderingViolation: return "ordering_violation";
    case DefectKind::kExtractionFailure: return "extraction_failure";
    case DefectKind::kWrongShape: return "wrong_shape";
    case DefectKind::kAsymmetryViolation: return "asymmetry_violation";
    case DefectKind::kZeroSumViolation: return "zero_sum_violation";
  }
  return "unknown";
}

bool SemanticVerdict::HasDefect(DefectKind kind) const {
  return std::any_of(defects.begin(), defects.end(),
                     [kind](const Defect& d) { return d.kind == kind; });
}

nlohmann::json ToJson(const SemanticVerdict& v) {
  nlohmann::ordered_json j;
  j["ok"] = v.ok;
  j["expected"] = ToString(v.expected);
  nlohmann::ordered_json detected = nlohmann::ordered_json::array();
  for (GameClass c : v.detected_classes) detected.push_back(ToString(c));
  j["detected_classes"] = detected;
  nlohmann::ordered_json defects = nlohmann::ordered_json::array();
  for (const Defect& d : v.defects) {
    defects.push_back({{"kind", ToString(d.kind)}, {"detail", d.detail}});
  }
  j["defects"] = defects;
  j["matrix"] = v.matrix ? nlohmann::ordered_json::parse(
                               ToJson(*v.matrix).dump())
                         : nlohmann::ordered_json(nullptr);
  return nlohmann::json::parse(j.dump());
}

namespace {

std::string ShapeOf(const PayoffMatrix& m) {
  return std::to_string(m.row_actions.size()) + "x" +
         std::to_string(m.col_actions.size());
}

// Explains why `expected` does not hold on a 2x2 matrix, using the labeling
// with the fewest violated constraints.
void ExplainOrdering(const PayoffMatrix& m, GameClass expected,
                     const ClassifyOptions& options,
                     std::vector<Defect>& defects) {
  std::vector<Labeling> labelings = Labelings(m);
  const Labeling* best = nullptr;
  std::vector<Constraint> best_violations;
  for (const Labeling& l : labelings) {
    auto v = Violations(expected, QuadFor(m, l), options.strict);
    if (best == nullptr || v.size() < best_violations.size()) {
      best = &l;
      best_violations = std::move(v);
    }
  }
  OutcomeQuad q = QuadFor(m, *best);
  std::string labels = " [C=" + best->row_cooperate + "/" +
                       best->col_cooperate + ", D=" + best->row_defect + "/" +
                       best->col_defect + "]";
  bool row_bad = false, col_bad = false;
  for (const Constraint& k : best_violations) {
    (k.column ? col_bad : row_bad) = true;
    defects.push_back({DefectKind::kOrderingViolation,
                       Describe(k, q, options.strict) + labels});
  }
  bool symmetric_class = expected == GameClass::kPrisonersDilemma ||
                         expected == GameClass::kHawkDove ||
                         expected == GameClass::kStagHunt ||
                         expected == GameClass::kSequentialPD;
  if (symmetric_class && row_bad != col_bad) {
    defects.push_back(
        {DefectKind::kAsymmetryViolation,
         std::string(row_bad ? "col" : "row") +
             " payoffs satisfy the ordering but " +
             (row_bad ? "row" : "col") + " payoffs do not"});
  }
  if (best_violations.empty() && expected == GameClass::kMatchingPennies &&
      options.require_zero_sum && !m.IsZeroSum()) {
    for (const auto& [key, payoff] : m.cells) {
      if (payoff.first + payoff.second != Number(0)) {
        defects.push_back(
            {DefectKind::kZeroSumViolation,
             "(" + key.first + ", " + key.second + ") sums to " +
                 (payoff.first + payoff.second).ToString()});
      }
    }
  }
}

}  // namespace

SemanticVerdict CheckSemantics(const Program& game_program,
                               GameClass expected, EngineLimits limits,
                               const ClassifyOptions& options) {
  SemanticVerdict v;
  v.expected = expected;
  try {
    v.matrix = ExtractMatrix(game_program, limits);
  } catch (const ExtractionError& e) {
    v.defects.push_back({DefectKind::kExtractionFailure,
                         e.reason() + ": " + e.what()});
    return v;
  }
  const PayoffMatrix& m = *v.matrix;
  v.detected_classes = Classify(m, options);

  if (expected == GameClass::kRockPaperScissors) {
    if (!m.HasShape(3, 3)) {
      v.defects.push_back({DefectKind::kWrongShape,
                           "expected 3x3, got " + ShapeOf(m)});
    } else if (!SameLabelSet(m)) {
      v.defects.push_back(
          {DefectKind::kWrongShape,
           "row and column players have different move sets"});
    } else {
      for (const auto& [key, payoff] : m.cells) {
        if (payoff.first + payoff.second != Number(0)) {
          v.defects.push_back(
              {DefectKind::kZeroSumViolation,
               "(" + key.first + ", " + key.second + ") sums to " +
                   (payoff.first + payoff.second).ToString()});
        }
      }
      std::string cyclic = CyclicDominanceFailure(m);
      if (!cyclic.empty()) {
        v.defects.push_back({DefectKind::kOrderingViolation, cyclic});
      }
    }
    if (!v.defects.empty()) {
      v.detected_classes.erase(GameClass::kRockPaperScissors);
    }
  } else if (!m.HasShape(2, 2)) {
    v.defects.push_back(
        {DefectKind::kWrongShape, "expected 2x2, got " + ShapeOf(m)});
  } else {
    if (v.detected_classes.count(GameClass::kPrisonersDilemma) ||
        expected == GameClass::kSequentialPD) {
      std::string structure;
      try {
        structure = SequentialStructureFailure(game_program, limits);
      } catch (const EngineError& e) {
        structure = std::string(ToString(e.kind())) + ": " + e.what();
      }
      if (structure.empty() &&
          v.detected_classes.count(GameClass::kPrisonersDilemma)) {
        v.detected_classes.insert(GameClass::kSequentialPD);
      } else if (!structure.empty() &&
                 expected == GameClass::kSequentialPD) {
        v.defects.push_back({DefectKind::kWrongShape, structure});
      }
    }
    GameClass ordering_class = expected == GameClass::kSequentialPD
                                   ? GameClass::kPrisonersDilemma
                                   : expected;
    if (!v.detected_classes.count(ordering_class)) {
      ExplainOrdering(m, ordering_class, options, v.defects);
    }
  }
  v.ok = v.detected_classes.count(expected) > 0 && v.defects.empty();
  return v;
}

}  // namespace gameform
