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

#ifndef GAMEFORM_GAMES_H_
#define GAMEFORM_GAMES_H_

#include <array>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "gameform/engine.h"
#include "gameform/term.h"

namespace gameform {

enum class GameClass {
  kPrisonersDilemma,
  kHawkDove,
  kMatchingPennies,
  kStagHunt,
  kBattleOfSexes,
  kSequentialPD,
  kRockPaperScissors,
};

inline constexpr std::array<GameClass, 7> kAllGameClasses = {
    GameClass::kPrisonersDilemma, GameClass::kHawkDove,
    GameClass::kMatchingPennies,  GameClass::kStagHunt,
    GameClass::kBattleOfSexes,    GameClass::kSequentialPD,
    GameClass::kRockPaperScissors};

// The five simultaneous 2x2 classes.
inline constexpr std::array<GameClass, 5> kClassicGameClasses = {
    GameClass::kPrisonersDilemma, GameClass::kHawkDove,
    GameClass::kMatchingPennies, GameClass::kStagHunt,
    GameClass::kBattleOfSexes};

// Snake-case name, e.g. "battle_of_sexes".
const char* ToString(GameClass c);
// Short label used in reports: PD, HD, MP, SH, BS, SeqPD, RPS.
const char* ShortName(GameClass c);
// Accepts the snake-case name or the short label, case-insensitively.
std::optional<GameClass> ParseGameClass(std::string_view name);

// Shipped game-specific program for each class, without the
// game-independent rules.
std::string_view CanonicalSource(GameClass c);
Program CanonicalGame(GameClass c);

using PayoffPair = std::pair<Number, Number>;  // (row, column)

// Outcome table over discovered move labels. Actions keep the order in which
// they first appear in the enumerated outcomes.
struct PayoffMatrix {
  std::vector<std::string> row_actions;
  std::vector<std::string> col_actions;
  std::map<std::pair<std::string, std::string>, PayoffPair> cells;

  const PayoffPair& at(const std::string& row, const std::string& col) const {
    return cells.at({row, col});
  }
  bool HasShape(size_t rows, size_t cols) const {
    return row_actions.size() == rows && col_actions.size() == cols;
  }
  bool IsZeroSum() const;

  // Builds a matrix from a row-major list of (row, col) payoff pairs.
  static PayoffMatrix FromCells(std::vector<std::string> rows,
                                std::vector<std::string> cols,
                                const std::vector<PayoffPair>& row_major);
};

nlohmann::json ToJson(const PayoffMatrix& m);

// Why a payoff matrix could not be read off a game program.
class ExtractionError : public std::runtime_error {
 public:
  // `reason` is one of no_initial, no_outcomes, resource_limit, type_error,
  // non_numeric_payoff, conflict, incomplete.
  ExtractionError(std::string reason, const std::string& message)
      : std::runtime_error(message), reason_(std::move(reason)) {}
  const std::string& reason() const { return reason_; }

 private:
  std::string reason_;
};

// Enumerates outcomes and maps outcome(P1,M1,U1,P2,M2,U2) to the cell
// (M1, M2) with payoffs (U1, U2); P1 is the row player.
PayoffMatrix ExtractMatrix(const Program& game_program,
                           EngineLimits limits = {});

// T/R/P/S of both players under one labeling of the moves as cooperate and
// defect. Primed values are the column player's.
struct OutcomeQuad {
  Number t, r, p, s;
  Number t2, r2, p2, s2;
};

struct Labeling {
  std::string row_cooperate, row_defect;
  std::string col_cooperate, col_defect;
};

// Requires a 2x2 matrix whose labels appear in the labeling.
OutcomeQuad QuadFor(const PayoffMatrix& m, const Labeling& labeling);

// All (up to 4) cooperate/defect assignments of a 2x2 matrix, identity
// labeling first.
std::vector<Labeling> Labelings(const PayoffMatrix& m);

struct ClassifyOptions {
  bool strict = true;            // ">" rather than ">="
  bool require_zero_sum = true;  // for matching pennies
};

// Classes whose ordering constraints hold under some labeling. A 3x3
// zero-sum matrix yields {RockPaperScissors}; other shapes yield {}.
std::set<GameClass> Classify(const PayoffMatrix& m,
                             const ClassifyOptions& options = {});

enum class DefectKind {
  kOrderingViolation,
  kExtractionFailure,
  kWrongShape,
  kAsymmetryViolation,
  kZeroSumViolation,
};

const char* ToString(DefectKind kind);

struct Defect {
  DefectKind kind;
  std::string detail;
};

struct SemanticVerdict {
  bool ok = false;
  std::set<GameClass> detected_classes;
  GameClass expected = GameClass::kPrisonersDilemma;
  std::vector<Defect> defects;
  std::optional<PayoffMatrix> matrix;

  bool HasDefect(DefectKind kind) const;
};

nlohmann::json ToJson(const SemanticVerdict& v);

// Extracts the payoff matrix, classifies it and explains any mismatch with
// the expected class. Never throws for a defective game program.
SemanticVerdict CheckSemantics(const Program& game_program,
                               GameClass expected, EngineLimits limits = {},
                               const ClassifyOptions& options = {});

}  // namespace gameform

#endif  // GAMEFORM_GAMES_H_
