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

#ifndef GAMEFORM_CORPUS_H_
#define GAMEFORM_CORPUS_H_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gameform/games.h"

namespace gameform {

enum class Style { kStandard, kNonStandard };
enum class PayoffKind { kNumerical, kNonNumerical };

const char* ToString(Style s);
const char* ToString(PayoffKind p);
std::optional<Style> ParseStyle(std::string_view name);
std::optional<PayoffKind> ParsePayoffKind(std::string_view name);

struct DescriptionRecord {
  std::string id;
  GameClass game_class = GameClass::kPrisonersDilemma;
  Style style = Style::kStandard;
  PayoffKind payoffs = PayoffKind::kNumerical;
  std::string text;
  // A non-empty note marks the record as excluded from semantic scoring
  // and says why.
  std::optional<std::string> notes;

  bool excluded() const { return notes.has_value() && !notes->empty(); }

  friend bool operator==(const DescriptionRecord&,
                         const DescriptionRecord&) = default;
};

using CellKey = std::pair<Style, PayoffKind>;

struct Manifest {
  std::vector<DescriptionRecord> records;

  // Record count per (style, payoffs) cell; all four cells are present.
  std::map<CellKey, size_t> counts() const;
  const DescriptionRecord* Find(std::string_view id) const;
};

class ManifestError : public std::runtime_error {
 public:
  // `code` is "parse", "invalid" or "duplicate_id"; `line` is 1-based.
  ManifestError(std::string code, int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        code_(std::move(code)),
        line_(line) {}
  const std::string& code() const { return code_; }
  int line() const { return line_; }

 private:
  std::string code_;
  int line_;
};

// JSON-lines, one DescriptionRecord per line. Blank lines are skipped.
Manifest ParseManifest(std::string_view jsonl);
Manifest LoadManifest(const std::string& path);

// Canonical serialization: fields in schema order, one record per line.
std::string SaveManifest(const Manifest& m);

// True iff the cells hold 5 standard and 50 non-standard descriptions for
// each payoff kind.
bool PaperShape(const Manifest& m);

// Reference program for a record: <manifest dir>/gold/<id>.pl.
std::string GoldProgramPath(const std::string& manifest_path,
                            const std::string& id);

}  // namespace gameform

#endif  // GAMEFORM_CORPUS_H_
