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

#include "gameform/corpus.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace gameform {

const char* ToString(Style s) {
  return s == Style::kStandard ? "standard" : "non_standard";
}

const char* ToString(PayoffKind p) {
  return p == PayoffKind::kNumerical ? "numerical" : "non_numerical";
}

std::optional<Style> ParseStyle(std::string_view name) {
  if (name == "standard") return Style::kStandard;
  if (name == "non_standard") return Style::kNonStandard;
  return std::nullopt;
}

std::optional<PayoffKind> ParsePayoffKind(std::string_view name) {
  if (name == "numerical") return PayoffKind::kNumerical;
  if (name == "non_numerical") return PayoffKind::kNonNumerical;
  return std::nullopt;
}

std::map<CellKey, size_t> Manifest::counts() const {
  std::map<CellKey, size_t> out;
  for (Style s : {Style::kStandard, Style::kNonStandard}) {
    for (PayoffKind p : {PayoffKind::kNumerical, PayoffKind::kNonNumerical}) {
      out[{s, p}] = 0;
    }
  }
  for (const auto& r : records) ++out[{r.style, r.payoffs}];
  return out;
}

const DescriptionRecord* Manifest::Find(std::string_view id) const {
  for (const auto& r : records) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

namespace {

std::string RequireString(const nlohmann::json& j, const char* key,
                          int line) {
  if (!j.contains(key)) {
    throw ManifestError("invalid", line, std::string("missing field '") +
                                             key + "'");
  }
  if (!j[key].is_string()) {
    throw ManifestError("invalid", line,
                        std::string("field '") + key + "' must be a string");
  }
  return j[key].get<std::string>();
}

}  // namespace

Manifest ParseManifest(std::string_view jsonl) {
  static const std::set<std::string> kFields = {
      "id", "game_class", "style", "payoffs", "text", "notes"};
  Manifest m;
  std::set<std::string> ids;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ManifestError("parse", number, e.what());
    }
    if (!j.is_object()) {
      throw ManifestError("parse", number, "expected a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
      if (!kFields.count(key)) {
        throw ManifestError("invalid", number, "unknown field '" + key + "'");
      }
    }
    DescriptionRecord r;
    r.id = RequireString(j, "id", number);
    if (r.id.empty()) throw ManifestError("invalid", number, "empty id");
    std::string cls = RequireString(j, "game_class", number);
    auto parsed_class = ParseGameClass(cls);
    if (!parsed_class) {
      throw ManifestError("invalid", number, "unknown game_class '" + cls + "'");
    }
    r.game_class = *parsed_class;
    std::string style = RequireString(j, "style", number);
    auto parsed_style = ParseStyle(style);
    if (!parsed_style) {
      throw ManifestError("invalid", number, "unknown style '" + style + "'");
    }
    r.style = *parsed_style;
    std::string payoffs = RequireString(j, "payoffs", number);
    auto parsed_payoffs = ParsePayoffKind(payoffs);
    if (!parsed_payoffs) {
      throw ManifestError("invalid", number,
                          "unknown payoffs '" + payoffs + "'");
    }
    r.payoffs = *parsed_payoffs;
    r.text = RequireString(j, "text", number);
    if (r.text.find_first_not_of(" \t\r\n") == std::string::npos) {
      throw ManifestError("invalid", number, "empty text");
    }
    if (j.contains("notes") && !j["notes"].is_null()) {
      r.notes = RequireString(j, "notes", number);
    }
    if (!ids.insert(r.id).second) {
      throw ManifestError("duplicate_id", number, "duplicate id '" + r.id + "'");
    }
    m.records.push_back(std::move(r));
  }
  return m;
}

Manifest LoadManifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read manifest " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseManifest(ss.str());
}

std::string SaveManifest(const Manifest& m) {
  std::string out;
  for (const auto& r : m.records) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["game_class"] = ToString(r.game_class);
    j["style"] = ToString(r.style);
    j["payoffs"] = ToString(r.payoffs);
    j["text"] = r.text;
    if (r.notes) j["notes"] = *r.notes;
    out += j.dump() + "\n";
  }
  return out;
}

bool PaperShape(const Manifest& m) {
  auto c = m.counts();
  return c[{Style::kStandard, PayoffKind::kNumerical}] == 5 &&
         c[{Style::kStandard, PayoffKind::kNonNumerical}] == 5 &&
         c[{Style::kNonStandard, PayoffKind::kNumerical}] == 50 &&
         c[{Style::kNonStandard, PayoffKind::kNonNumerical}] == 50;
}

std::string GoldProgramPath(const std::string& manifest_path,
                            const std::string& id) {
  std::filesystem::path dir =
      std::filesystem::path(manifest_path).parent_path();
  return (dir / "gold" / (id + ".pl")).string();
}

}  // namespace gameform
