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

#include <set>
#include <string>

#include "doctest.h"
#include "gameform/corpus.h"
#include "gameform/games.h"
#include "gameform/parser.h"
#include "test_util.h"

namespace gameform {
namespace {

using testing::DataPath;
using testing::ReadData;

std::string Line(const std::string& id, const std::string& extra = "") {
  return R"({"id":")" + id +
         R"(","game_class":"stag_hunt","style":"standard",)"
         R"("payoffs":"numerical","text":"Two hunters.")" +
         extra + "}\n";
}

ManifestError ErrorOf(const std::string& text) {
  try {
    ParseManifest(text);
  } catch (const ManifestError& e) {
    return e;
  }
  FAIL("expected ManifestError");
  return ManifestError("", 0, "");
}

TEST_CASE("style and payoff names round-trip") {
  for (Style s : {Style::kStandard, Style::kNonStandard}) {
    CHECK(ParseStyle(ToString(s)) == s);
  }
  for (PayoffKind p : {PayoffKind::kNumerical, PayoffKind::kNonNumerical}) {
    CHECK(ParsePayoffKind(ToString(p)) == p);
  }
  CHECK_FALSE(ParseStyle("nonstandard").has_value());
}

TEST_CASE("manifest records parse with optional notes") {
  Manifest m = ParseManifest(Line("a") + "\n" +
                             Line("b", R"(,"notes":"ambiguous payoffs")"));
  REQUIRE(m.records.size() == 2);
  CHECK(m.records[0].game_class == GameClass::kStagHunt);
  CHECK_FALSE(m.records[0].excluded());
  CHECK(m.records[1].excluded());
  CHECK(*m.records[1].notes == "ambiguous payoffs");
  CHECK(m.Find("b") == &m.records[1]);
  CHECK(m.Find("c") == nullptr);
}

TEST_CASE("an empty note does not exclude") {
  Manifest m = ParseManifest(Line("a", R"(,"notes":"")"));
  CHECK_FALSE(m.records[0].excluded());
}

TEST_CASE("manifest errors carry a code and line") {
  ManifestError dup = ErrorOf(Line("a") + Line("a"));
  CHECK(dup.code() == "duplicate_id");
  CHECK(dup.line() == 2);
  ManifestError bad = ErrorOf(Line("a") + "{oops\n");
  CHECK(bad.code() == "parse");
  CHECK(bad.line() == 2);
  CHECK(ErrorOf(R"({"id":"a"})"
                "\n")
            .code() == "invalid");
  CHECK(ErrorOf(Line("a", R"(,"colour":"red")")).code() == "invalid");
  std::string wrong_class = Line("a");
  wrong_class.replace(wrong_class.find("stag_hunt"), 9, "chicken");
  CHECK(ErrorOf(wrong_class).code() == "invalid");
  std::string empty_text = Line("a");
  empty_text.replace(empty_text.find("Two hunters."), 12, "  ");
  CHECK(ErrorOf(empty_text).code() == "invalid");
}

TEST_CASE("counts always list the four cells") {
  Manifest empty;
  auto c = empty.counts();
  CHECK(c.size() == 4);
  for (const auto& [cell, n] : c) CHECK(n == 0);
  CHECK_FALSE(PaperShape(empty));
}

TEST_CASE("paper shape needs 5/5/50/50") {
  Manifest m;
  int next = 0;
  auto add = [&](Style s, PayoffKind p, int n) {
    for (int i = 0; i < n; ++i) {
      m.records.push_back({"r" + std::to_string(next++),
                           GameClass::kPrisonersDilemma, s, p, "t",
                           std::nullopt});
    }
  };
  add(Style::kStandard, PayoffKind::kNumerical, 5);
  add(Style::kStandard, PayoffKind::kNonNumerical, 5);
  add(Style::kNonStandard, PayoffKind::kNumerical, 50);
  add(Style::kNonStandard, PayoffKind::kNonNumerical, 49);
  CHECK_FALSE(PaperShape(m));
  add(Style::kNonStandard, PayoffKind::kNonNumerical, 1);
  CHECK(PaperShape(m));
}

TEST_CASE("saving and loading a manifest is lossless") {
  std::string shipped = ReadData("corpus/seed_manifest.jsonl");
  Manifest m = ParseManifest(shipped);
  CHECK(SaveManifest(m) == shipped);
  m.records[0].notes = "check wording";
  Manifest again = ParseManifest(SaveManifest(m));
  CHECK(again.records == m.records);
}

TEST_CASE("gold program paths sit next to the manifest") {
  CHECK(GoldProgramPath("/x/corpus/seed_manifest.jsonl", "ns_pd_arms") ==
        "/x/corpus/gold/ns_pd_arms.pl");
}

TEST_CASE("the seed corpus covers every class in both styles") {
  Manifest m = LoadManifest(DataPath("corpus/seed_manifest.jsonl"));
  CHECK(m.records.size() == 22);
  std::set<std::pair<GameClass, Style>> seen;
  for (const auto& r : m.records) seen.insert({r.game_class, r.style});
  for (GameClass c : kClassicGameClasses) {
    CHECK(seen.count({c, Style::kStandard}));
    CHECK(seen.count({c, Style::kNonStandard}));
  }
  CHECK(m.Find("gen_seq_pd") != nullptr);
  CHECK(m.Find("gen_rps") != nullptr);
}

TEST_CASE("every gold program is well-formed and has its labelled class") {
  std::string path = DataPath("corpus/seed_manifest.jsonl");
  Manifest m = LoadManifest(path);
  for (const auto& r : m.records) {
    CAPTURE(r.id);
    std::string src = ReadData("corpus/gold/" + r.id + ".pl");
    auto [program, report] = ParseProgram(src);
    REQUIRE(report.ok);
    SemanticVerdict v = CheckSemantics(program, r.game_class);
    CHECK(v.ok);
    CHECK(v.defects.empty());
  }
}

TEST_CASE("numerical gold programs use the numbers in the text") {
  Manifest m = LoadManifest(DataPath("corpus/seed_manifest.jsonl"));
  for (const auto& r : m.records) {
    if (r.payoffs != PayoffKind::kNumerical) continue;
    if (r.game_class == GameClass::kMatchingPennies) continue;  // "1", "-1"
    CAPTURE(r.id);
    auto [program, report] = ParseProgram(
        ReadData("corpus/gold/" + r.id + ".pl"));
    PayoffMatrix mat = ExtractMatrix(program);
    for (const auto& [cell, pay] : mat.cells) {
      for (const Number& u : {pay.first, pay.second}) {
        std::string s = u.ToString();
        if (s.front() == '-') s = s.substr(1);
        CHECK(r.text.find(s) != std::string::npos);
      }
    }
  }
}

}  // namespace
}  // namespace gameform
