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

#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "gameform/corpus.h"
#include "gameform/eval.h"
#include "gameform/pipeline.h"
#include "test_util.h"

namespace gameform {
namespace {

using testing::DataPath;

constexpr CellKey kStdNum{Style::kStandard, PayoffKind::kNumerical};
constexpr CellKey kStdNon{Style::kStandard, PayoffKind::kNonNumerical};
constexpr CellKey kNsNum{Style::kNonStandard, PayoffKind::kNumerical};
constexpr CellKey kNsNon{Style::kNonStandard, PayoffKind::kNonNumerical};

EvalReport ReplayEval(const std::string& manifest, const std::string& log,
                      int workers = 1) {
  Manifest m = LoadManifest(DataPath(manifest));
  ReplayChatClient replay(Transcript::Load(DataPath(log)));
  EvalOptions options;
  options.config.workers = workers;
  return Evaluate(m, replay, options);
}

const EvalReport& Table3Report() {
  static const EvalReport report =
      ReplayEval("fixtures/table3/manifest.jsonl",
                 "fixtures/table3/transcript.jsonl", 4);
  return report;
}

TEST_CASE("ratio formatting") {
  CHECK(Ratio{43, 48}.Format() == "0.90");
  CHECK(Ratio{39, 47}.Format() == "0.83");
  CHECK(Ratio{108, 110}.Format() == "0.98");
  CHECK(Ratio{5, 5}.Format() == "1.00");
  CHECK(Ratio{0, 0}.Format() == "undefined");
  CHECK_FALSE(Ratio{0, 0}.defined());
}

TEST_CASE("an empty manifest gives undefined cells") {
  class NoCalls : public ChatClient {
    std::string Complete(const ChatRequest&, const CallContext&) override {
      throw ChatError("unexpected call", false);
    }
  } llm;
  EvalReport r = Evaluate(Manifest{}, llm, EvalOptions{});
  CHECK(r.rows.empty());
  CHECK(r.cells.size() == 4);
  for (const auto& [key, cell] : r.cells) {
    CHECK_FALSE(cell.syntactic.defined());
    CHECK_FALSE(cell.semantic.defined());
  }
  CHECK(r.classes.size() == kAllGameClasses.size());
  std::string md = RenderReport(r, ReportFormat::kMarkdown);
  CHECK(md.find("undefined (0/0)") != std::string::npos);
}

TEST_CASE("the synthetic replay set reproduces the accuracy grid") {
  const EvalReport& r = Table3Report();
  CHECK(r.rows.size() == 110);
  CHECK(r.syntactic == Ratio{108, 110});
  CHECK(r.cells.at(kStdNum).syntactic == Ratio{5, 5});
  CHECK(r.cells.at(kStdNon).syntactic == Ratio{5, 5});
  CHECK(r.cells.at(kNsNum).syntactic == Ratio{50, 50});
  CHECK(r.cells.at(kNsNon).syntactic == Ratio{48, 50});
  CHECK(r.cells.at(kStdNum).semantic == Ratio{5, 5});
  CHECK(r.cells.at(kStdNon).semantic == Ratio{5, 5});
  CHECK(r.cells.at(kNsNum).semantic == Ratio{43, 48});
  CHECK(r.cells.at(kNsNon).semantic == Ratio{39, 47});
  CHECK(r.cells.at(kNsNum).semantic.Format() == "0.90");
  CHECK(r.cells.at(kNsNon).semantic.Format() == "0.83");
  CHECK(r.cells.at(kNsNon).syntactic.Format() == "0.96");
  CHECK(r.syntactic.Format() == "0.98");
  CHECK(r.exclusions.size() == 5);
}

TEST_CASE("repaired programs are scored semantically") {
  const EvalReport& r = Table3Report();
  int repaired = 0;
  for (const EvalRow& row : r.rows) {
    if (row.status != FormalizationStatus::kOkAfterRepair) continue;
    ++repaired;
    CHECK_FALSE(row.first_attempt_syntax_ok);
    CHECK(row.scored);
    CHECK(row.semantic_ok == true);
  }
  CHECK(repaired == 2);
}

TEST_CASE("per-class accuracy keeps both breakdowns") {
  const EvalReport& r = Table3Report();
  CHECK(r.classes.at(GameClass::kHawkDove).semantic == Ratio{22, 22});
  CHECK(r.classes.at(GameClass::kStagHunt).semantic == Ratio{22, 22});
  CHECK(r.classes.at(GameClass::kHawkDove).semantic_non_standard ==
        Ratio{20, 20});
  const ClassReport& pd = r.classes.at(GameClass::kPrisonersDilemma);
  CHECK(pd.semantic.num < pd.semantic.den);
  CHECK(pd.semantic.den - pd.semantic_non_standard.den == 2);
  CHECK_FALSE(r.classes.at(GameClass::kSequentialPD).semantic.defined());
}

TEST_CASE("semantic defects are recorded per row") {
  const EvalReport& r = Table3Report();
  bool saw_extraction = false, saw_zero_sum = false;
  for (const EvalRow& row : r.rows) {
    if (row.semantic_ok != false) continue;
    for (const auto& d : row.verdict["defects"]) {
      saw_extraction |= d["kind"] == "extraction_failure";
      saw_zero_sum |= d["kind"] == "zero_sum_violation";
    }
  }
  CHECK(saw_extraction);
  CHECK(saw_zero_sum);
}

TEST_CASE("replay evaluation is idempotent and independent of workers") {
  EvalReport once = ReplayEval("fixtures/table3/manifest.jsonl",
                               "fixtures/table3/transcript.jsonl", 1);
  CHECK(once == Table3Report());
  CHECK(RenderReport(once, ReportFormat::kJson) ==
        RenderReport(Table3Report(), ReportFormat::kJson));
}

TEST_CASE("report JSON round-trips") {
  const EvalReport& r = Table3Report();
  std::string text = RenderReport(r, ReportFormat::kJson);
  EvalReport back = ReportFromJson(nlohmann::json::parse(text));
  CHECK(back == r);
  auto j = nlohmann::json::parse(text);
  CHECK(j["syntactic"]["numerator"] == 108);
  CHECK(j["syntactic"]["denominator"] == 110);
}

TEST_CASE("markdown report has the variant grid, bars and exclusions") {
  const EvalReport& r = Table3Report();
  std::string md = RenderReport(r, ReportFormat::kMarkdown);
  CHECK(md.find("Standard synt") != std::string::npos);
  CHECK(md.find("Non-standard sem") != std::string::npos);
  CHECK(md.find("| Numerical | 1.00 (5/5) | 1.00 (5/5) | 1.00 (50/50) | "
                "0.90 (43/48) |") != std::string::npos);
  CHECK(md.find("| Non-numerical | 1.00 (5/5) | 1.00 (5/5) | 0.96 (48/50) | "
                "0.83 (39/47) |") != std::string::npos);
  CHECK(md.find("| HD | 1.00 (22/22) | `####################`") !=
        std::string::npos);
  CHECK(md.find("## Exclusions") != std::string::npos);
  for (const Exclusion& e : r.exclusions) {
    CHECK(md.find("- " + e.id + ": " + e.reason) != std::string::npos);
  }
}

TEST_CASE("seed corpus replay covers all loop outcomes") {
  EvalReport r = ReplayEval("corpus/seed_manifest.jsonl",
                            "transcripts/seed.jsonl");
  REQUIRE(r.rows.size() == 22);
  Manifest m = LoadManifest(DataPath("corpus/seed_manifest.jsonl"));
  for (size_t i = 0; i < r.rows.size(); ++i) {
    CHECK(r.rows[i].id == m.records[i].id);
  }
  auto row = [&](const std::string& id) -> const EvalRow& {
    for (const EvalRow& x : r.rows) {
      if (x.id == id) return x;
    }
    throw std::runtime_error("missing row " + id);
  };
  CHECK(row("std_pd_num").status == FormalizationStatus::kOkFirstTry);
  CHECK(row("std_bs_num").status == FormalizationStatus::kOkAfterRepair);
  CHECK(row("std_bs_num").attempts == 2);
  CHECK(row("ns_pd_arms").status == FormalizationStatus::kFailedSyntax);
  CHECK(row("ns_pd_arms").attempts == 5);
  CHECK_FALSE(row("ns_pd_arms").scored);
  CHECK(row("ns_bs_venue").semantic_ok == false);
  CHECK(row("gen_seq_pd").semantic_ok == true);
  CHECK(row("gen_rps").semantic_ok == true);
  CHECK(r.syntactic == Ratio{20, 22});
  CHECK(r.semantic == Ratio{20, 21});
}

TEST_CASE("a bad example aborts before any call") {
  Manifest m = LoadManifest(DataPath("corpus/seed_manifest.jsonl"));
  ReplayChatClient replay(Transcript{});
  EvalOptions options;
  options.example = Example{"x", "initial(s0"};
  CHECK_THROWS_AS(Evaluate(m, replay, options), InvalidExampleError);
}

TEST_CASE("missing transcript entries become llm_error rows") {
  Manifest m = LoadManifest(DataPath("corpus/seed_manifest.jsonl"));
  ReplayChatClient replay(Transcript{});
  EvalOptions options;
  options.config.workers = 3;
  EvalReport r = Evaluate(m, replay, options);
  CHECK(r.rows.size() == m.records.size());
  for (const EvalRow& row : r.rows) {
    CHECK(row.status == FormalizationStatus::kLlmError);
    CHECK_FALSE(row.scored);
  }
  CHECK(r.syntactic == Ratio{0, 22});
  CHECK_FALSE(r.semantic.defined());
}

// Random rows for the aggregation invariants.
EvalRow RandomRow(std::mt19937& rng, int i) {
  EvalRow row;
  row.id = "r" + std::to_string(i);
  row.game_class = kAllGameClasses[rng() % kAllGameClasses.size()];
  row.style = rng() % 2 ? Style::kStandard : Style::kNonStandard;
  row.payoffs = rng() % 2 ? PayoffKind::kNumerical : PayoffKind::kNonNumerical;
  row.first_attempt_syntax_ok = rng() % 4 != 0;
  if (rng() % 8 == 0) row.exclusion = "ambiguous";
  bool has_program = rng() % 6 != 0;
  if (has_program) row.semantic_ok = rng() % 3 != 0;
  row.scored = has_program && !row.exclusion;
  return row;
}

TEST_CASE("aggregation invariants over random rows") {
  std::mt19937 rng(20260117);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<EvalRow> rows;
    int n = int(rng() % 40);
    for (int i = 0; i < n; ++i) rows.push_back(RandomRow(rng, i));
    EvalReport r = Aggregate(rows);
    int64_t syn_num = 0, syn_den = 0, sem_num = 0, sem_den = 0;
    for (const auto& [key, c] : r.cells) {
      CHECK(c.syntactic.num <= c.syntactic.den);
      CHECK(c.semantic.num <= c.semantic.den);
      syn_num += c.syntactic.num;
      syn_den += c.syntactic.den;
      sem_num += c.semantic.num;
      sem_den += c.semantic.den;
    }
    CHECK(syn_num == r.syntactic.num);
    CHECK(syn_den == r.syntactic.den);
    CHECK(sem_num == r.semantic.num);
    CHECK(sem_den == r.semantic.den);
    CHECK(r.syntactic.den == n);
    int64_t class_den = 0, class_ns_den = 0, scored_ns = 0, excluded = 0;
    for (const auto& [c, cr] : r.classes) {
      CHECK(cr.semantic.num <= cr.semantic.den);
      CHECK(cr.semantic_non_standard.den <= cr.semantic.den);
      class_den += cr.semantic.den;
      class_ns_den += cr.semantic_non_standard.den;
    }
    for (const EvalRow& row : rows) {
      scored_ns += row.scored && row.style == Style::kNonStandard;
      excluded += row.exclusion.has_value();
    }
    CHECK(class_den == r.semantic.den);
    CHECK(class_ns_den == scored_ns);
    CHECK(int64_t(r.exclusions.size()) == excluded);
    CHECK(ReportFromJson(ToJson(r)) == r);
  }
}

}  // namespace
}  // namespace gameform
