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

// Acceptance suite: one [PASS]/[FAIL] line per criterion. Exits non-zero if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "gameform/corpus.h"
#include "gameform/engine.h"
#include "gameform/eval.h"
#include "gameform/games.h"
#include "gameform/parser.h"
#include "gameform/pipeline.h"
#include "frame_oracle.h"
#include "test_util.h"

namespace gameform {
namespace {

using testing::DataPath;
using testing::ReadData;
using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

Program Load(const std::string& relative) {
  auto [program, report] = ParseProgram(ReadData(relative), relative);
  if (!report.ok) throw std::runtime_error(relative + " does not parse");
  return program;
}

// Largest step count of any engine query run by the suite.
uint64_t g_max_steps = 0;

std::vector<Solution> Run(const Engine& e, const std::string& q) {
  Query query = e.Solve(q);
  std::vector<Solution> out = query.All();
  g_max_steps = std::max(g_max_steps, query.steps());
  return out;
}

// Each check returns an empty string on success or what went wrong.
using Check = std::function<std::string()>;

std::string Expect(bool cond, const std::string& what) {
  return cond ? "" : what;
}

// 1. The query transcript for the dilemma, byte for byte.
std::string PdQuery() {
  auto start = Clock::now();
  Engine e(Load("fixtures/pd.pl"));
  std::string out;
  for (const Solution& s :
       Run(e, "game(s0,F), finally(goal(p1,100),F)")) {
    out += FormatSolution(s) + " ;\n";
  }
  out += "false.\n";
  double secs = Seconds(start);
  const std::string expected =
      "F=do(choice(p2,'C'),do(choice(p1,'D'),s0)) ;\n"
      "F=do(choice(p1,'D'),do(choice(p2,'C'),s0)) ;\n"
      "false.\n";
  if (out != expected) return "got:\n" + out;
  return Expect(secs < 1.0, "took " + std::to_string(secs) + " s");
}

// 2. Eight plays, checked against a hand enumeration.
std::string Enumeration() {
  struct Cell {
    const char* row;
    const char* col;
    int u_row, u_col;
  };
  const Cell table[] = {{"C", "C", 65, 65},
                        {"C", "D", 10, 100},
                        {"D", "C", 100, 10},
                        {"D", "D", 35, 35}};
  std::multiset<std::pair<int, int>> want_payoffs;
  std::set<std::string> want_plays;
  for (const Cell& c : table) {
    // p1 moves first, then p2; and the other way round.
    for (bool p1_first : {true, false}) {
      std::string p1 = std::string("choice(p1,'") + c.row + "')";
      std::string p2 = std::string("choice(p2,'") + c.col + "')";
      std::string trace =
          p1_first ? "do(" + p2 + ",do(" + p1 + ",s0))"
                   : "do(" + p1 + ",do(" + p2 + ",s0))";
      want_plays.insert(trace + " outcome(p1,'" + c.row + "'," +
                        std::to_string(c.u_row) + ",p2,'" + c.col + "'," +
                        std::to_string(c.u_col) + ")");
      want_payoffs.insert({c.u_row, c.u_col});
    }
  }
  std::vector<Outcome> got = EnumerateOutcomes(Load("fixtures/pd.pl"));
  if (got.size() != 8) return "got " + std::to_string(got.size()) + " plays";
  std::multiset<std::pair<int, int>> got_payoffs;
  std::set<std::string> got_plays;
  for (const Outcome& o : got) {
    const Term& t = o.outcome;
    got_payoffs.insert({std::stoi(ToString(t.args()[2])),
                        std::stoi(ToString(t.args()[5]))});
    got_plays.insert(ToString(o.trace) + " " + ToString(o.outcome));
  }
  if (got_payoffs != want_payoffs) return "payoff multiset differs";
  return Expect(got_plays == want_plays, "plays differ from the oracle");
}

// 3. Frame and control rules over random variants.
std::string FrameProperties() {
  std::mt19937 rng(20260301);
  int cases = 0, transitions = 0;
  for (; cases < 250; ++cases) {
    testing::Variant v = testing::RandomVariant(rng);
    testing::FrameReport r = testing::CheckFrame(v);
    if (!r.ok()) {
      return "variant " + std::to_string(cases) + " fails at " +
             r.failures.front() + "\n" + testing::Render(v);
    }
    transitions += r.transitions;
  }
  return Expect(cases >= 200 && transitions > 0,
                "too few cases: " + std::to_string(cases));
}

std::set<GameClass> ClassicOnly(const std::set<GameClass>& s) {
  std::set<GameClass> out;
  for (GameClass c : kClassicGameClasses) {
    if (s.count(c)) out.insert(c);
  }
  return out;
}

PayoffMatrix RandomStrictMatrix(std::mt19937& rng) {
  // Eight distinct values, so no ordering has ties.
  std::vector<int> pool(40);
  std::iota(pool.begin(), pool.end(), -20);
  std::shuffle(pool.begin(), pool.end(), rng);
  return PayoffMatrix::FromCells(
      {"C", "D"}, {"C", "D"},
      {{pool[0], pool[1]}, {pool[2], pool[3]}, {pool[4], pool[5]},
       {pool[6], pool[7]}});
}

PayoffMatrix Affine(const PayoffMatrix& m, Number a, Number b) {
  PayoffMatrix out = m;
  for (auto& [cell, u] : out.cells) {
    u = {u.first * a + b, u.second * a + b};
  }
  return out;
}

// 4. Canonical matrices classify exactly; positive affine maps keep classes.
std::string ClassifierSoundness() {
  int confusion = 0;
  for (GameClass c : kClassicGameClasses) {
    auto got = ClassicOnly(Classify(ExtractMatrix(CanonicalGame(c))));
    if (got != std::set<GameClass>{c}) ++confusion;
  }
  if (confusion) return std::to_string(confusion) + " canonical confusions";

  std::mt19937 rng(424242);
  ClassifyOptions no_zero_sum;
  no_zero_sum.require_zero_sum = false;
  int classified = 0;
  for (int i = 0; i < 1000; ++i) {
    PayoffMatrix m = RandomStrictMatrix(rng);
    Number a = Number::FromFraction(1 + rng() % 9, 1 + rng() % 4);
    Number b = Number(int64_t(rng() % 41) - 20);
    auto base = Classify(m, no_zero_sum);
    if (Classify(Affine(m, a, b), no_zero_sum) != base) {
      return "affine map changed the classes of matrix " + std::to_string(i);
    }
    // Scaling alone also keeps zero-sum, so the default options agree too.
    if (Classify(Affine(m, a, 0)) != Classify(m)) {
      return "scaling changed the classes of matrix " + std::to_string(i);
    }
    classified += !base.empty();
  }
  return Expect(classified > 50, "random matrices rarely classified");
}

// 5. The two syntax failure modes and the one-constant payoff table.
std::string FailureModes() {
  SyntaxReport slash = CheckSyntax(ReadData("fixtures/comment_slash.pl"));
  bool slash_ok = !slash.ok && !slash.errors.empty() &&
                  slash.errors.front().code == "comment_delimiter" &&
                  slash.errors.front().span.line == 1;
  if (!slash_ok) return "'//' is not reported as a syntax error on line 1";

  std::string singleton = ReadData("fixtures/singleton.pl");
  SyntaxReport lenient = CheckSyntax(singleton);
  bool warned = lenient.ok && !lenient.warnings.empty() &&
                lenient.warnings.front().kind == WarningKind::kSingletonVariable;
  if (!warned) return "singleton is not a warning by default";
  SyntaxReport strict = CheckSyntax(singleton, true);
  if (strict.ok) return "singleton is not an error under strict checking";

  SemanticVerdict v =
      CheckSemantics(Load("fixtures/payoffRD.pl"), GameClass::kBattleOfSexes);
  bool extraction = !v.ok && v.defects.size() == 1 &&
                    v.defects[0].kind == DefectKind::kExtractionFailure &&
                    v.defects[0].detail.rfind("no_outcomes", 0) == 0;
  return Expect(extraction, "payoffRD verdict is not no_outcomes extraction "
                            "failure");
}

// 6. The loop's three endings, replayed twice.
std::string AlgorithmLoop() {
  Manifest m = LoadManifest(DataPath("corpus/seed_manifest.jsonl"));
  Transcript t = Transcript::Load(DataPath("transcripts/seed.jsonl"));
  LlmConfig config;
  if (config.max_attempts != 5) return "default attempt budget is not 5";
  auto run = [&](const std::string& id) {
    ReplayChatClient replay(t);
    return Formalize(id, m.Find(id)->text, replay, config,
                     GameIndependentSource(), DefaultExample());
  };
  struct Case {
    const char* id;
    FormalizationStatus status;
    size_t attempts;
  };
  const Case cases[] = {
      {"std_sh_num", FormalizationStatus::kOkFirstTry, 1},
      {"std_bs_num", FormalizationStatus::kOkAfterRepair, 2},
      {"ns_pd_arms", FormalizationStatus::kFailedSyntax, 5}};
  for (const Case& c : cases) {
    FormalizationResult first = run(c.id);
    FormalizationResult second = run(c.id);
    if (first.status != c.status || first.attempts.size() != c.attempts) {
      return std::string(c.id) + " ended as " + ToString(first.status) +
             " after " + std::to_string(first.attempts.size()) + " attempts";
    }
    if (ToJson(first) != ToJson(second)) {
      return std::string(c.id) + " differs between runs";
    }
  }
  int logged = 0;
  for (const TranscriptRecord& r : t.records()) {
    logged += r.description_id == "ns_pd_arms" && r.response.is_null() &&
              !r.request.is_null();
  }
  return Expect(logged == 5, "ns_pd_arms logged " + std::to_string(logged) +
                                 " prompts");
}

// 7. Accuracy arithmetic on the synthetic replay set.
std::string HarnessArithmetic() {
  Manifest m = LoadManifest(DataPath("fixtures/table3/manifest.jsonl"));
  ReplayChatClient replay(
      Transcript::Load(DataPath("fixtures/table3/transcript.jsonl")));
  EvalOptions options;
  options.config.workers = 4;
  EvalReport r = Evaluate(m, replay, options);
  auto cell = [&](Style s, PayoffKind p) { return r.cells.at({s, p}); };
  using S = Style;
  using P = PayoffKind;
  std::vector<std::tuple<std::string, Ratio, std::string, int64_t>> want = {
      {"overall synt", r.syntactic, "0.98", 110},
      {"standard numerical sem", cell(S::kStandard, P::kNumerical).semantic,
       "1.00", 5},
      {"standard non-numerical sem",
       cell(S::kStandard, P::kNonNumerical).semantic, "1.00", 5},
      {"non-standard numerical sem",
       cell(S::kNonStandard, P::kNumerical).semantic, "0.90", 48},
      {"non-standard non-numerical sem",
       cell(S::kNonStandard, P::kNonNumerical).semantic, "0.83", 47},
      {"non-standard non-numerical synt",
       cell(S::kNonStandard, P::kNonNumerical).syntactic, "0.96", 50},
  };
  for (const auto& [name, ratio, value, den] : want) {
    if (ratio.Format() != value || ratio.den != den) {
      return name + " is " + ratio.Format() + " over " +
             std::to_string(ratio.den);
    }
  }
  return Expect(r.syntactic.num == 108, "syntactic numerator is not 108");
}

// 8. Sequential dilemma and rock-paper-scissors.
std::string Generalization() {
  Program seq = CanonicalGame(GameClass::kSequentialPD);
  Engine se(seq);
  auto controllers = Run(se, "holds(control(P), s0)");
  if (controllers.size() != 1) {
    return "sequential game has " + std::to_string(controllers.size()) +
           " initial controllers";
  }
  std::set<std::string> histories;
  for (const Outcome& o : EnumerateOutcomes(seq)) {
    histories.insert(ToString(o.trace));
  }
  if (histories.size() != 4) {
    return "sequential game has " + std::to_string(histories.size()) +
           " terminal histories";
  }

  Program rps = CanonicalGame(GameClass::kRockPaperScissors);
  int possible = 0;
  for (const Clause& c : rps.clauses) possible += c.head.Is("possible", 2);
  if (possible != 3) return "rps has " + std::to_string(possible) + " moves";
  PayoffMatrix m = ExtractMatrix(rps);
  if (!m.HasShape(3, 3) || !m.IsZeroSum()) return "rps matrix not 3x3 zero-sum";
  const std::set<std::pair<std::string, std::string>> beats = {
      {"rock", "scissors"}, {"scissors", "paper"}, {"paper", "rock"}};
  for (const auto& [cell, u] : m.cells) {
    int sign = u.first > Number(0) ? 1 : u.first < Number(0) ? -1 : 0;
    int want = beats.count(cell)                            ? 1
               : beats.count({cell.second, cell.first}) ? -1
                                                          : 0;
    if (sign != want) return "rps sign wrong at " + cell.first + "/" + cell.second;
  }
  return Expect(Classify(m) == std::set<GameClass>{GameClass::kRockPaperScissors},
                "rps not classified");
}

// 9. Runtime and the step budget over every shipped program.
std::string Performance(double earlier_seconds) {
  auto start = Clock::now();
  std::vector<Program> programs;
  for (GameClass c : kAllGameClasses) programs.push_back(CanonicalGame(c));
  std::string manifest_path = DataPath("corpus/seed_manifest.jsonl");
  for (const auto& r : LoadManifest(manifest_path).records) {
    programs.push_back(
        ParseProgram(ReadData("corpus/gold/" + r.id + ".pl")).first);
  }
  for (const Program& p : programs) {
    Engine e(p);
    Run(e, "game(s0,F), finally(outcome(P1,M1,U1,P2,M2,U2),F)");
  }
  double total = earlier_seconds + Seconds(start);
  if (g_max_steps >= EngineLimits{}.max_inference_steps) {
    return "a query used " + std::to_string(g_max_steps) + " steps";
  }
  std::cout << "  suite time " << total << " s, largest query "
            << g_max_steps << " steps\n";
  return Expect(total < 60, "suite took " + std::to_string(total) + " s");
}

}  // namespace
}  // namespace gameform

int main() {
  using namespace gameform;
  auto start = Clock::now();
  int failures = 0;
  auto report = [&](int n, const char* name, const Check& check) {
    std::string problem;
    try {
      problem = check();
    } catch (const std::exception& e) {
      problem = std::string("exception: ") + e.what();
    }
    std::cout << (problem.empty() ? "[PASS] " : "[FAIL] ") << n << ". "
              << name;
    if (!problem.empty()) std::cout << ": " << problem;
    std::cout << std::endl;
    failures += !problem.empty();
  };
  report(1, "PD query oracle", PdQuery);
  report(2, "Extensive-form enumeration", Enumeration);
  report(3, "Frame/control properties", FrameProperties);
  report(4, "Classifier soundness", ClassifierSoundness);
  report(5, "Failure-mode reproduction", FailureModes);
  report(6, "Formalization loop endings", AlgorithmLoop);
  report(7, "Harness arithmetic", HarnessArithmetic);
  report(8, "Generalization fixtures", Generalization);
  double so_far = Seconds(start);
  report(9, "Performance envelope", [&] { return Performance(so_far); });
  return failures == 0 ? 0 : 1;
}
