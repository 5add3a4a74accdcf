// Copyright 2026 The Litarena Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "core/metaeval.hpp"
#include "core/providers.hpp"
#include "core/simulate.hpp"
#include "support/test_support.hpp"

namespace arena {
namespace {

std::optional<std::pair<std::string, std::string>> NoTexts(const Battle&) { return std::nullopt; }

struct Fixture {
  SimulatedLog log;
  InMemoryBattles battles;
  Fixture() {
    SimulationConfig sim;
    sim.votes = 8000;
    sim.seed = 13;
    sim.tie_prob = 0.2;
    log = Simulate(sim);
    battles = InMemoryBattles(log.battles);
  }
};

const Fixture& Shared() {
  static Fixture f;
  return f;
}

std::map<std::string, std::string> GoldOf(const std::vector<BenchmarkItem>& items) {
  std::map<std::string, std::string> gold;
  for (const auto& i : items) gold[i.item_id] = i.gold;
  return gold;
}

TEST_CASE("benchmark is balanced and free of ties") {
  const auto& f = Shared();
  BenchmarkOptions options;
  options.per_discipline = 100;
  options.seed = 4;
  auto items = BuildBenchmark(f.log.votes, f.battles, NoTexts, options);
  REQUIRE(items.size() == 400);
  std::map<Discipline, std::map<std::string, int>> counts;
  std::set<std::string> ids;
  for (const auto& i : items) {
    ++counts[i.discipline][i.gold];
    ids.insert(i.item_id);
  }
  CHECK(ids.size() == items.size());
  for (Discipline d : kAllDisciplines) {
    CHECK(counts[d]["A"] == 50);
    CHECK(counts[d]["B"] == 50);
  }
  std::map<std::string, Winner> winner_of;
  for (const auto& v : f.log.votes) winner_of["item-" + v.vote_id] = v.winner;
  for (const auto& i : items) {
    const auto& w = winner_of.at(i.item_id);
    CHECK((w == Winner::kFirst || w == Winner::kSecond));
    CHECK(i.gold == (w == Winner::kFirst ? "A" : "B"));
  }
  CHECK(BuildBenchmark(f.log.votes, f.battles, NoTexts, options) == items);
}

TEST_CASE("benchmark needs enough decisive votes") {
  const auto& f = Shared();
  BenchmarkOptions options;
  options.per_discipline = 100000;
  try {
    BuildBenchmark(f.log.votes, f.battles, NoTexts, options);
    FAIL("expected InsufficientVotes");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInsufficientVotes);
  }
  options.per_discipline = 3;
  CHECK_THROWS_AS(BuildBenchmark(f.log.votes, f.battles, NoTexts, options), Error);
}

TEST_CASE("benchmark items round trip through json") {
  BenchmarkItem item{"b1", "q", "ra", "rb", Discipline::kHealthcare, "B"};
  CHECK(Json(item).get<BenchmarkItem>() == item);
  Json bad = item;
  bad["gold"] = "C";
  CHECK_THROWS_AS(Decode<BenchmarkItem>(bad), Error);
}

TEST_CASE("judge choices parse") {
  CHECK(ParseJudgeChoice("Output (a)") == JudgeChoice::kA);
  CHECK(ParseJudgeChoice("Comparing both, Output (b) is better.") == JudgeChoice::kB);
  CHECK(ParseJudgeChoice("Output (b) cites less; final: Output (a)") == JudgeChoice::kA);
  CHECK(ParseJudgeChoice("no preference") == JudgeChoice::kUnparseable);
}

TEST_CASE("stub judges reach their expected accuracy") {
  const auto& f = Shared();
  BenchmarkOptions options;
  options.per_discipline = 250;
  auto items = BuildBenchmark(f.log.votes, f.battles, NoTexts, options);
  REQUIRE(items.size() == 1000);

  JudgeStub oracle(JudgeStubMode::kOracle, 0, GoldOf(items));
  JudgeStub always_a(JudgeStubMode::kAlwaysA);
  JudgeStub random(JudgeStubMode::kRandom, 77);
  std::vector<JudgeVerdict> verdicts;
  for (auto* j : {&oracle, &always_a, &random}) {
    const std::string id = j == &oracle ? "oracle" : j == &always_a ? "always_a" : "random";
    auto v = RunJudgeOnItems(*j, id, items, 4);
    verdicts.insert(verdicts.end(), v.begin(), v.end());
  }
  auto report = ScoreJudges(verdicts, items);
  REQUIRE(report.judges.size() == 3);
  std::map<std::string, JudgeScore> by_id;
  for (const auto& s : report.judges) by_id[s.judge_id] = s;
  CHECK(by_id["oracle"].accuracy == 1.0);
  CHECK(by_id["always_a"].accuracy == 0.5);
  CHECK(std::abs(by_id["random"].accuracy - 0.5) <= 0.05);
  CHECK(by_id["oracle"].per_discipline.size() == 4);
  CHECK(RenderEvalTable(report).find("oracle") != std::string::npos);
  CHECK(EvalReportToJson(report).is_object());
}

TEST_CASE("parallel judging matches serial judging") {
  const auto& f = Shared();
  BenchmarkOptions options;
  options.per_discipline = 20;
  auto items = BuildBenchmark(f.log.votes, f.battles, NoTexts, options);
  JudgeStub random(JudgeStubMode::kRandom, 5);
  auto serial = RunJudgeOnItems(random, "r", items, 1);
  auto parallel = RunJudgeOnItems(random, "r", items, 8);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].item_id == parallel[i].item_id);
    CHECK(serial[i].choice == parallel[i].choice);
  }
}

TEST_CASE("unparseable outputs count as wrong and missing verdicts are reported") {
  std::vector<BenchmarkItem> items = {{"i1", "q", "a", "b", Discipline::kHealthcare, "A"},
                                      {"i2", "q", "a", "b", Discipline::kHealthcare, "B"}};
  JudgeStub echo(JudgeStubMode::kEcho, 0, {}, "I cannot decide.");
  auto verdicts = RunJudgeOnItems(echo, "echo", items);
  auto report = ScoreJudges(verdicts, items);
  CHECK(report.judges[0].unparseable == 2);
  CHECK(report.judges[0].accuracy == 0.0);

  std::vector<JudgeVerdict> partial = {{"i1", "j", JudgeChoice::kA, "A", std::nullopt}};
  try {
    ScoreJudges(partial, items);
    FAIL("expected MissingVerdicts");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingVerdicts);
  }
  auto lenient = ScoreJudges(partial, items, true);
  CHECK(lenient.judges[0].missing == 1);
  CHECK(lenient.judges[0].accuracy == 0.5);
}

TEST_CASE("both orders report position consistency") {
  std::vector<BenchmarkItem> items = {{"i1", "q", "a", "b", Discipline::kEngineering, "A"},
                                      {"i2", "q", "a", "b", Discipline::kEngineering, "B"}};
  JudgeStub always_a(JudgeStubMode::kAlwaysA);
  auto verdicts = RunJudgeOnItems(always_a, "a", items, 1, true);
  for (const auto& v : verdicts) {
    REQUIRE(v.swapped_choice.has_value());
    CHECK(*v.swapped_choice == JudgeChoice::kB);
  }
  auto report = ScoreJudges(verdicts, items);
  REQUIRE(report.judges[0].position_consistency.has_value());
  CHECK(*report.judges[0].position_consistency == 0.0);

  JudgeStub oracle(JudgeStubMode::kOracle, 0, GoldOf(items));
  auto consistent = ScoreJudges(RunJudgeOnItems(oracle, "o", items, 1, true), items);
  CHECK(*consistent.judges[0].position_consistency == 1.0);
}

TEST_CASE("verdicts round trip through json") {
  JudgeVerdict v{"i1", "j", JudgeChoice::kB, "Answer: B", JudgeChoice::kA};
  Json j = v;
  auto back = j.get<JudgeVerdict>();
  CHECK(back.item_id == "i1");
  CHECK(back.choice == JudgeChoice::kB);
  CHECK(back.swapped_choice == JudgeChoice::kA);
  Json raw_only = {{"item_id", "i2"}, {"judge_id", "j"}, {"raw_output", "I pick Output (a)."}};
  CHECK(raw_only.get<JudgeVerdict>().choice == JudgeChoice::kA);
}

}  // namespace
}  // namespace arena
