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

#include <cmath>
#include <random>

#include "core/rating.hpp"
#include "core/simulate.hpp"
#include "support/test_support.hpp"

namespace arena {
namespace {

using testing::MakeBattle;
using testing::MakeVote;

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct Log {
  InMemoryBattles battles;
  std::vector<Vote> votes;
  int next = 0;
  void Add(const std::string& a, const std::string& b, Winner w) {
    Battle battle = MakeBattle("b" + std::to_string(next), a, b);
    votes.push_back(MakeVote(battle, "u" + std::to_string(next), w));
    battles.Add(battle);
    ++next;
  }
};

BtFitResult FitLog(const Log& log) {
  auto pool = ModelPoolFromVotes(log.votes, log.battles);
  return FitBt(EncodeBattles(log.votes, log.battles, pool), {});
}

TEST_CASE("encoding: decisive votes give one row, ties two half rows") {
  Log log;
  log.Add("m1", "m2", Winner::kFirst);
  auto pool = ModelPoolFromVotes(log.votes, log.battles);
  auto enc = EncodeBattles(log.votes, log.battles, pool);
  REQUIRE(enc.rows.size() == 1);
  CHECK(enc.rows[0].y == 1.0);
  CHECK(enc.rows[0].weight == 1.0);

  log.Add("m1", "m2", Winner::kTie);
  log.Add("m2", "m1", Winner::kBothBad);
  enc = EncodeBattles(log.votes, log.battles, pool);
  REQUIRE(enc.rows.size() == 5);
  double tie_weight = 0.0;
  for (std::size_t r = 1; r < enc.rows.size(); ++r) tie_weight += enc.rows[r].weight;
  CHECK(tie_weight == doctest::Approx(2.0));
}

TEST_CASE("encoding rejects empty sets, unknown battles and foreign models") {
  Log log;
  auto pool = std::vector<std::string>{"m1", "m2"};
  try {
    EncodeBattles(log.votes, log.battles, pool);
    FAIL("expected EmptyVoteSet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyVoteSet);
  }
  log.Add("m1", "m3", Winner::kFirst);
  try {
    EncodeBattles(log.votes, log.battles, pool);
    FAIL("expected UnknownModel");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownModel);
  }
  InMemoryBattles none;
  try {
    EncodeBattles(log.votes, none, {"m1", "m3"});
    FAIL("expected UnknownBattle");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownBattle);
  }
}

TEST_CASE("two-model fit matches the closed form") {
  // Three wins and one loss: the maximum likelihood gap is ln 3.
  Log log;
  for (int i = 0; i < 3; ++i) log.Add("a", "b", Winner::kFirst);
  log.Add("a", "b", Winner::kSecond);
  auto fit = FitLog(log);
  CHECK(fit.converged);
  const double gap = fit.EloOf("a") - fit.EloOf("b");
  CHECK(gap == doctest::Approx(400.0 * std::log10(3.0)).epsilon(1e-4));
  CHECK((fit.EloOf("a") + fit.EloOf("b")) / 2.0 == doctest::Approx(kEloAnchor));
}

TEST_CASE("a tie counts as half a win on each side") {
  Log log;
  log.Add("a", "b", Winner::kFirst);
  log.Add("a", "b", Winner::kTie);
  auto fit = FitLog(log);
  CHECK(fit.EloOf("a") - fit.EloOf("b") == doctest::Approx(400.0 * std::log10(3.0)).epsilon(1e-4));
}

TEST_CASE("all ties leave models level") {
  Log log;
  const std::vector<std::string> models = {"m1", "m2", "m3", "m4"};
  for (int r = 0; r < 20; ++r) {
    for (std::size_t i = 0; i < models.size(); ++i) {
      for (std::size_t j = i + 1; j < models.size(); ++j) {
        log.Add(models[i], models[j], r % 2 ? Winner::kTie : Winner::kBothBad);
      }
    }
  }
  auto fit = FitLog(log);
  for (std::size_t i = 0; i < fit.elo.size(); ++i) {
    for (std::size_t j = 0; j < fit.elo.size(); ++j) {
      CHECK(std::abs(fit.elo[i] - fit.elo[j]) < 1.0);
    }
  }
}

TEST_CASE("elo and logistic scales agree") {
  SimulationConfig sim;
  sim.votes = 3000;
  sim.seed = 11;
  auto log = Simulate(sim);
  InMemoryBattles battles(log.battles);
  auto pool = ModelPoolFromVotes(log.votes, battles);
  auto fit = FitBt(EncodeBattles(log.votes, battles, pool), {});
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, fit.models.size() - 1);
  for (int t = 0; t < 100; ++t) {
    const std::size_t i = pick(rng), j = pick(rng);
    const double direct = Sigmoid(fit.beta[i] - fit.beta[j]);
    CHECK(std::abs(direct - ExpectedScore(fit.elo[i], fit.elo[j])) < 1e-9);
  }
}

TEST_CASE("elo anchoring: mean 1000, 400/ln10 per logit") {
  auto elo = ToElo(std::vector<double>{0.0, 1.0});
  CHECK(elo[0] + elo[1] == doctest::Approx(2000.0));
  CHECK(elo[1] - elo[0] == doctest::Approx(400.0 / std::log(10.0)));
  CHECK(ExpectedScore(1000, 1000) == doctest::Approx(0.5));
  CHECK(ExpectedScore(1400, 1000) == doctest::Approx(10.0 / 11.0));
}

TEST_CASE("a model without comparisons is a degenerate graph") {
  Log log;
  log.Add("a", "b", Winner::kFirst);
  auto enc = EncodeBattles(log.votes, log.battles, {"a", "b", "c"});
  try {
    FitBt(enc, {});
    FAIL("expected DegenerateGraph");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateGraph);
  }
}

TEST_CASE("invalid fit configuration is rejected") {
  BtFitConfig c;
  c.l2_lambda = -1;
  CHECK_THROWS_AS(c.Validate(), Error);
  c = {};
  c.max_iterations = 0;
  CHECK_THROWS_AS(c.Validate(), Error);
}

TEST_CASE("styled fit needs style vectors") {
  Log log;
  log.Add("a", "b", Winner::kFirst);
  log.Add("a", "b", Winner::kSecond);
  auto enc = EncodeBattles(log.votes, log.battles, {"a", "b"});
  try {
    FitBtStyled(enc, {});
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimensionMismatch);
  }
}

TEST_CASE("style control absorbs a length preference") {
  SimulationConfig sim;
  sim.votes = 6000;
  sim.seed = 5;
  sim.strengths = std::vector<double>(5, 0.0);
  sim.length_gamma = 1.0;
  auto log = Simulate(sim);
  InMemoryBattles battles(log.battles);
  auto pool = ModelPoolFromVotes(log.votes, battles);
  auto styled = FitBtStyled(EncodeBattles(log.votes, battles, pool, &log.style), {});
  auto plain = FitBt(EncodeBattles(log.votes, battles, pool), {});
  REQUIRE(styled.gamma.has_value());
  CHECK((*styled.gamma)[0] > 0.5);
  double styled_spread = 0.0, plain_spread = 0.0;
  for (double b : styled.beta) styled_spread = std::max(styled_spread, std::abs(b));
  for (double b : plain.beta) plain_spread = std::max(plain_spread, std::abs(b));
  CHECK(styled_spread < 0.15);
  CHECK(plain_spread > 3.0 * styled_spread);
}

TEST_CASE("bootstrap is reproducible and independent of thread count") {
  SimulationConfig sim;
  sim.votes = 2000;
  sim.seed = 9;
  auto log = Simulate(sim);
  InMemoryBattles battles(log.battles);
  auto pool = ModelPoolFromVotes(log.votes, battles);
  BtFitConfig config;
  config.seed = 17;
  BootstrapOptions one;
  one.resamples = 20;
  BootstrapOptions four = one;
  four.threads = 4;
  auto a = BootstrapCi(log.votes, battles, pool, nullptr, config, one);
  auto b = BootstrapCi(log.votes, battles, pool, nullptr, config, four);
  REQUIRE(a.intervals.size() == b.intervals.size());
  for (std::size_t i = 0; i < a.intervals.size(); ++i) {
    CHECK(a.intervals[i].lower == b.intervals[i].lower);
    CHECK(a.intervals[i].upper == b.intervals[i].upper);
    CHECK(a.intervals[i].lower <= a.intervals[i].point);
    CHECK(a.intervals[i].point <= a.intervals[i].upper);
  }
  CHECK(a.Find("nope") == nullptr);
}

TEST_CASE("empirical quantile interpolates") {
  CHECK(EmpiricalQuantile({1, 2, 3, 4, 5}, 0.5) == doctest::Approx(3.0));
  CHECK(EmpiricalQuantile({1, 2, 3, 4, 5}, 0.0) == doctest::Approx(1.0));
  CHECK(EmpiricalQuantile({1, 2, 3, 4, 5}, 1.0) == doctest::Approx(5.0));
  CHECK_THROWS_AS(EmpiricalQuantile({}, 0.5), Error);
}

TEST_CASE("online elo update") {
  OnlineEloState s;
  s.Register("a");
  s.Register("b");
  auto win = OnlineEloUpdate(s, "a", "b", 1.0);
  CHECK(win.ratings.at("a") == doctest::Approx(1016.0));
  CHECK(win.ratings.at("b") == doctest::Approx(984.0));
  auto tie = OnlineEloUpdate(s, "a", "b", 0.5);
  CHECK(tie.ratings.at("a") == doctest::Approx(1000.0));
  CHECK(tie.ratings.at("b") == doctest::Approx(1000.0));
  CHECK(s.ratings.at("a") == 1000.0);
  CHECK_THROWS_AS(OnlineEloUpdate(s, "a", "b", 0.3), Error);
  CHECK_THROWS_AS(OnlineEloUpdate(s, "a", "a", 1.0), Error);
  CHECK_THROWS_AS(OnlineEloUpdate(s, "a", "zzz", 1.0), Error);
}

}  // namespace
}  // namespace arena
