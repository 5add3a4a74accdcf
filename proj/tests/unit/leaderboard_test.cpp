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

#include "core/leaderboard.hpp"
#include "core/ops.hpp"
#include "core/simulate.hpp"
#include "support/test_support.hpp"

namespace arena {
namespace {

TEST_CASE("published leaderboard round-trips byte for byte") {
  const std::string text = testing::ReadText(testing::FixturePath("published_leaderboard.json"));
  auto board = LeaderboardFromJson(text);
  REQUIRE(board.rows.size() == 23);
  CHECK(LeaderboardToJson(board) == text);
  CHECK(board.rows.front().model == "o3");
  CHECK(board.rows.front().elo == doctest::Approx(1172.5));
  CHECK(board.rows.front().battles == 694);
  for (std::size_t i = 1; i < board.rows.size(); ++i) {
    CHECK(board.rows[i - 1].elo >= board.rows[i].elo);
  }
}

TEST_CASE("sorting orders by elo then model id") {
  std::vector<LeaderboardRow> rows = {{"b", 1000, {}, {}, 1},
                                      {"a", 1000, {}, {}, 1},
                                      {"c", 1100, {}, {}, 1}};
  SortLeaderboard(rows);
  CHECK(rows[0].model == "c");
  CHECK(rows[1].model == "a");
  CHECK(rows[2].model == "b");
}

TEST_CASE("leaderboard json rejects malformed input") {
  CHECK_THROWS_AS(LeaderboardFromJson("[1,2"), Error);
  CHECK_THROWS_AS(LeaderboardFromJson(R"([{"model":"x"}])"), Error);
}

TEST_CASE("fits become leaderboards with battle counts and intervals") {
  SimulationConfig sim;
  sim.votes = 1500;
  sim.seed = 3;
  auto log = Simulate(sim);
  InMemoryBattles battles(log.battles);
  FitOptions options;
  options.bootstrap_resamples = 10;
  auto outcome = RunFit(log.votes, battles, nullptr, options);
  const auto& board = outcome.board;
  REQUIRE(board.rows.size() == 5);
  int total = 0;
  for (const auto& r : board.rows) {
    total += r.battles;
    REQUIRE(r.ci_lower.has_value());
    CHECK(*r.ci_lower <= r.elo);
    CHECK(r.elo <= *r.ci_upper);
  }
  CHECK(total == 2 * 1500);
  CHECK(board.config_hash == outcome.config_hash);
  auto parsed = LeaderboardFromJson(LeaderboardToJson(board));
  CHECK(LeaderboardToJson(parsed) == LeaderboardToJson(board));
  const std::string table = RenderLeaderboardTable(board);
  CHECK(table.find(board.rows[0].model) != std::string::npos);
}

TEST_CASE("config hash follows the options that change numbers") {
  FitOptions a;
  FitOptions b = a;
  CHECK(ConfigHash(a.ToJson()) == ConfigHash(b.ToJson()));
  b.fit.seed = 1;
  CHECK(ConfigHash(a.ToJson()) != ConfigHash(b.ToJson()));
}

TEST_CASE("an empty selection is an EmptyVoteSet") {
  SimulationConfig sim;
  sim.votes = 100;
  auto log = Simulate(sim);
  InMemoryBattles battles(log.battles);
  FitOptions options;
  options.filter.user_id = "nobody";
  try {
    RunFit(log.votes, battles, nullptr, options);
    FAIL("expected EmptyVoteSet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyVoteSet);
  }
}

}  // namespace
}  // namespace arena
