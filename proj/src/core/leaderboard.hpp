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

#ifndef ARENA_CORE_LEADERBOARD_HPP_
#define ARENA_CORE_LEADERBOARD_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/domain.hpp"
#include "core/rating.hpp"

namespace arena {

struct LeaderboardRow {
  std::string model;
  double elo = 0.0;
  std::optional<double> ci_lower;
  std::optional<double> ci_upper;
  int battles = 0;

  bool operator==(const LeaderboardRow&) const = default;
};

struct Leaderboard {
  std::vector<LeaderboardRow> rows;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> config_hash;

  bool operator==(const Leaderboard&) const = default;
};

// Rows sorted by Elo descending, ties by model id. battle_count counts the
// battles under `filter` that involve the model; an empty filter result yields
// an empty leaderboard.
Leaderboard BuildLeaderboard(const BtFitResult& fit, const BootstrapResult* ci,
                             std::span<const Vote> votes,
                             const BattleLookup& battles,
                             const VoteFilter& filter = {});

void SortLeaderboard(std::vector<LeaderboardRow>& rows);

// Canonical JSON document (sorted keys, 2-space indent, trailing newline).
std::string LeaderboardToJson(const Leaderboard& board);
Leaderboard LeaderboardFromJson(std::string_view text);
std::string RenderLeaderboardTable(const Leaderboard& board);

}  // namespace arena

#endif  // ARENA_CORE_LEADERBOARD_HPP_
