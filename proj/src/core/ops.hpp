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

// Fit-to-leaderboard workflow shared by the service and the C API.

#ifndef ARENA_CORE_OPS_HPP_
#define ARENA_CORE_OPS_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/anomaly.hpp"
#include "core/domain.hpp"
#include "core/leaderboard.hpp"
#include "core/rating.hpp"

namespace arena {

struct FitOptions {
  BtFitConfig fit;
  bool styled = false;
  VoteFilter filter;
  bool exclude_flagged = false;
  AnomalyConfig anomaly;
  int bootstrap_resamples = 0;  // 0: no intervals
  BootstrapOptions bootstrap;

  // Canonical JSON of every option that affects the numbers.
  Json ToJson() const;
};

// Hex FNV-1a of the canonical dump.
std::string ConfigHash(const Json& canonical);

struct VoteSelection {
  std::vector<Vote> votes;
  std::vector<std::string> excluded_users;
};

// Votes matching `filter`. With exclude_flagged, users flagged by the anomaly
// test over the whole log lose all their votes.
VoteSelection SelectVotes(std::span<const Vote> votes, const BattleLookup& battles,
                          const VoteFilter& filter, bool exclude_flagged,
                          const AnomalyConfig& anomaly);

struct FitOutcome {
  BtFitResult fit;
  std::optional<BootstrapResult> ci;
  Leaderboard board;
  int n_votes = 0;
  std::vector<std::string> excluded_users;
  std::string config_hash;
};

// Throws kEmptyVoteSet when the selection is empty.
FitOutcome RunFit(std::span<const Vote> votes, const BattleLookup& battles,
                  const StyleByBattle* style, const FitOptions& options);

// Empty board (no error) when the selection is empty.
Leaderboard ComputeLeaderboard(std::span<const Vote> votes, const BattleLookup& battles,
                               const StyleByBattle* style, const FitOptions& options);

Json FitToJson(const FitOutcome& outcome);
Json FitDiagnosticsToJson(const FitOutcome& outcome);
Json BootstrapToJson(const BootstrapResult& ci);

}  // namespace arena

#endif  // ARENA_CORE_OPS_HPP_
