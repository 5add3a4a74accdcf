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

// Sequential anomalous-voter test.
//
// Every vote is scored against the historical ratings other users gave for the
// same action (ordered model pair as shown) with the exchangeability p-value
//
//   p = (1 + #{h in H_a : h >= rating}) / (|H_a| + 1).
//
// After the j-th vote the p-values are combined with Fisher's statistic
// M_j = -2 sum log p_i, which is chi-squared with 2j degrees of freedom under
// the null. The user is tested only at a few pseudo-random checkpoints, each at
// the Bonferroni-split level alpha / checkpoint_count.
//
// Ratings are from the first-shown model's perspective: win 1, tie or
// both-bad 0.5, loss 0. The p-value is one-sided: it is small only when the
// user rates an action higher than history does.

#ifndef ARENA_CORE_ANOMALY_HPP_
#define ARENA_CORE_ANOMALY_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/domain.hpp"

namespace arena {

struct Action {
  std::string first;
  std::string second;

  auto operator<=>(const Action&) const = default;
};

// Multiset of ratings in {0, 0.5, 1}, stored as counts.
class RatingCounts {
 public:
  void Add(double rating);
  void Remove(double rating);
  std::int64_t Size() const { return counts_[0] + counts_[1] + counts_[2]; }
  std::int64_t CountAtLeast(double rating) const;

 private:
  std::array<std::int64_t, 3> counts_{};
};

class RatingHistory {
 public:
  void Add(const Action& action, double rating);
  void Remove(const Action& action, double rating);
  // Empty multiset for unseen actions.
  const RatingCounts& For(const Action& action) const;

 private:
  std::map<Action, RatingCounts> by_action_;
};

struct UserSession {
  std::string user_id;
  std::vector<std::pair<Action, double>> ratings;  // vote order
};

struct AnomalyConfig {
  double alpha_sig = 0.05;
  int checkpoint_count = 5;
  int range_low = 1;
  int range_high = 100;
  std::uint64_t deployment_seed = 0;

  void Validate() const;
};

struct CheckpointStatistic {
  int j = 0;
  double m = 0.0;
  double threshold = 0.0;
};

struct AnomalyVerdict {
  bool flagged = false;
  std::optional<int> triggered_checkpoint;
  std::vector<CheckpointStatistic> statistics;
};

// Throws kInvalidRating unless rating is 0, 0.5 or 1.
void CheckRating(double rating);
double RatingOf(Winner winner);

double EmpiricalP(const RatingCounts& history, double rating);
double EmpiricalP(std::span<const double> history, double rating);

// -2 * sum(log p). Throws kNonPositiveP for p outside (0, 1].
double FisherStatistic(std::span<const double> p_values);

// q-quantile of chi-squared with an even number of degrees of freedom, by
// inverting the regularized upper incomplete gamma function Q(df/2, x/2).
double Chi2Quantile(int df, double q);

// Sorted distinct checkpoints in [range_low, range_high], a pure function of
// (user_id, deployment_seed).
std::vector<int> SelectCheckpoints(std::string_view user_id,
                                   const AnomalyConfig& config);

// `histories` must not contain the user's own votes. Only the prefix up to the
// last checkpoint is read. With require_definitive, a session shorter than
// the first checkpoint throws kInsufficientSession.
AnomalyVerdict EvaluateUser(const UserSession& session,
                            const RatingHistory& histories,
                            const AnomalyConfig& config,
                            bool require_definitive = false);

struct UserVerdict {
  std::string user_id;
  int n_votes = 0;
  AnomalyVerdict verdict;
};

// Evaluates every user in the log against everyone else's votes, in
// first-appearance order.
std::vector<UserVerdict> EvaluateAllUsers(std::span<const Vote> votes,
                                          const BattleLookup& battles,
                                          const AnomalyConfig& config);

Json VerdictToJson(const UserVerdict& v);

}  // namespace arena

#endif  // ARENA_CORE_ANOMALY_HPP_
