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

#include "core/anomaly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace arena {
namespace {

int Slot(double rating) {
  CheckRating(rating);
  return rating == 0.0 ? 0 : (rating == 0.5 ? 1 : 2);
}

// Q(a, y) = e^-y * sum_{k<a} y^k / k! for integer a >= 1.
double UpperGammaQ(int a, double y) {
  if (y <= 0) return 1.0;
  const double log_y = std::log(y);
  double sum = 0.0;
  for (int k = 0; k < a; ++k) {
    sum += std::exp(-y + k * log_y - std::lgamma(k + 1.0));
  }
  return std::min(sum, 1.0);
}

// -dQ/dy = e^-y * y^(a-1) / (a-1)!
double UpperGammaQDensity(int a, double y) {
  if (y <= 0) return a == 1 ? 1.0 : 0.0;
  return std::exp(-y + (a - 1) * std::log(y) - std::lgamma(static_cast<double>(a)));
}

}  // namespace

void CheckRating(double rating) {
  if (rating != 0.0 && rating != 0.5 && rating != 1.0) {
    Fail(ErrorCode::kInvalidRating, "rating must be 0, 0.5 or 1");
  }
}

double RatingOf(Winner winner) {
  switch (winner) {
    case Winner::kFirst: return 1.0;
    case Winner::kSecond: return 0.0;
    case Winner::kTie:
    case Winner::kBothBad: return 0.5;
  }
  return 0.5;
}

void RatingCounts::Add(double rating) { ++counts_[Slot(rating)]; }

void RatingCounts::Remove(double rating) {
  auto& c = counts_[Slot(rating)];
  if (c == 0) Fail(ErrorCode::kInternal, "removing a rating that is not present");
  --c;
}

std::int64_t RatingCounts::CountAtLeast(double rating) const {
  const int slot = Slot(rating);
  std::int64_t n = 0;
  for (int s = slot; s < 3; ++s) n += counts_[s];
  return n;
}

void RatingHistory::Add(const Action& action, double rating) {
  by_action_[action].Add(rating);
}

void RatingHistory::Remove(const Action& action, double rating) {
  auto it = by_action_.find(action);
  if (it == by_action_.end()) {
    Fail(ErrorCode::kInternal, "removing a rating from an unseen action");
  }
  it->second.Remove(rating);
}

const RatingCounts& RatingHistory::For(const Action& action) const {
  static const RatingCounts kEmpty;
  auto it = by_action_.find(action);
  return it == by_action_.end() ? kEmpty : it->second;
}

void AnomalyConfig::Validate() const {
  Require(alpha_sig > 0 && alpha_sig < 1, "alpha_sig must lie in (0, 1)");
  Require(checkpoint_count >= 1, "checkpoint_count must be >= 1");
  Require(range_low >= 1 && range_high >= range_low, "invalid checkpoint range");
  Require(range_high - range_low + 1 >= checkpoint_count,
          "checkpoint range narrower than checkpoint_count");
}

double EmpiricalP(const RatingCounts& history, double rating) {
  return (1.0 + history.CountAtLeast(rating)) / (history.Size() + 1.0);
}

double EmpiricalP(std::span<const double> history, double rating) {
  RatingCounts counts;
  for (double h : history) counts.Add(h);
  return EmpiricalP(counts, rating);
}

double FisherStatistic(std::span<const double> p_values) {
  double m = 0.0;
  for (double p : p_values) {
    if (!(p > 0.0 && p <= 1.0)) {
      Fail(ErrorCode::kNonPositiveP, "p-values must lie in (0, 1]");
    }
    m -= 2.0 * std::log(p);
  }
  return m;
}

double Chi2Quantile(int df, double q) {
  Require(df >= 2 && df % 2 == 0, "chi2_quantile needs an even df >= 2");
  Require(q > 0.0 && q < 1.0, "quantile level must lie in (0, 1)");
  const int a = df / 2;
  const double tail = 1.0 - q;
  // Solve Q(a, y) = tail for y; x = 2y. Q decreases in y.
  double lo = 0.0;
  double hi = std::max(1.0, static_cast<double>(a));
  while (UpperGammaQ(a, hi) > tail) {
    lo = hi;
    hi *= 2.0;
  }
  double y = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = UpperGammaQ(a, y) - tail;
    if (f > 0) {
      lo = y;
    } else {
      hi = y;
    }
    const double density = UpperGammaQDensity(a, y);
    double next = density > 0 ? y + f / density : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - y) <= 1e-14 * std::max(1.0, y)) {
      y = next;
      break;
    }
    y = next;
  }
  return 2.0 * y;
}

std::vector<int> SelectCheckpoints(std::string_view user_id,
                                   const AnomalyConfig& config) {
  config.Validate();
  std::mt19937_64 rng(MixSeed(Fnv1a64(user_id), config.deployment_seed));
  std::vector<int> range(config.range_high - config.range_low + 1);
  std::iota(range.begin(), range.end(), config.range_low);
  std::vector<int> picked;
  std::sample(range.begin(), range.end(), std::back_inserter(picked),
              config.checkpoint_count, rng);
  std::sort(picked.begin(), picked.end());
  return picked;
}

AnomalyVerdict EvaluateUser(const UserSession& session,
                            const RatingHistory& histories,
                            const AnomalyConfig& config,
                            bool require_definitive) {
  const auto checkpoints = SelectCheckpoints(session.user_id, config);
  const int n = static_cast<int>(session.ratings.size());
  if (require_definitive && n < checkpoints.front()) {
    Fail(ErrorCode::kInsufficientSession,
         "session of " + std::to_string(n) + " votes ends before checkpoint " +
             std::to_string(checkpoints.front()));
  }
  const double level = 1.0 - config.alpha_sig / config.checkpoint_count;
  AnomalyVerdict verdict;
  double m = 0.0;
  std::size_t next_checkpoint = 0;
  const int horizon = std::min(n, checkpoints.back());
  for (int j = 1; j <= horizon && next_checkpoint < checkpoints.size(); ++j) {
    const auto& [action, rating] = session.ratings[j - 1];
    const double p = EmpiricalP(histories.For(action), rating);
    m -= 2.0 * std::log(p);
    if (j == checkpoints[next_checkpoint]) {
      const double threshold = Chi2Quantile(2 * j, level);
      verdict.statistics.push_back({j, m, threshold});
      if (m >= threshold && !verdict.flagged) {
        verdict.flagged = true;
        verdict.triggered_checkpoint = j;
      }
      ++next_checkpoint;
    }
  }
  return verdict;
}

std::vector<UserVerdict> EvaluateAllUsers(std::span<const Vote> votes,
                                          const BattleLookup& battles,
                                          const AnomalyConfig& config) {
  config.Validate();
  RatingHistory all;
  std::vector<std::string> order;
  std::map<std::string, UserSession, std::less<>> sessions;
  for (const auto& v : votes) {
    const Battle* b = battles.FindBattle(v.battle_id);
    if (b == nullptr) {
      Fail(ErrorCode::kUnknownBattle, "unknown battle '" + v.battle_id + "'");
    }
    Action action{b->model_first, b->model_second};
    const double rating = RatingOf(v.winner);
    all.Add(action, rating);
    auto [it, inserted] = sessions.try_emplace(v.user_id);
    if (inserted) {
      it->second.user_id = v.user_id;
      order.push_back(v.user_id);
    }
    it->second.ratings.emplace_back(std::move(action), rating);
  }
  std::vector<UserVerdict> out;
  out.reserve(order.size());
  for (const auto& user : order) {
    const auto& session = sessions.at(user);
    for (const auto& [action, rating] : session.ratings) all.Remove(action, rating);
    out.push_back({user, static_cast<int>(session.ratings.size()),
                   EvaluateUser(session, all, config)});
    for (const auto& [action, rating] : session.ratings) all.Add(action, rating);
  }
  return out;
}

Json VerdictToJson(const UserVerdict& v) {
  Json j{{"user_id", v.user_id},
         {"flagged", v.verdict.flagged},
         {"triggered_checkpoint", nullptr},
         {"n_votes", v.n_votes}};
  if (v.verdict.triggered_checkpoint) {
    j["triggered_checkpoint"] = *v.verdict.triggered_checkpoint;
  }
  return j;
}

}  // namespace arena
