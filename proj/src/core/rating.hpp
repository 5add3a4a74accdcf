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

// Bradley-Terry rating from pairwise preference votes.
//
// Each vote becomes a logistic-regression row: the first-shown model's column
// holds +1, the second-shown model's column -1, and y = 1 when the first model
// won. Ties and both-bad votes carry no preference, so they enter as a pair of
// half-weight rows with y = 1 and y = 0; with decisive rows at weight 1 this is
// the same objective as duplicating every vote and splitting the tie copies.
//
// Strengths beta are fitted by minimizing the weighted mean cross-entropy plus
// l2_lambda * |theta|^2, optionally with a style term z^T gamma added to the
// logit so gamma absorbs stylistic preference and beta ranks models net of it.
//
// The Elo scale is elo = 1000 + (400 / ln 10) * (beta - mean(beta)), which makes
// sigma(beta_i - beta_j) equal the base-10 Elo expectation exactly.

#ifndef ARENA_CORE_RATING_HPP_
#define ARENA_CORE_RATING_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/domain.hpp"

namespace arena {

inline constexpr double kEloAnchor = 1000.0;
inline constexpr double kEloScale = 400.0;

using StyleByBattle = std::map<std::string, std::vector<double>, std::less<>>;

struct EncodedRow {
  int first = 0;
  int second = 0;
  double y = 0.0;
  double weight = 1.0;
  std::vector<double> z;
};

struct EncodedBattles {
  std::vector<EncodedRow> rows;
  std::vector<std::string> models;  // column -> model id
  std::size_t style_dim = 0;        // 0 when unstyled

  int ColumnOf(std::string_view model_id) const;
};

struct BtFitConfig {
  double l2_lambda = 1e-6;
  double tolerance = 1e-8;
  int max_iterations = 10000;
  std::uint64_t seed = 0;

  void Validate() const;
};

struct BtFitResult {
  std::vector<std::string> models;
  std::vector<double> beta;
  std::optional<std::vector<double>> gamma;
  std::vector<double> elo;
  int iterations = 0;
  bool converged = false;
  double final_loss = 0.0;

  double EloOf(std::string_view model_id) const;
};

// Sorted ids of every model appearing in a battle referenced by `votes`.
std::vector<std::string> ModelPoolFromVotes(std::span<const Vote> votes,
                                            const BattleLookup& battles);

// `pool` fixes the column order. `style` (when given) must hold a vector for
// every voted battle, all of one dimension.
EncodedBattles EncodeBattles(std::span<const Vote> votes,
                             const BattleLookup& battles,
                             const std::vector<std::string>& pool,
                             const StyleByBattle* style = nullptr);

// Regularized weighted cross-entropy over theta = [beta; gamma].
class BtObjective {
 public:
  BtObjective(const EncodedBattles& data, double l2_lambda, bool use_style);

  std::size_t Dimension() const { return dim_; }
  double Value(std::span<const double> theta) const;
  std::vector<double> Gradient(std::span<const double> theta) const;
  // Row-major dim x dim.
  std::vector<double> Hessian(std::span<const double> theta) const;

 private:
  double Logit(const EncodedRow& row, std::span<const double> theta) const;

  const EncodedBattles& data_;
  double l2_lambda_;
  bool use_style_;
  std::size_t models_;
  std::size_t dim_;
  double total_weight_;
};

BtFitResult FitBt(const EncodedBattles& encoded, const BtFitConfig& config);
BtFitResult FitBtStyled(const EncodedBattles& encoded, const BtFitConfig& config);

std::vector<double> ToElo(std::span<const double> beta);

double ExpectedScore(double rating_i, double rating_j, double alpha = kEloScale);

struct ModelInterval {
  std::string model;
  double point = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct BootstrapResult {
  std::vector<ModelInterval> intervals;
  int resamples = 0;
  std::uint64_t seed = 0;

  const ModelInterval* Find(std::string_view model) const;
};

struct BootstrapOptions {
  int resamples = 100;
  double lower_quantile = 0.025;
  double upper_quantile = 0.975;
  // Worker threads; results are identical for any value.
  int threads = 1;
};

// Resamples raw votes with replacement, re-encodes (so tie splitting is
// re-applied per resample), refits and re-anchors. The point estimate is the
// full-data fit. A resample missing a pool model is redrawn up to 10 times.
BootstrapResult BootstrapCi(std::span<const Vote> votes,
                            const BattleLookup& battles,
                            const std::vector<std::string>& pool,
                            const StyleByBattle* style,
                            const BtFitConfig& config,
                            const BootstrapOptions& options = {});

// Linear-interpolated empirical quantile of unsorted samples.
double EmpiricalQuantile(std::vector<double> samples, double q);

struct OnlineEloState {
  std::map<std::string, double, std::less<>> ratings;
  double k_factor = 32.0;
  double alpha_scale = kEloScale;

  void Register(const std::string& model, double rating = kEloAnchor);
};

// outcome is model i's score: 1 win, 0.5 tie, 0 loss.
OnlineEloState OnlineEloUpdate(const OnlineEloState& state,
                               std::string_view model_i,
                               std::string_view model_j, double outcome);

}  // namespace arena

#endif  // ARENA_CORE_RATING_HPP_
