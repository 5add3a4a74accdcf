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

#include "core/ops.hpp"

#include <set>

namespace arena {

Json FitOptions::ToJson() const {
  Json filter_json = Json::object();
  if (filter.discipline) filter_json["discipline"] = ToString(*filter.discipline);
  if (filter.category) filter_json["category"] = CategoryCode(*filter.category);
  if (filter.user_id) filter_json["user_id"] = *filter.user_id;
  if (filter.from) filter_json["from"] = FormatTimestamp(*filter.from);
  if (filter.to) filter_json["to"] = FormatTimestamp(*filter.to);
  Json j{{"l2_lambda", fit.l2_lambda},
         {"tolerance", fit.tolerance},
         {"max_iterations", fit.max_iterations},
         {"seed", fit.seed},
         {"styled", styled},
         {"filter", filter_json},
         {"exclude_flagged", exclude_flagged},
         {"bootstrap_resamples", bootstrap_resamples}};
  if (exclude_flagged) {
    j["anomaly"] = {{"alpha_sig", anomaly.alpha_sig},
                    {"checkpoint_count", anomaly.checkpoint_count},
                    {"range_low", anomaly.range_low},
                    {"range_high", anomaly.range_high},
                    {"deployment_seed", anomaly.deployment_seed}};
  }
  if (bootstrap_resamples > 0) {
    j["ci"] = {bootstrap.lower_quantile, bootstrap.upper_quantile};
  }
  return j;
}

std::string ConfigHash(const Json& canonical) { return Hex64(Fnv1a64(canonical.dump())); }

VoteSelection SelectVotes(std::span<const Vote> votes, const BattleLookup& battles,
                          const VoteFilter& filter, bool exclude_flagged,
                          const AnomalyConfig& anomaly) {
  VoteSelection out;
  std::set<std::string, std::less<>> flagged;
  if (exclude_flagged && !votes.empty()) {
    for (const auto& verdict : EvaluateAllUsers(votes, battles, anomaly)) {
      if (verdict.verdict.flagged) {
        flagged.insert(verdict.user_id);
        out.excluded_users.push_back(verdict.user_id);
      }
    }
  }
  for (const auto& v : votes) {
    if (filter.Matches(v) && !flagged.contains(v.user_id)) out.votes.push_back(v);
  }
  return out;
}

FitOutcome RunFit(std::span<const Vote> votes, const BattleLookup& battles,
                  const StyleByBattle* style, const FitOptions& options) {
  options.fit.Validate();
  Require(options.bootstrap_resamples >= 0, "bootstrap resamples must be >= 0");
  if (options.styled && style == nullptr) {
    Fail(ErrorCode::kDimensionMismatch, "a styled fit needs style vectors");
  }
  VoteSelection selection = SelectVotes(votes, battles, options.filter,
                                        options.exclude_flagged, options.anomaly);
  if (selection.votes.empty()) Fail(ErrorCode::kEmptyVoteSet, "no votes match the selection");

  FitOutcome out;
  out.n_votes = static_cast<int>(selection.votes.size());
  out.excluded_users = std::move(selection.excluded_users);
  out.config_hash = ConfigHash(options.ToJson());
  const StyleByBattle* used_style = options.styled ? style : nullptr;
  const auto pool = ModelPoolFromVotes(selection.votes, battles);
  const auto encoded = EncodeBattles(selection.votes, battles, pool, used_style);
  out.fit = used_style != nullptr ? FitBtStyled(encoded, options.fit)
                                  : FitBt(encoded, options.fit);
  if (options.bootstrap_resamples > 0) {
    BootstrapOptions b = options.bootstrap;
    b.resamples = options.bootstrap_resamples;
    out.ci = BootstrapCi(selection.votes, battles, pool, used_style, options.fit, b);
  }
  out.board = BuildLeaderboard(out.fit, out.ci ? &*out.ci : nullptr, selection.votes, battles);
  out.board.seed = options.fit.seed;
  out.board.config_hash = out.config_hash;
  return out;
}

Leaderboard ComputeLeaderboard(std::span<const Vote> votes, const BattleLookup& battles,
                               const StyleByBattle* style, const FitOptions& options) {
  try {
    return RunFit(votes, battles, style, options).board;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEmptyVoteSet) throw;
    Leaderboard empty;
    empty.seed = options.fit.seed;
    empty.config_hash = ConfigHash(options.ToJson());
    return empty;
  }
}

Json BootstrapToJson(const BootstrapResult& ci) {
  Json intervals = Json::array();
  for (const auto& iv : ci.intervals) {
    intervals.push_back(
        {{"model", iv.model}, {"point", iv.point}, {"lower", iv.lower}, {"upper", iv.upper}});
  }
  return {{"resamples", ci.resamples}, {"seed", ci.seed}, {"intervals", intervals}};
}

Json FitToJson(const FitOutcome& outcome) {
  const auto& f = outcome.fit;
  Json models = Json::array();
  for (std::size_t m = 0; m < f.models.size(); ++m) {
    models.push_back({{"model", f.models[m]}, {"beta", f.beta[m]}, {"elo", f.elo[m]}});
  }
  Json j{{"models", models},
         {"n_votes", outcome.n_votes},
         {"seed", outcome.board.seed.value_or(0)},
         {"config_hash", outcome.config_hash}};
  if (f.gamma) j["gamma"] = *f.gamma;
  if (outcome.ci) j["bootstrap"] = BootstrapToJson(*outcome.ci);
  if (!outcome.excluded_users.empty()) j["excluded_users"] = outcome.excluded_users;
  return j;
}

Json FitDiagnosticsToJson(const FitOutcome& outcome) {
  return {{"iterations", outcome.fit.iterations},
          {"converged", outcome.fit.converged},
          {"final_loss", outcome.fit.final_loss}};
}

}  // namespace arena
