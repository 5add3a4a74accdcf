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

#include "core/leaderboard.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

namespace arena {

void SortLeaderboard(std::vector<LeaderboardRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const LeaderboardRow& a, const LeaderboardRow& b) {
                     if (a.elo != b.elo) return a.elo > b.elo;
                     return a.model < b.model;
                   });
}

Leaderboard BuildLeaderboard(const BtFitResult& fit, const BootstrapResult* ci,
                             std::span<const Vote> votes,
                             const BattleLookup& battles,
                             const VoteFilter& filter) {
  if (ci != nullptr) {
    std::set<std::string> a(fit.models.begin(), fit.models.end());
    std::set<std::string> b;
    for (const auto& iv : ci->intervals) b.insert(iv.model);
    if (a != b) {
      Fail(ErrorCode::kModelSetMismatch,
           "fit and confidence intervals cover different models");
    }
  }
  std::map<std::string, std::set<std::string>, std::less<>> battle_ids;
  bool any = false;
  for (const auto& v : votes) {
    if (!filter.Matches(v)) continue;
    const Battle* b = battles.FindBattle(v.battle_id);
    if (b == nullptr) continue;
    any = true;
    battle_ids[b->model_first].insert(b->battle_id);
    battle_ids[b->model_second].insert(b->battle_id);
  }
  Leaderboard board;
  board.seed = ci != nullptr ? std::optional(ci->seed) : std::nullopt;
  if (!any) return board;
  for (std::size_t m = 0; m < fit.models.size(); ++m) {
    LeaderboardRow row;
    row.model = fit.models[m];
    row.elo = fit.elo[m];
    if (ci != nullptr) {
      const auto* iv = ci->Find(row.model);
      row.ci_lower = iv->lower;
      row.ci_upper = iv->upper;
    }
    auto it = battle_ids.find(row.model);
    row.battles = it == battle_ids.end() ? 0 : static_cast<int>(it->second.size());
    board.rows.push_back(std::move(row));
  }
  SortLeaderboard(board.rows);
  return board;
}

std::string LeaderboardToJson(const Leaderboard& board) {
  Json rows = Json::array();
  for (const auto& r : board.rows) {
    Json row{{"model", r.model}, {"elo", r.elo}, {"battles", r.battles}};
    if (r.ci_lower) row["ci_lower"] = *r.ci_lower;
    if (r.ci_upper) row["ci_upper"] = *r.ci_upper;
    rows.push_back(std::move(row));
  }
  Json doc{{"rows", std::move(rows)}};
  if (board.seed) doc["seed"] = *board.seed;
  if (board.config_hash) doc["config_hash"] = *board.config_hash;
  return doc.dump(2) + "\n";
}

Leaderboard LeaderboardFromJson(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kParse, e.what());
  }
  Leaderboard board;
  try {
    for (const auto& r : doc.at("rows")) {
      LeaderboardRow row;
      row.model = r.at("model").get<std::string>();
      row.elo = r.at("elo").get<double>();
      row.battles = r.value("battles", 0);
      if (r.contains("ci_lower")) row.ci_lower = r.at("ci_lower").get<double>();
      if (r.contains("ci_upper")) row.ci_upper = r.at("ci_upper").get<double>();
      board.rows.push_back(std::move(row));
    }
    if (doc.contains("seed")) board.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("config_hash")) {
      board.config_hash = doc.at("config_hash").get<std::string>();
    }
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kParse, e.what());
  }
  SortLeaderboard(board.rows);
  return board;
}

std::string RenderLeaderboardTable(const Leaderboard& board) {
  std::size_t width = 5;
  for (const auto& r : board.rows) width = std::max(width, r.model.size());
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-4s  %-*s  %8s  %-19s  %7s\n", "Rank",
                static_cast<int>(width), "Model", "Elo", "95% CI", "Battles");
  out += buf;
  int rank = 0;
  for (const auto& r : board.rows) {
    std::string ci = "-";
    if (r.ci_lower && r.ci_upper) {
      char cbuf[64];
      std::snprintf(cbuf, sizeof(cbuf), "[%.1f, %.1f]", *r.ci_lower, *r.ci_upper);
      ci = cbuf;
    }
    std::snprintf(buf, sizeof(buf), "%-4d  %-*s  %8.1f  %-19s  %7d\n", ++rank,
                  static_cast<int>(width), r.model.c_str(), r.elo, ci.c_str(),
                  r.battles);
    out += buf;
  }
  return out;
}

}  // namespace arena
