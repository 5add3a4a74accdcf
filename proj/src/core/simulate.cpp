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

#include "core/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "core/storage.hpp"

namespace arena {
namespace {

std::string Numbered(const char* prefix, int n, int width) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%0*d", prefix, width, n);
  return buf;
}

double Contrast(double a, double b) { return (a - b) / (a + b + 1.0); }

}  // namespace

void SimulationConfig::Validate() const {
  Require(models >= 2, "simulation needs at least two models");
  Require(votes >= 1, "simulation needs at least one vote");
  Require(strengths.empty() || static_cast<int>(strengths.size()) == models,
          "strengths must list one value per model");
  Require(tie_prob >= 0.0 && tie_prob < 1.0, "tie probability must lie in [0, 1)");
  Require(users >= 1, "simulation needs at least one user");
  Require(verbosity_spread >= 0.0 && length_jitter >= 0.0 && mean_citations >= 0.0,
          "style parameters must be non-negative");
  for (double s : strengths) {
    if (!std::isfinite(s)) Fail(ErrorCode::kNonFiniteInput, "strengths must be finite");
  }
}

Json SimulationConfig::ToJson() const {
  return {{"models", models},
          {"votes", votes},
          {"seed", seed},
          {"strengths", strengths},
          {"tie_prob", tie_prob},
          {"length_gamma", length_gamma},
          {"citation_gamma", citation_gamma},
          {"verbosity_spread", verbosity_spread},
          {"length_jitter", length_jitter},
          {"mean_citations", mean_citations},
          {"users", users}};
}

SimulatedLog Simulate(const SimulationConfig& config) {
  config.Validate();
  SimulatedLog log;
  const int m = config.models;
  const int width = m >= 100 ? 3 : 2;
  for (int i = 0; i < m; ++i) {
    const std::string id = Numbered("model-", i + 1, width);
    log.models.push_back({id, id, true, Json::object()});
    const double t = static_cast<double>(i) / (m - 1);
    log.true_beta.push_back(config.strengths.empty() ? t : config.strengths[i]);
    log.verbosity.push_back(std::exp(config.verbosity_spread * (2.0 * t - 1.0)));
  }
  log.true_gamma = {config.length_gamma, config.citation_gamma};

  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<int> first_dist(0, m - 1);
  std::uniform_int_distribution<int> second_dist(0, m - 2);
  std::uniform_int_distribution<int> user_dist(1, config.users);
  std::uniform_int_distribution<int> discipline_dist(0, 3);
  std::uniform_int_distribution<int> category_dist(1, 6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> jitter(0.0, 1.0);
  std::poisson_distribution<int> citations(config.mean_citations);

  const Timestamp start = ParseTimestamp("2025-01-01T00:00:00Z");
  const int user_width = config.users >= 1000 ? 5 : 3;
  log.battles.reserve(config.votes);
  log.votes.reserve(config.votes);
  for (int k = 1; k <= config.votes; ++k) {
    const int i = first_dist(rng);
    int j = second_dist(rng);
    if (j >= i) ++j;
    const Discipline discipline = kAllDisciplines[discipline_dist(rng)];
    const Timestamp when = start + std::chrono::seconds(30LL * k);

    const double len_i =
        std::round(300.0 * log.verbosity[i] * std::exp(config.length_jitter * jitter(rng)));
    const double len_j =
        std::round(300.0 * log.verbosity[j] * std::exp(config.length_jitter * jitter(rng)));
    const double cit_i = citations(rng);
    const double cit_j = citations(rng);
    std::vector<double> z = {Contrast(len_i, len_j), Contrast(cit_i, cit_j)};

    Battle b;
    b.battle_id = Numbered("sim-b-", k, 6);
    b.question = "Synthetic question " + std::to_string(k);
    b.discipline = discipline;
    b.model_first = log.models[i].id;
    b.model_second = log.models[j].id;
    b.response_first = b.battle_id + "-a";
    b.response_second = b.battle_id + "-b";
    b.created_at = when;

    Vote v;
    v.vote_id = Numbered("sim-v-", k, 6);
    v.battle_id = b.battle_id;
    v.user_id = Numbered("user-", user_dist(rng), user_width);
    v.timestamp = when;
    v.discipline = discipline;
    v.category = CategoryFromCode(category_dist(rng));
    const double logit = log.true_beta[i] - log.true_beta[j] +
                         z[0] * config.length_gamma + z[1] * config.citation_gamma;
    const double tie_draw = unit(rng);
    const double win_draw = unit(rng);
    if (tie_draw < config.tie_prob) {
      v.winner = Winner::kTie;
    } else {
      v.winner = win_draw < 1.0 / (1.0 + std::exp(-logit)) ? Winner::kFirst : Winner::kSecond;
    }
    log.style.emplace(b.battle_id, std::move(z));
    log.battles.push_back(std::move(b));
    log.votes.push_back(std::move(v));
  }
  return log;
}

Json TruthToJson(const SimulationConfig& config, const SimulatedLog& log) {
  Json models = Json::array();
  for (std::size_t i = 0; i < log.models.size(); ++i) {
    models.push_back({{"model", log.models[i].id},
                      {"beta", log.true_beta[i]},
                      {"verbosity", log.verbosity[i]}});
  }
  return {{"config", config.ToJson()},
          {"models", models},
          {"style_features", kSimulatedStyleFeatures},
          {"gamma", log.true_gamma}};
}

std::string StyleToJsonl(const StyleByBattle& style) {
  std::string out;
  for (const auto& [id, z] : style) out += Json{{"battle_id", id}, {"z", z}}.dump() + "\n";
  return out;
}

StyleByBattle ReadStyleFile(const std::filesystem::path& path) {
  StyleByBattle style;
  std::size_t line_no = 0;
  const std::string content = ReadFile(path);
  std::size_t start = 0;
  while (start < content.size()) {
    auto nl = content.find('\n', start);
    if (nl == std::string::npos) nl = content.size();
    const std::string_view line(content.data() + start, nl - start);
    start = nl + 1;
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      const Json j = Json::parse(line);
      style[j.at("battle_id").get<std::string>()] = j.at("z").get<std::vector<double>>();
    } catch (const Json::exception& e) {
      Fail(ErrorCode::kParse, path.filename().string() + ":" + std::to_string(line_no) +
                                  ": " + e.what());
    }
  }
  return style;
}

}  // namespace arena
