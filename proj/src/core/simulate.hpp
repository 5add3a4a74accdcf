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

// Seeded synthetic vote logs with known strengths and style effects.
//
// Every vote gets its own battle between a uniformly sampled ordered pair.
// Response lengths follow a per-model verbosity times log-normal jitter and
// citation counts are Poisson; the battle's style vector is the contrast
// [length, citation_count]. A vote is a tie with probability tie_prob,
// otherwise the first model wins with probability
// sigma(beta_i - beta_j + z . gamma).

#ifndef ARENA_CORE_SIMULATE_HPP_
#define ARENA_CORE_SIMULATE_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "core/domain.hpp"
#include "core/rating.hpp"

namespace arena {

inline constexpr std::array<std::string_view, 2> kSimulatedStyleFeatures = {
    "length", "citation_count"};

struct SimulationConfig {
  int models = 5;
  int votes = 20000;
  std::uint64_t seed = 7;
  std::vector<double> strengths;  // empty: evenly spaced over [0, 1]
  double tie_prob = 0.0;
  double length_gamma = 0.0;
  double citation_gamma = 0.0;
  double verbosity_spread = 1.0;  // log-verbosity spans [-spread, spread]
  double length_jitter = 0.5;     // sd of log-length noise
  double mean_citations = 4.0;
  int users = 100;

  void Validate() const;
  Json ToJson() const;
};

struct SimulatedLog {
  std::vector<ModelRef> models;
  std::vector<double> true_beta;
  std::vector<double> true_gamma;
  std::vector<double> verbosity;
  std::vector<Battle> battles;
  std::vector<Vote> votes;
  StyleByBattle style;
};

SimulatedLog Simulate(const SimulationConfig& config);

Json TruthToJson(const SimulationConfig& config, const SimulatedLog& log);

// Line-delimited {"battle_id", "z"} records.
std::string StyleToJsonl(const StyleByBattle& style);
StyleByBattle ReadStyleFile(const std::filesystem::path& path);

}  // namespace arena

#endif  // ARENA_CORE_SIMULATE_HPP_
