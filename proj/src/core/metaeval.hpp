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

// Judge benchmark: balanced (question, response a, response b, human gold)
// items drawn from decisive votes, and accuracy scoring of pairwise judges.

#ifndef ARENA_CORE_METAEVAL_HPP_
#define ARENA_CORE_METAEVAL_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core/domain.hpp"
#include "core/providers.hpp"

namespace arena {

struct BenchmarkItem {
  std::string item_id;
  std::string question;
  std::string response_a;  // first-shown response
  std::string response_b;
  Discipline discipline = Discipline::kNaturalScience;
  std::string gold;  // "A" or "B"

  bool operator==(const BenchmarkItem&) const = default;
};

void to_json(Json& j, const BenchmarkItem& item);
void from_json(const Json& j, BenchmarkItem& item);

// Normalized (first, second) response texts of a battle, if stored.
using ResponseTextSource =
    std::function<std::optional<std::pair<std::string, std::string>>(const Battle&)>;

struct BenchmarkOptions {
  int per_discipline = 500;  // even; half gold A, half gold B
  std::uint64_t seed = 0;
};

// Throws kInsufficientVotes naming the discipline and side that fall short.
// Battles without stored texts use their response ids as text.
std::vector<BenchmarkItem> BuildBenchmark(std::span<const Vote> votes,
                                          const BattleLookup& battles,
                                          const ResponseTextSource& texts,
                                          const BenchmarkOptions& options = {});

enum class JudgeChoice { kA, kB, kUnparseable };

std::string_view ToString(JudgeChoice c);

// Last case-insensitive "output (a)" / "output (b)" wins.
JudgeChoice ParseJudgeChoice(std::string_view text);

struct JudgeVerdict {
  std::string item_id;
  std::string judge_id;
  JudgeChoice choice = JudgeChoice::kUnparseable;
  std::string raw_output;
  // With both orders: the choice on the swapped prompt, mapped back.
  std::optional<JudgeChoice> swapped_choice;
};

void to_json(Json& j, const JudgeVerdict& v);
// Reads "choice" as stored; a missing choice is re-parsed from "raw_output".
void from_json(const Json& j, JudgeVerdict& v);

JudgeVerdict RunJudge(Provider& judge, std::string_view judge_id, const BenchmarkItem& item,
                      bool both_orders = false);

// Up to `parallelism` concurrent provider calls; output follows item order.
std::vector<JudgeVerdict> RunJudgeOnItems(Provider& judge, std::string_view judge_id,
                                          std::span<const BenchmarkItem> items,
                                          int parallelism = 1, bool both_orders = false);

struct DisciplineScore {
  int total = 0;
  int correct = 0;
  double accuracy = 0.0;
};

struct JudgeScore {
  std::string judge_id;
  int total = 0;
  int correct = 0;
  int unparseable = 0;
  int missing = 0;
  double accuracy = 0.0;
  std::map<Discipline, DisciplineScore> per_discipline;
  std::optional<double> position_consistency;
};

struct EvalReport {
  std::vector<JudgeScore> judges;  // sorted by judge id
};

// Unparseable counts as wrong. An item without a verdict from some judge
// throws kMissingVerdicts unless missing_as_wrong is set.
EvalReport ScoreJudges(std::span<const JudgeVerdict> verdicts,
                       std::span<const BenchmarkItem> items, bool missing_as_wrong = false);

Json EvalReportToJson(const EvalReport& report);
std::string RenderEvalTable(const EvalReport& report);

}  // namespace arena

#endif  // ARENA_CORE_METAEVAL_HPP_
