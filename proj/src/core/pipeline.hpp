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

// Question-to-battle pipeline: moderation, retrieval, pair sampling, two
// generations over identical contexts, normalization, and a single commit.

#ifndef ARENA_CORE_PIPELINE_HPP_
#define ARENA_CORE_PIPELINE_HPP_

#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/domain.hpp"
#include "core/providers.hpp"
#include "core/retrieval.hpp"

namespace arena {

struct ModerationResult {
  bool allowed = true;
  std::string reason;
};

// Throws kInvalidArgument for a blank question, kProviderUnavailable when the
// moderation provider cannot be reached.
ModerationResult Moderate(std::string_view question, Provider& moderation);

// Uniform over unordered pairs of active models, then uniform presentation
// order. Throws kPoolTooSmall with fewer than two active models.
std::pair<ModelRef, ModelRef> SampleModelPair(const std::vector<ModelRef>& pool,
                                              std::mt19937_64& rng);

// The first `cap` contexts, numbered from 1.
std::vector<PromptReference> BuildPromptReferences(const RetrievalResult& retrieval,
                                                   const CorpusIndex& corpus, int cap);

// Raw response: thought segments stripped, text otherwise verbatim.
GeneratedResponse GenerateResponse(Provider& generator, const ModelRef& model,
                                   std::string_view question,
                                   const RetrievalResult& retrieval,
                                   const CorpusIndex& corpus, int context_cap,
                                   Millis deadline = kDefaultDeadline);

// Sends the response through the postprocessor provider, then matches the
// citations of its output against the reference list.
GeneratedResponse NormalizeWithProvider(Provider& postprocessor,
                                        const GeneratedResponse& raw,
                                        std::string_view question,
                                        const std::vector<PromptReference>& references);

struct BattleRecord {
  Battle battle;
  GeneratedResponse first;
  GeneratedResponse second;
  RetrievalResult retrieval;
};

Json BattleRecordToJson(const BattleRecord& record);

// Receives complete battles; a commit either stores everything or nothing.
class BattleSink {
 public:
  virtual ~BattleSink() = default;
  virtual void CommitBattle(const BattleRecord& record) = 0;
};

struct PipelineConfig {
  RetrievalLimits limits;
  int context_cap = 30;
  Millis deadline = kDefaultDeadline;
};

struct PipelineContext {
  ProviderSet providers;
  const CorpusIndex* corpus = nullptr;
  std::vector<ModelRef> pool;
  PipelineConfig config;
  std::function<Timestamp()> clock;  // wall clock when empty
};

// Throws kModerationDenied (message = reason) before any retrieval, and
// propagates every later failure without calling the sink.
BattleRecord RunBattle(std::string_view question, Discipline discipline,
                       const PipelineContext& context, std::mt19937_64& rng,
                       BattleSink* sink = nullptr);

// RunBattle after a passed moderation check. A nonempty `battle_id` replaces
// the one drawn from `rng`.
BattleRecord RunModeratedBattle(std::string_view question, Discipline discipline,
                                const PipelineContext& context, std::mt19937_64& rng,
                                BattleSink* sink = nullptr, std::string battle_id = {});

}  // namespace arena

#endif  // ARENA_CORE_PIPELINE_HPP_
