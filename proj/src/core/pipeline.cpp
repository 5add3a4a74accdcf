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

#include "core/pipeline.hpp"

#include <chrono>
#include <future>

#include "core/postprocess.hpp"

namespace arena {
namespace {

Json ReferencesToJson(const std::vector<PromptReference>& refs) {
  Json out = Json::array();
  for (const auto& r : refs) {
    out.push_back({{"index", r.index},
                   {"title", r.title},
                   {"authors", r.authors},
                   {"context", r.context}});
  }
  return out;
}

}  // namespace

ModerationResult Moderate(std::string_view question, Provider& moderation) {
  Require(!Trim(question).empty(), "question is empty");
  const Json reply = moderation.Call({{"text", std::string(question)}});
  ModerationResult result;
  result.allowed = reply.at("allowed").get<bool>();
  if (!result.allowed) result.reason = reply.value("reason", std::string("denied"));
  return result;
}

std::pair<ModelRef, ModelRef> SampleModelPair(const std::vector<ModelRef>& pool,
                                              std::mt19937_64& rng) {
  std::vector<const ModelRef*> active;
  for (const auto& m : pool) {
    if (m.active) active.push_back(&m);
  }
  if (active.size() < 2) {
    Fail(ErrorCode::kPoolTooSmall, "need at least two active models, have " +
                                       std::to_string(active.size()));
  }
  const std::size_t n = active.size();
  std::uniform_int_distribution<std::size_t> pick_first(0, n - 1);
  std::uniform_int_distribution<std::size_t> pick_second(0, n - 2);
  const std::size_t i = pick_first(rng);
  std::size_t j = pick_second(rng);
  if (j >= i) ++j;
  return {*active[i], *active[j]};
}

std::vector<PromptReference> BuildPromptReferences(const RetrievalResult& retrieval,
                                                   const CorpusIndex& corpus, int cap) {
  Require(cap >= 1, "context cap must be positive");
  std::vector<PromptReference> refs;
  for (const auto& ctx : retrieval.contexts) {
    if (static_cast<int>(refs.size()) >= cap) break;
    const CorpusDocument* doc = corpus.Find(ctx.doc_id);
    if (doc == nullptr) {
      Fail(ErrorCode::kInternal, "retrieved document '" + ctx.doc_id + "' is not indexed");
    }
    refs.push_back({static_cast<int>(refs.size()) + 1, doc->title, doc->authors, doc->text});
  }
  return refs;
}

GeneratedResponse GenerateResponse(Provider& generator, const ModelRef& model,
                                   std::string_view question,
                                   const RetrievalResult& retrieval,
                                   const CorpusIndex& corpus, int context_cap,
                                   Millis deadline) {
  if (retrieval.contexts.empty()) {
    Fail(ErrorCode::kEmptyCorpus, "no relevant documents were retrieved");
  }
  const auto refs = BuildPromptReferences(retrieval, corpus, context_cap);
  const Prompt prompt = GenerationPrompt(question, refs);
  const Json request{{"model", model.id},
                     {"provider_config", model.provider_config},
                     {"system", prompt.system},
                     {"prompt", prompt.user},
                     {"question", std::string(question)},
                     {"references", ReferencesToJson(refs)}};
  const auto start = std::chrono::steady_clock::now();
  const Json reply = generator.Call(request, deadline);
  const auto elapsed = std::chrono::steady_clock::now() - start;

  GeneratedResponse out;
  out.model = model.id;
  out.retrieval_id = retrieval.retrieval_id;
  try {
    out.raw_text = StripThoughts(reply.at("text").get<std::string>());
    out.generation_metadata.prompt_tokens = reply.value("prompt_tokens", 0);
    out.generation_metadata.completion_tokens = reply.value("completion_tokens", 0);
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kProviderUnavailable,
         std::string("generator reply is malformed: ") + e.what());
  }
  // Stub latency stays 0 so stored battles replay byte-identically.
  if (!generator.deterministic_stub()) {
    out.generation_metadata.latency_ms =
        std::chrono::duration<double, std::milli>(elapsed).count();
  }
  for (const auto& r : refs) out.reference_list.push_back(retrieval.contexts[r.index - 1].doc_id);
  return out;
}

GeneratedResponse NormalizeWithProvider(Provider& postprocessor,
                                        const GeneratedResponse& raw,
                                        std::string_view question,
                                        const std::vector<PromptReference>& references) {
  const Prompt prompt = PostprocessPrompt(question, raw.raw_text, references);
  Json indices = Json::array();
  for (const auto& r : references) indices.push_back(r.index);
  const Json reply = postprocessor.Call({{"system", prompt.system},
                                         {"prompt", prompt.user},
                                         {"response", raw.raw_text},
                                         {"references", indices}});
  GeneratedResponse staged = raw;
  try {
    staged.raw_text = reply.at("response").get<std::string>();
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kProviderUnavailable,
         std::string("postprocessor reply is malformed: ") + e.what());
  }
  GeneratedResponse out = PostprocessResponse(staged);
  out.raw_text = raw.raw_text;
  return out;
}

Json BattleRecordToJson(const BattleRecord& record) {
  return {{"battle", record.battle},
          {"responses", {{"first", record.first}, {"second", record.second}}},
          {"retrieval", RetrievalToJson(record.retrieval)}};
}

BattleRecord RunBattle(std::string_view question, Discipline discipline,
                       const PipelineContext& context, std::mt19937_64& rng,
                       BattleSink* sink) {
  const ModerationResult moderation = Moderate(question, *context.providers.moderation);
  if (!moderation.allowed) Fail(ErrorCode::kModerationDenied, moderation.reason);
  return RunModeratedBattle(question, discipline, context, rng, sink);
}

BattleRecord RunModeratedBattle(std::string_view question, Discipline discipline,
                                const PipelineContext& context, std::mt19937_64& rng,
                                BattleSink* sink, std::string battle_id) {
  Require(context.corpus != nullptr, "pipeline has no corpus");
  const auto& providers = context.providers;
  BattleRecord record;
  record.retrieval = Retrieve(question, *context.corpus, *providers.reranker, {},
                              context.config.limits);
  const auto [first, second] = SampleModelPair(context.pool, rng);
  if (battle_id.empty()) battle_id = "b-" + Hex64(rng());

  const auto& cfg = context.config;
  auto generate = [&](const ModelRef& model) {
    return GenerateResponse(*providers.generator, model, question, record.retrieval,
                            *context.corpus, cfg.context_cap, cfg.deadline);
  };
  auto first_future = std::async(std::launch::async, generate, std::cref(first));
  auto second_future = std::async(std::launch::async, generate, std::cref(second));
  GeneratedResponse raw_first = first_future.get();
  GeneratedResponse raw_second = second_future.get();

  const auto refs = BuildPromptReferences(record.retrieval, *context.corpus, cfg.context_cap);
  record.first = NormalizeWithProvider(*providers.postprocessor, raw_first, question, refs);
  record.second = NormalizeWithProvider(*providers.postprocessor, raw_second, question, refs);
  record.first.response_id = battle_id + "-a";
  record.second.response_id = battle_id + "-b";

  Battle& b = record.battle;
  b.battle_id = battle_id;
  b.question = std::string(question);
  b.discipline = discipline;
  b.model_first = first.id;
  b.model_second = second.id;
  b.response_first = record.first.response_id;
  b.response_second = record.second.response_id;
  b.created_at = context.clock
                     ? context.clock()
                     : std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  if (sink != nullptr) sink->CommitBattle(record);
  return record;
}

}  // namespace arena
