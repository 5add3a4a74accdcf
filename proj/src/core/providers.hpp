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

// Pluggable external capabilities.
//
// Every provider speaks one JSON request/response message pair per kind:
//
//   moderation     {"text"}                                -> {"allowed", "reason"?}
//   reranker       {"query", "documents": [{"doc_id","text"}]} -> {"scores": [...]}
//   generator      {"model", "provider_config", "system", "prompt",
//                   "question", "references": [...]}         -> {"text", "prompt_tokens",
//                                                              "completion_tokens"}
//   postprocessor  {"system", "prompt", "response", "references"}
//                                                            -> {"references", "response"}
//   classifier     {"task": "attribution"|"category", "system", "prompt", ...}
//                                                            -> {"text"}
//   judge          {"item_id", "prompt"}                     -> {"text"}
//
// Stubs answer from the request alone, so a stub served over HTTP and the
// in-process stub produce byte-identical responses.

#ifndef ARENA_CORE_PROVIDERS_HPP_
#define ARENA_CORE_PROVIDERS_HPP_

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "core/domain.hpp"

namespace arena {

enum class ProviderKind {
  kModeration,
  kRetrieval,
  kReranker,
  kGenerator,
  kPostprocessor,
  kClassifier,
  kJudge,
};

std::string_view ToString(ProviderKind kind);

using Millis = std::chrono::milliseconds;
inline constexpr Millis kDefaultDeadline{60000};

class Provider {
 public:
  virtual ~Provider() = default;

  virtual ProviderKind kind() const = 0;
  virtual bool deterministic_stub() const { return false; }

  // Throws kProviderUnavailable, or kGenerationTimeout past the deadline.
  virtual Json Call(const Json& request, Millis deadline = kDefaultDeadline) = 0;

  virtual bool Reachable() { return true; }
};

using ProviderPtr = std::shared_ptr<Provider>;

class StubProvider : public Provider {
 public:
  bool deterministic_stub() const override { return true; }
};

class ModerationStub : public StubProvider {
 public:
  explicit ModerationStub(std::vector<std::string> denylist = {});
  ProviderKind kind() const override { return ProviderKind::kModeration; }
  Json Call(const Json& request, Millis deadline) override;

 private:
  std::vector<std::string> denylist_;  // case-insensitive substrings
};

// Cosine similarity of term-frequency vectors.
class RerankerStub : public StubProvider {
 public:
  ProviderKind kind() const override { return ProviderKind::kReranker; }
  Json Call(const Json& request, Millis deadline) override;
};

struct GeneratorStubOptions {
  int cite_top_k = 3;
  std::vector<std::string> failing_models;
  std::vector<std::string> reasoning_models;
  Millis latency{0};
};

// Deterministic template answer citing the first cite_top_k references in
// order. Phrasing varies by a hash of the model id so postprocessing has
// something to normalize; the text never names the model.
class GeneratorStub : public StubProvider {
 public:
  explicit GeneratorStub(GeneratorStubOptions options = {});
  ProviderKind kind() const override { return ProviderKind::kGenerator; }
  Json Call(const Json& request, Millis deadline) override;

 private:
  GeneratorStubOptions options_;
};

// Wraps the rule-based normalizer behind the postprocessor message schema.
class PostprocessorStub : public StubProvider {
 public:
  ProviderKind kind() const override { return ProviderKind::kPostprocessor; }
  Json Call(const Json& request, Millis deadline) override;
};

// Attribution: token overlap; category: keyword rules.
class ClassifierStub : public StubProvider {
 public:
  ProviderKind kind() const override { return ProviderKind::kClassifier; }
  Json Call(const Json& request, Millis deadline) override;
};

enum class JudgeStubMode { kAlwaysA, kAlwaysB, kRandom, kOracle, kMoreCitations, kEcho };

class JudgeStub : public StubProvider {
 public:
  explicit JudgeStub(JudgeStubMode mode, std::uint64_t seed = 0,
                     std::map<std::string, std::string> gold = {},
                     std::string echo_text = {});
  ProviderKind kind() const override { return ProviderKind::kJudge; }
  Json Call(const Json& request, Millis deadline) override;

 private:
  JudgeStubMode mode_;
  std::uint64_t seed_;
  std::map<std::string, std::string> gold_;  // item_id -> "A" | "B"
  std::string echo_text_;
};

// Always unreachable.
class UnavailableProvider : public Provider {
 public:
  explicit UnavailableProvider(ProviderKind kind) : kind_(kind) {}
  ProviderKind kind() const override { return kind_; }
  Json Call(const Json& request, Millis deadline) override;
  bool Reachable() override { return false; }

 private:
  ProviderKind kind_;
};

// POSTs the request message as JSON to `endpoint` ("http://host:port/path").
class RemoteProvider : public Provider {
 public:
  RemoteProvider(ProviderKind kind, std::string endpoint);
  ProviderKind kind() const override { return kind_; }
  Json Call(const Json& request, Millis deadline) override;
  bool Reachable() override;

 private:
  ProviderKind kind_;
  std::string base_;
  std::string path_;
};

// {"type": "stub" | "remote" | "unavailable", ...kind-specific stub options,
//  "endpoint": "..."}
ProviderPtr MakeProvider(ProviderKind kind, const Json& config);

struct ProviderSet {
  ProviderPtr moderation;
  ProviderPtr reranker;
  ProviderPtr generator;
  ProviderPtr postprocessor;
  ProviderPtr classifier;
  ProviderPtr judge;

  static ProviderSet Stubs();
  // Missing kinds default to stubs.
  static ProviderSet FromConfig(const Json& providers);
};

// Prompt layouts.
struct Prompt {
  std::string system;
  std::string user;
};

struct PromptReference {
  int index = 0;
  std::string title;
  std::vector<std::string> authors;
  std::string context;
};

Prompt GenerationPrompt(std::string_view question,
                        const std::vector<PromptReference>& references);
Prompt PostprocessPrompt(std::string_view question, std::string_view response,
                         const std::vector<PromptReference>& references);
Prompt CategoryPrompt(std::string_view question);
Prompt AttributionPrompt(std::string_view response, std::string_view authors,
                         std::string_view content);
std::string JudgePrompt(std::string_view question, std::string_view response_a,
                        std::string_view response_b);

}  // namespace arena

#endif  // ARENA_CORE_PROVIDERS_HPP_
