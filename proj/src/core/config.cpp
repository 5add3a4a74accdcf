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

#include "core/config.hpp"

#include <cstdlib>

#include "core/storage.hpp"

namespace arena {
namespace {

std::optional<std::string> ProcessEnv(const std::string& name) {
  const char* value = std::getenv(name.c_str());
  if (value == nullptr) return std::nullopt;
  return std::string(value);
}

template <typename T>
T ParseNumber(const std::string& name, const std::string& text) {
  try {
    std::size_t used = 0;
    T value{};
    if constexpr (std::is_same_v<T, double>) {
      value = std::stod(text, &used);
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      value = std::stoull(text, &used);
    } else {
      value = static_cast<T>(std::stol(text, &used));
    }
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::logic_error&) {
    Fail(ErrorCode::kInvalidArgument, name + " is not a valid number: '" + text + "'");
  }
}

}  // namespace

std::vector<ModelRef> DefaultModelPool() {
  std::vector<ModelRef> pool;
  for (const char* id : {"model-alpha", "model-gamma", "model-eta", "model-theta"}) {
    pool.push_back({id, id, true, Json::object()});
  }
  return pool;
}

void ServiceConfig::Validate() const {
  Require(port >= 0 && port <= 65535, "port out of range");
  Require(snapshot_threshold >= 1, "snapshot_threshold must be >= 1");
  Require(anomaly_alpha > 0.0 && anomaly_alpha < 1.0, "anomaly_alpha must lie in (0, 1)");
  Require(bootstrap_resamples >= 0, "bootstrap_resamples must be >= 0");
  Require(workers >= 1, "workers must be >= 1");
  Require(pipeline.context_cap >= 1, "context_cap must be >= 1");
  Require(pipeline.deadline.count() > 0, "generation deadline must be positive");
  Require(providers.is_object(), "providers must be an object");
}

Json ServiceConfig::ToJson() const {
  return {{"data_dir", data_dir.string()},
          {"host", host},
          {"port", port},
          {"snapshot_threshold", snapshot_threshold},
          {"anomaly_alpha", anomaly_alpha},
          {"deployment_seed", deployment_seed},
          {"seed", seed},
          {"bootstrap_resamples", bootstrap_resamples},
          {"workers", workers},
          {"context_cap", pipeline.context_cap},
          {"generation_deadline_ms", pipeline.deadline.count()},
          {"models", models},
          {"providers", providers}};
}

ServiceConfig ServiceConfig::FromJson(const Json& j) {
  ServiceConfig c;
  try {
    c.data_dir = j.value("data_dir", c.data_dir.string());
    c.host = j.value("host", c.host);
    c.port = j.value("port", c.port);
    c.snapshot_threshold = j.value("snapshot_threshold", c.snapshot_threshold);
    c.anomaly_alpha = j.value("anomaly_alpha", c.anomaly_alpha);
    c.deployment_seed = j.value("deployment_seed", c.deployment_seed);
    c.seed = j.value("seed", c.seed);
    c.bootstrap_resamples = j.value("bootstrap_resamples", c.bootstrap_resamples);
    c.workers = j.value("workers", c.workers);
    c.pipeline.context_cap = j.value("context_cap", c.pipeline.context_cap);
    c.pipeline.deadline = Millis{j.value("generation_deadline_ms", c.pipeline.deadline.count())};
    if (j.contains("models")) c.models = j.at("models").get<std::vector<ModelRef>>();
    c.providers = j.value("providers", Json::object());
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kParse, std::string("invalid service configuration: ") + e.what());
  }
  c.Validate();
  return c;
}

void ApplyEnvironment(ServiceConfig& config, const EnvLookup& env) {
  const EnvLookup get = env ? env : EnvLookup(ProcessEnv);
  if (auto v = get("ARENA_DATA_DIR")) config.data_dir = *v;
  if (auto v = get("ARENA_HOST")) config.host = *v;
  if (auto v = get("ARENA_PORT")) config.port = ParseNumber<int>("ARENA_PORT", *v);
  if (auto v = get("ARENA_SNAPSHOT_THRESHOLD")) {
    config.snapshot_threshold = ParseNumber<int>("ARENA_SNAPSHOT_THRESHOLD", *v);
  }
  if (auto v = get("ARENA_ANOMALY_ALPHA")) {
    config.anomaly_alpha = ParseNumber<double>("ARENA_ANOMALY_ALPHA", *v);
  }
  if (auto v = get("ARENA_DEPLOYMENT_SEED")) {
    config.deployment_seed = ParseNumber<std::uint64_t>("ARENA_DEPLOYMENT_SEED", *v);
  }
  if (auto v = get("ARENA_SEED")) config.seed = ParseNumber<std::uint64_t>("ARENA_SEED", *v);
  for (const char* kind :
       {"moderation", "reranker", "generator", "postprocessor", "classifier", "judge"}) {
    std::string name = "ARENA_" + ToLower(kind) + "_ENDPOINT";
    for (auto& ch : name) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (auto v = get(name)) config.providers[kind] = {{"type", "remote"}, {"endpoint", *v}};
  }
  config.Validate();
}

ServiceConfig LoadServiceConfig(const std::optional<std::filesystem::path>& path,
                                const EnvLookup& env) {
  ServiceConfig config;
  if (path) {
    Json j;
    try {
      j = Json::parse(ReadFile(*path));
    } catch (const Json::exception& e) {
      Fail(ErrorCode::kParse, path->string() + ": " + e.what());
    }
    config = ServiceConfig::FromJson(j);
  }
  ApplyEnvironment(config, env);
  return config;
}

}  // namespace arena
