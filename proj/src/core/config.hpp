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

// Service configuration: a JSON file overlaid by environment variables.
//
//   {
//     "data_dir": "data",              ARENA_DATA_DIR
//     "host": "127.0.0.1",             ARENA_HOST
//     "port": 8080,                    ARENA_PORT
//     "snapshot_threshold": 50,        ARENA_SNAPSHOT_THRESHOLD
//     "anomaly_alpha": 0.05,           ARENA_ANOMALY_ALPHA
//     "deployment_seed": 0,            ARENA_DEPLOYMENT_SEED
//     "seed": 0,                       ARENA_SEED
//     "bootstrap_resamples": 0,
//     "workers": 2,
//     "context_cap": 30,
//     "generation_deadline_ms": 60000,
//     "models": [{"id": ..., "display_name": ..., "active": true,
//                 "provider_config": {}}],
//     "providers": {"generator": {"type": "remote", "endpoint": ...}, ...}
//   }
//
// ARENA_<KIND>_ENDPOINT (e.g. ARENA_GENERATOR_ENDPOINT) switches that provider
// to a remote endpoint.

#ifndef ARENA_CORE_CONFIG_HPP_
#define ARENA_CORE_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/domain.hpp"
#include "core/pipeline.hpp"

namespace arena {

struct ServiceConfig {
  std::filesystem::path data_dir = "data";
  std::string host = "127.0.0.1";
  int port = 8080;
  int snapshot_threshold = 50;
  double anomaly_alpha = 0.05;
  std::uint64_t deployment_seed = 0;
  std::uint64_t seed = 0;
  int bootstrap_resamples = 0;
  int workers = 2;
  PipelineConfig pipeline;
  std::vector<ModelRef> models;
  Json providers = Json::object();

  void Validate() const;
  Json ToJson() const;
  static ServiceConfig FromJson(const Json& j);
};

// The default pool used when no models are configured.
std::vector<ModelRef> DefaultModelPool();

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

// Reads `path` when given, then applies environment overrides.
ServiceConfig LoadServiceConfig(const std::optional<std::filesystem::path>& path,
                                const EnvLookup& env = {});

void ApplyEnvironment(ServiceConfig& config, const EnvLookup& env);

}  // namespace arena

#endif  // ARENA_CORE_CONFIG_HPP_
