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

// Exercises the shared library through its C header only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <arena/arena.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "json.hpp"

namespace {

using Json = nlohmann::json;

struct OwnedString {
  char* text = nullptr;
  ~OwnedString() { arena_string_free(text); }
  Json AsJson() const { return Json::parse(text); }
};

std::filesystem::path FreshDir() {
  std::random_device rd;
  return std::filesystem::temp_directory_path() / ("arena-capi-" + std::to_string(rd()));
}

struct SimulatedStore {
  std::filesystem::path dir = FreshDir();
  arena_store* store = nullptr;
  SimulatedStore() {
    OwnedString summary;
    REQUIRE(arena_simulate(R"({"votes": 3000, "seed": 5, "tie_prob": 0.1})", dir.c_str(),
                           &summary.text) == ARENA_OK);
    CHECK(summary.AsJson()["votes"] == 3000);
    REQUIRE(arena_store_open(dir.c_str(), &store) == ARENA_OK);
  }
  ~SimulatedStore() {
    arena_store_close(store);
    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
  }
};

TEST_CASE("status names and version") {
  CHECK(std::string(arena_status_name(ARENA_EMPTY_VOTE_SET)) == "EmptyVoteSet");
  CHECK(std::string(arena_status_name(ARENA_OK)) == "Ok");
  CHECK(std::string(arena_version()).size() > 0);
}

TEST_CASE("scalar helpers") {
  double e = 0;
  REQUIRE(arena_expected_score(1400, 1000, &e) == ARENA_OK);
  CHECK(e == doctest::Approx(10.0 / 11.0));
  double q = 0;
  REQUIRE(arena_chi2_quantile(2, 0.99, &q) == ARENA_OK);
  CHECK(std::abs(q - 9.21034037197618) < 1e-9);
  CHECK(arena_chi2_quantile(3, 0.99, &q) == ARENA_INVALID_ARGUMENT);
  CHECK(std::string(arena_last_error()).find("even") != std::string::npos);
}

TEST_CASE("fit, bootstrap, leaderboard and render") {
  SimulatedStore s;
  int64_t count = 0;
  REQUIRE(arena_store_vote_count(s.store, &count) == ARENA_OK);
  CHECK(count == 3000);

  OwnedString fit;
  REQUIRE(arena_fit(s.store, R"({"seed": 1})", &fit.text) == ARENA_OK);
  auto f = fit.AsJson();
  CHECK(f["models"].size() == 5);
  CHECK(f["n_votes"] == 3000);

  OwnedString styled;
  REQUIRE(arena_fit(s.store, R"({"styled": true})", &styled.text) == ARENA_OK);
  CHECK(styled.AsJson().contains("gamma"));

  OwnedString boot;
  REQUIRE(arena_bootstrap(s.store, R"({"bootstrap_resamples": 10})", &boot.text) == ARENA_OK);
  CHECK(boot.AsJson().contains("bootstrap"));

  OwnedString board;
  REQUIRE(arena_leaderboard(s.store, nullptr, &board.text) == ARENA_OK);
  OwnedString table;
  REQUIRE(arena_leaderboard_render(board.text, "table", &table.text) == ARENA_OK);
  CHECK(std::string(table.text).find("model") != std::string::npos);
  OwnedString canonical;
  REQUIRE(arena_leaderboard_render(board.text, "json", &canonical.text) == ARENA_OK);
  CHECK(std::string(canonical.text) == std::string(board.text));
  char* nothing = reinterpret_cast<char*>(1);
  CHECK(arena_leaderboard_render(board.text, "xml", &nothing) == ARENA_INVALID_ARGUMENT);
  CHECK(nothing == nullptr);
}

TEST_CASE("option validation and empty selections") {
  SimulatedStore s;
  OwnedString out;
  CHECK(arena_fit(s.store, R"({"bogus": 1})", &out.text) == ARENA_INVALID_ARGUMENT);
  CHECK(arena_fit(s.store, "{not json", &out.text) == ARENA_PARSE_ERROR);
  CHECK(arena_fit(s.store, R"({"user_id": "nobody"})", &out.text) == ARENA_EMPTY_VOTE_SET);
  OwnedString board;
  REQUIRE(arena_leaderboard(s.store, R"({"user_id": "nobody"})", &board.text) == ARENA_OK);
  CHECK(board.AsJson()["rows"].empty());
}

TEST_CASE("online elo, anomaly, benchmark and analytics") {
  SimulatedStore s;
  OwnedString elo;
  REQUIRE(arena_online_elo(s.store, nullptr, &elo.text) == ARENA_OK);
  CHECK(elo.AsJson()["ratings"].size() == 5);

  OwnedString anomaly;
  REQUIRE(arena_anomaly(s.store, R"({"alpha": 0.05})", &anomaly.text) == ARENA_OK);
  CHECK(anomaly.AsJson()["users"].size() > 0);

  OwnedString bench;
  REQUIRE(arena_build_benchmark(s.store, R"({"per_discipline": 20, "seed": 3})", &bench.text) ==
          ARENA_OK);
  const std::string jsonl = bench.text;
  CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == 80);

  OwnedString eval;
  REQUIRE(arena_eval_judges(bench.text,
                            R"({"judges": [{"id": "oracle", "provider": {"mode": "oracle"}},
                                           {"id": "always_a", "provider": {"mode": "always_a"}}]})",
                            &eval.text) == ARENA_OK);
  auto report = eval.AsJson()["report"];
  REQUIRE(report["judges"].size() == 2);
  for (const auto& j : report["judges"]) {
    if (j["judge_id"] == "oracle") CHECK(j["accuracy"] == 1.0);
    if (j["judge_id"] == "always_a") CHECK(j["accuracy"] == 0.5);
  }

  OwnedString analytics;
  REQUIRE(arena_analytics(s.store, nullptr, &analytics.text) == ARENA_OK);
  CHECK(analytics.AsJson().contains("win_rates"));
}

TEST_CASE("store appends through the C interface") {
  auto dir = FreshDir();
  arena_store* store = nullptr;
  REQUIRE(arena_store_open(dir.c_str(), &store) == ARENA_OK);
  const char* battles =
      R"({"battle_id":"b1","question":"q","discipline":"healthcare","model_first":"m1",)"
      R"("model_second":"m2","response_first":"r1","response_second":"r2",)"
      R"("created_at":"2025-01-01T00:00:00Z"})"
      "\n";
  REQUIRE(arena_store_add_battles(store, battles) == ARENA_OK);
  const char* vote =
      R"({"vote_id":"v1","battle_id":"b1","user_id":"u","winner":"first",)"
      R"("timestamp":"2025-01-01T00:00:01Z","discipline":"healthcare"})"
      "\n";
  int64_t last = 0;
  REQUIRE(arena_store_append_votes(store, vote, &last) == ARENA_OK);
  CHECK(last == 1);
  CHECK(arena_store_append_votes(store, vote, &last) == ARENA_INTEGRITY_VIOLATION);
  OwnedString loaded;
  REQUIRE(arena_store_load_votes(store, R"({"discipline": "healthcare"})", &loaded.text) ==
          ARENA_OK);
  CHECK(loaded.AsJson()["votes"].size() == 1);
  OwnedString recovery;
  REQUIRE(arena_store_recovery(store, &recovery.text) == ARENA_OK);
  CHECK(recovery.AsJson()["corrupt"].empty());
  arena_store_close(store);
  std::filesystem::remove_all(dir);
}

TEST_CASE("server lifecycle") {
  auto dir = FreshDir();
  const std::string overrides = Json{{"data_dir", dir.string()}, {"port", 0}}.dump();
  arena_server* server = nullptr;
  REQUIRE(arena_server_create(nullptr, overrides.c_str(), &server) == ARENA_OK);
  OwnedString config;
  REQUIRE(arena_server_config(server, &config.text) == ARENA_OK);
  CHECK(config.AsJson()["data_dir"] == dir.string());
  int port = 0;
  REQUIRE(arena_server_start(server, &port) == ARENA_OK);
  CHECK(port > 0);
  CHECK(arena_server_wait_idle(server) == ARENA_OK);
  CHECK(arena_server_stop(server) == ARENA_OK);
  arena_server_destroy(server);
  CHECK(arena_server_create(nullptr, R"({"port": -5})", &server) == ARENA_INVALID_ARGUMENT);
  std::filesystem::remove_all(dir);
}

}  // namespace
