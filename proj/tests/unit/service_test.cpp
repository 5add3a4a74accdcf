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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "core/service.hpp"
#include "core/storage.hpp"
#include "httplib.h"
#include "support/test_support.hpp"

namespace arena {
namespace {

using testing::TempDir;

ServiceConfig ConfigFor(const TempDir& dir, bool with_corpus = true) {
  if (with_corpus) {
    DataStore store(dir.path());
    store.IngestCorpus(ReadCorpusFile(testing::FixturePath("corpus_small.jsonl")));
  }
  ServiceConfig c;
  c.data_dir = dir.path();
  c.port = 0;
  c.snapshot_threshold = 2;
  c.seed = 7;
  c.models = DefaultModelPool();
  c.providers = {{"moderation", {{"denylist", {"forbidden"}}}}};
  return c;
}

Json BodyOf(const ApiResponse& r) { return Json::parse(r.body); }

std::string ErrorCodeOf(const ApiResponse& r) {
  return BodyOf(r)["error"]["code"].get<std::string>();
}

std::string Ask(ArenaService& service, const std::string& text,
                const std::string& discipline = "natural_science") {
  auto r = service.SubmitQuestion(Json{{"text", text}, {"discipline", discipline}}.dump());
  REQUIRE(r.status == 202);
  auto body = BodyOf(r);
  CHECK(body["status"] == "pending");
  return body["battle_id"];
}

std::string Vote(const std::string& battle, const std::string& winner) {
  return Json{{"battle_id", battle}, {"winner", winner}}.dump();
}

TEST_CASE("question to battle to vote") {
  TempDir dir;
  ArenaService service(ConfigFor(dir), [] { return testing::At(0); });
  const std::string id = Ask(service, "How do attention networks predict protein folding?");
  service.WaitIdle();

  auto battle = service.GetBattle(id, std::string("u1"));
  REQUIRE(battle.status == 200);
  auto b = BodyOf(battle);
  CHECK(b["status"] == "ready");
  CHECK(b["discipline"] == "natural_science");
  CHECK_FALSE(b["responses"]["a"]["text"].get<std::string>().empty());
  CHECK_FALSE(b.contains("revealed"));

  auto vote = service.SubmitVote(Vote(id, "first"), std::string("u1"));
  REQUIRE(vote.status == 200);
  auto v = BodyOf(vote);
  CHECK(v["seq"] == 1);
  CHECK(v["revealed"].contains("model_first"));
  CHECK(BodyOf(service.GetBattle(id, std::string("u1"))).contains("revealed"));
  CHECK_FALSE(BodyOf(service.GetBattle(id, std::string("u2"))).contains("revealed"));

  auto dup = service.SubmitVote(Vote(id, "second"), std::string("u1"));
  CHECK(dup.status == 409);
  CHECK(ErrorCodeOf(dup) == api_code::kDuplicateVote);
}

TEST_CASE("vote validation errors") {
  TempDir dir;
  ArenaService service(ConfigFor(dir));
  const std::string id = Ask(service, "What limits graphene transistors?", "engineering");
  service.WaitIdle();

  auto bad_winner = service.SubmitVote(Vote(id, "draw"), std::string("u1"));
  CHECK(bad_winner.status == 400);
  CHECK(ErrorCodeOf(bad_winner) == api_code::kInvalidWinner);

  auto no_user = service.SubmitVote(Vote(id, "tie"), std::nullopt);
  CHECK(no_user.status == 400);
  CHECK(ErrorCodeOf(no_user) == api_code::kMissingUser);

  auto body_user = service.SubmitVote(
      Json{{"battle_id", id}, {"winner", "tie"}, {"user_id", "u9"}}.dump(), std::nullopt);
  CHECK(body_user.status == 200);

  auto unknown = service.SubmitVote(Vote("b-nope", "tie"), std::string("u1"));
  CHECK(unknown.status == 404);
  CHECK(ErrorCodeOf(unknown) == api_code::kUnknownBattle);

  auto malformed = service.SubmitVote("{oops", std::string("u1"));
  CHECK(malformed.status == 400);
  CHECK(ErrorCodeOf(malformed) == api_code::kMalformedRequest);
}

TEST_CASE("question errors") {
  TempDir dir;
  ArenaService service(ConfigFor(dir));
  auto denied = service.SubmitQuestion(
      Json{{"text", "a forbidden topic"}, {"discipline", "healthcare"}}.dump());
  CHECK(denied.status == 422);
  CHECK(BodyOf(denied)["reason"] == "forbidden");
  auto no_discipline = service.SubmitQuestion(Json{{"text", "hi"}}.dump());
  CHECK(no_discipline.status == 400);
  auto empty = service.SubmitQuestion(Json{{"text", " "}, {"discipline", "healthcare"}}.dump());
  CHECK(empty.status == 400);
  auto missing = service.GetBattle("b-missing", std::nullopt);
  CHECK(missing.status == 404);
}

TEST_CASE("generation failures surface on the battle") {
  TempDir dir;
  auto config = ConfigFor(dir, false);
  ArenaService service(config);
  const std::string id = Ask(service, "anything");
  service.WaitIdle();
  auto r = service.GetBattle(id, std::nullopt);
  CHECK(r.status >= 400);
  auto body = BodyOf(r);
  CHECK(body["status"] == "failed");
  CHECK(body["battle_id"] == id);
  CHECK(body["error"]["code"] == api_code::kEmptyCorpus);
}

TEST_CASE("unavailable moderation is a 503") {
  TempDir dir;
  auto config = ConfigFor(dir);
  config.providers = {{"moderation", {{"type", "unavailable"}}}};
  ArenaService service(config);
  auto r = service.SubmitQuestion(Json{{"text", "q"}, {"discipline", "healthcare"}}.dump());
  CHECK(r.status == 503);
  CHECK(ErrorCodeOf(r) == api_code::kProviderUnavailable);
  auto health = BodyOf(service.Health());
  CHECK(health["status"] == "degraded");
  CHECK(health["providers"]["moderation"] == false);
}

TEST_CASE("leaderboard: empty, filtered, invalid and persisted") {
  TempDir dir;
  auto config = ConfigFor(dir);
  {
    ArenaService service(config);
    auto empty = service.GetLeaderboard({});
    REQUIRE(empty.status == 200);
    CHECK(BodyOf(empty)["rows"].empty());

    CHECK(service.GetLeaderboard({{"discipline", "astrology"}}).status == 400);
    CHECK(ErrorCodeOf(service.GetLeaderboard({{"category", "99"}})) == api_code::kInvalidFilter);
    CHECK(service.GetLeaderboard({{"exclude_flagged", "maybe"}}).status == 400);

    const char* questions[] = {"protein folding attention", "graphene mobility",
                               "statin therapy elderly", "perovskite stability"};
    int user = 0;
    for (const char* q : questions) {
      const std::string id = Ask(service, q);
      service.WaitIdle();
      for (int k = 0; k < 3; ++k) {
        auto v = service.SubmitVote(Vote(id, k == 2 ? "second" : "first"),
                                    "user" + std::to_string(user++));
        REQUIRE(v.status == 200);
      }
    }
    service.WaitIdle();
    auto board = service.GetLeaderboard({});
    REQUIRE(board.status == 200);
    auto rows = BodyOf(board)["rows"];
    CHECK_FALSE(rows.empty());
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i - 1]["elo"].get<double>() >= rows[i]["elo"].get<double>());
    }
    CHECK(service.GetLeaderboard({{"discipline", "natural_science"}}).status == 200);
    CHECK(BodyOf(service.GetLeaderboard({{"discipline", "healthcare"}}))["rows"].empty());
    CHECK(service.store().LatestSnapshot().has_value());
  }
  ArenaService restarted(config);
  CHECK(BodyOf(restarted.Health())["votes"] == 12);
  CHECK_FALSE(BodyOf(restarted.GetLeaderboard({}))["rows"].empty());
}

TEST_CASE("health reports stubs as reachable") {
  TempDir dir;
  ArenaService service(ConfigFor(dir));
  auto h = BodyOf(service.Health());
  CHECK(h["status"] == "ok");
  CHECK(h["corpus_documents"] == 12);
  CHECK(h["votes"] == 0);
}

TEST_CASE("http round trip") {
  TempDir dir;
  ArenaService service(ConfigFor(dir));
  HttpServer server(service);
  const int port = server.Start("127.0.0.1", 0);
  REQUIRE(port > 0);
  httplib::Client client("127.0.0.1", port);

  auto health = client.Get("/api/healthz");
  REQUIRE(health);
  CHECK(health->status == 200);

  auto posted = client.Post("/api/questions",
                            Json{{"text", "attention networks protein folding"},
                                 {"discipline", "natural_science"}}
                                .dump(),
                            "application/json");
  REQUIRE(posted);
  CHECK(posted->status == 202);
  const std::string id = Json::parse(posted->body)["battle_id"];
  service.WaitIdle();

  auto battle = client.Get("/api/battles/" + id);
  REQUIRE(battle);
  CHECK(battle->status == 200);

  httplib::Headers headers = {{"X-User-Id", "http-user"}};
  auto vote = client.Post("/api/votes", headers, Vote(id, "tie"), "application/json");
  REQUIRE(vote);
  CHECK(vote->status == 200);

  auto board = client.Get("/api/leaderboard?discipline=natural_science");
  REQUIRE(board);
  CHECK(board->status == 200);

  auto bad = client.Get("/api/leaderboard?discipline=nope");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  CHECK(Json::parse(bad->body)["error"]["code"] == api_code::kInvalidFilter);

  auto missing = client.Get("/api/nowhere");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  CHECK(Json::parse(missing->body)["error"]["code"] == api_code::kNotFound);
  server.Stop();
}

}  // namespace
}  // namespace arena
