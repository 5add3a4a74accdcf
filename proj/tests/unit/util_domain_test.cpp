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

#include "core/config.hpp"
#include "core/domain.hpp"
#include "core/util.hpp"
#include "support/test_support.hpp"

namespace arena {
namespace {

using testing::MakeBattle;
using testing::MakeVote;

TEST_CASE("fnv1a64 matches published vectors") {
  CHECK(Fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(Fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(Fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("hex64 pads to sixteen digits") {
  CHECK(Hex64(0) == "0000000000000000");
  CHECK(Hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("mix seed separates streams") {
  CHECK(MixSeed(1, 2) != MixSeed(1, 3));
  CHECK(MixSeed(1, 2) != MixSeed(2, 2));
  CHECK(MixSeed(5, 9) == MixSeed(5, 9));
}

TEST_CASE("timestamps round trip in RFC 3339") {
  const Timestamp t = ParseTimestamp("2025-03-04T05:06:07Z");
  CHECK(FormatTimestamp(t) == "2025-03-04T05:06:07Z");
  CHECK_THROWS_AS(ParseTimestamp("yesterday"), Error);
}

TEST_CASE("trim, lower and token counts") {
  CHECK(Trim("  a b \n") == "a b");
  CHECK(ToLower("AbC") == "abc");
  CHECK(CountWhitespaceTokens("one  two\tthree\n") == 3);
  CHECK(CountWhitespaceTokens("") == 0);
}

TEST_CASE("enum names round trip") {
  for (Discipline d : kAllDisciplines) CHECK(ParseDiscipline(ToString(d)) == d);
  for (Winner w : {Winner::kFirst, Winner::kSecond, Winner::kTie, Winner::kBothBad}) {
    CHECK(ParseWinner(ToString(w)) == w);
  }
  CHECK(ToString(Discipline::kHumanitiesSocial) == "humanities_social");
  CHECK(ToString(Winner::kBothBad) == "both_bad");
  CHECK_FALSE(ParseWinner("draw").has_value());
  for (int code = 1; code <= 6; ++code) {
    auto c = CategoryFromCode(code);
    REQUIRE(c.has_value());
    CHECK(CategoryCode(*c) == code);
  }
  CHECK_FALSE(CategoryFromCode(0).has_value());
  CHECK_FALSE(CategoryFromCode(7).has_value());
}

TEST_CASE("vote json round trip") {
  Battle b = MakeBattle("b1", "m1", "m2", Discipline::kHealthcare);
  Vote v = MakeVote(b, "u1", Winner::kSecond, 42);
  v.justification = "clearer";
  v.category = QuestionCategory::kPaperFinding;
  const std::string line = EncodeLine(v);
  CHECK(DecodeLine<Vote>(line) == v);
  CHECK_THROWS_AS(DecodeLine<Vote>("{not json"), Error);
}

TEST_CASE("battle and corpus json round trip") {
  Battle b = MakeBattle("b2", "m3", "m4", Discipline::kEngineering);
  CHECK(DecodeLine<Battle>(EncodeLine(b)) == b);
  CorpusDocument d;
  d.doc_id = "d1";
  d.title = "T";
  d.authors = {"A"};
  d.year = 2020;
  d.kind = DocumentKind::kSnippet;
  d.text = "body";
  d.venue = "Venue";
  CHECK(DecodeLine<CorpusDocument>(EncodeLine(d)) == d);
}

TEST_CASE("corpus documents require id, title, kind and text") {
  CHECK_THROWS_AS(DecodeLine<CorpusDocument>(R"({"doc_id":"x","title":"t","kind":"abstract","text":""})"),
                  Error);
  CHECK_THROWS_AS(DecodeLine<CorpusDocument>(R"({"doc_id":"x","title":"t","kind":"poster","text":"a"})"),
                  Error);
}

TEST_CASE("vote validation") {
  InMemoryBattles battles({MakeBattle("b1", "m1", "m2")});
  Vote ok = MakeVote(*battles.FindBattle("b1"), "u1", Winner::kFirst);
  CHECK_NOTHROW(ValidateVote(ok, battles));

  Vote unknown = ok;
  unknown.battle_id = "nope";
  try {
    ValidateVote(unknown, battles);
    FAIL("expected UnknownBattle");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownBattle);
  }

  battles.RecordVote(ok);
  try {
    ValidateVote(ok, battles);
    FAIL("expected DuplicateVote");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDuplicateVote);
  }
}

TEST_CASE("vote filter matches every dimension") {
  Battle b = MakeBattle("b1", "m1", "m2", Discipline::kHealthcare);
  Vote v = MakeVote(b, "u1", Winner::kFirst, 100);
  v.category = QuestionCategory::kStateOfTheArt;
  VoteFilter f;
  CHECK(f.IsEmpty());
  CHECK(f.Matches(v));
  f.discipline = Discipline::kHealthcare;
  f.category = QuestionCategory::kStateOfTheArt;
  f.user_id = "u1";
  f.from = testing::At(100);
  f.to = testing::At(100);
  CHECK(f.Matches(v));
  f.to = testing::At(99);
  CHECK_FALSE(f.Matches(v));
  f.to.reset();
  f.discipline = Discipline::kEngineering;
  CHECK_FALSE(f.Matches(v));
}

TEST_CASE("error code names are stable") {
  CHECK(ErrorCodeName(ErrorCode::kEmptyVoteSet) == "EmptyVoteSet");
  CHECK(ErrorCodeName(ErrorCode::kInvalidArgument) == "InvalidArgument");
}

TEST_CASE("service config: defaults, json and environment") {
  ServiceConfig c;
  CHECK_NOTHROW(c.Validate());
  ServiceConfig round = ServiceConfig::FromJson(c.ToJson());
  CHECK(round.ToJson() == c.ToJson());

  std::map<std::string, std::string> env = {{"ARENA_PORT", "9001"},
                                            {"ARENA_ANOMALY_ALPHA", "0.01"},
                                            {"ARENA_GENERATOR_ENDPOINT", "http://h:1/gen"}};
  auto lookup = [&](const std::string& k) -> std::optional<std::string> {
    auto it = env.find(k);
    if (it == env.end()) return std::nullopt;
    return it->second;
  };
  ServiceConfig e = LoadServiceConfig(std::nullopt, lookup);
  CHECK(e.port == 9001);
  CHECK(e.anomaly_alpha == doctest::Approx(0.01));
  CHECK(e.providers["generator"]["type"] == "remote");

  env["ARENA_PORT"] = "eighty";
  CHECK_THROWS_AS(LoadServiceConfig(std::nullopt, lookup), Error);
  CHECK_THROWS_AS(ServiceConfig::FromJson({{"anomaly_alpha", 2.0}}), Error);
}

}  // namespace
}  // namespace arena
