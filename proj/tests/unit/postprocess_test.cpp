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

#include "core/postprocess.hpp"
#include "support/test_support.hpp"

namespace arena {
namespace {

TEST_CASE("citation relocation cases") {
  for (const auto& c : testing::ReadJsonLines(testing::FixturePath("postprocess_cases.jsonl"))) {
    const std::string input = c["input"];
    const std::string expected = c["expected"];
    CAPTURE(input);
    CHECK(NormalizeResponseText(input) == expected);
  }
}

TEST_CASE("normalization is idempotent over the fixture corpus") {
  std::vector<std::string> texts;
  for (const auto& c : testing::ReadJsonLines(testing::FixturePath("postprocess_cases.jsonl"))) {
    texts.push_back(c["input"]);
  }
  for (const auto& c : testing::ReadJsonLines(testing::FixturePath("postprocess_corpus.jsonl"))) {
    texts.push_back(c["text"]);
  }
  for (const auto& c : testing::ReadJsonLines(testing::FixturePath("citation_counts.jsonl"))) {
    texts.push_back(c["text"]);
  }
  REQUIRE(texts.size() >= 40);
  for (const auto& t : texts) {
    CAPTURE(t);
    const std::string once = NormalizeResponseText(t);
    CHECK(NormalizeResponseText(once) == once);
  }
}

TEST_CASE("markdown is stripped") {
  CHECK(StripMarkdown("**bold** and *em* and `code`") == "bold and em and code");
  CHECK(StripMarkdown("# Title") == "Title");
}

TEST_CASE("thought blocks are removed") {
  CHECK(Trim(StripThoughts("<think>hidden</think>Answer [1].")) == "Answer [1].");
}

TEST_CASE("citation indices are extracted in order of appearance") {
  CHECK(ExtractCitationIndices("a [2] b [1, 3] c [2]") == std::vector<int>{2, 1, 3, 2});
  CHECK(ExtractCitationIndices("no refs").empty());
}

TEST_CASE("sentence splitting keeps citations with their sentence") {
  auto parts = SplitSentenceTexts("First claim [1]. Second claim [2].");
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].find("[1]") != std::string::npos);
  CHECK(parts[1].find("[2]") != std::string::npos);
}

TEST_CASE("postprocessing flags citations beyond the reference list") {
  GeneratedResponse raw;
  raw.response_id = "r1";
  raw.raw_text = "Claim one [1]. Claim two [3].";
  raw.citations = {{1, "d1"}, {2, "d2"}};
  raw.reference_list = {"d1", "d2"};
  auto out = PostprocessResponse(raw);
  CHECK(out.dangling_citation);
  raw.raw_text = "Claim one [1]. Claim two [2].";
  out = PostprocessResponse(raw);
  CHECK_FALSE(out.dangling_citation);
  CHECK(out.normalized_text == "Claim one [1]. Claim two [2].");
}

}  // namespace
}  // namespace arena
