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

// Shared vocabulary: votes, battles, models, corpus documents and generated
// responses, plus their canonical line-delimited JSON encoding.

#ifndef ARENA_CORE_DOMAIN_HPP_
#define ARENA_CORE_DOMAIN_HPP_

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/error.hpp"
#include "core/util.hpp"
#include "json.hpp"

namespace arena {

using Json = nlohmann::json;

enum class Discipline { kNaturalScience, kHealthcare, kHumanitiesSocial, kEngineering };

inline constexpr std::array<Discipline, 4> kAllDisciplines = {
    Discipline::kNaturalScience, Discipline::kHealthcare,
    Discipline::kHumanitiesSocial, Discipline::kEngineering};

// Integer codes are the classification prompt's 1..6 numbering.
enum class QuestionCategory : int {
  kConceptualExplanation = 1,
  kMethodologyInquiry = 2,
  kStateOfTheArt = 3,
  kChallengesLimitations = 4,
  kPaperFinding = 5,
  kOthers = 6,
};

enum class Winner { kFirst, kSecond, kTie, kBothBad };

std::string_view ToString(Discipline d);
std::string_view ToString(Winner w);
std::string_view ToString(QuestionCategory c);
std::optional<Discipline> ParseDiscipline(std::string_view text);
std::optional<Winner> ParseWinner(std::string_view text);
std::optional<QuestionCategory> CategoryFromCode(int code);
inline int CategoryCode(QuestionCategory c) { return static_cast<int>(c); }

struct ModelRef {
  std::string id;
  std::string display_name;
  bool active = true;
  Json provider_config = Json::object();

  bool operator==(const ModelRef&) const = default;
};

struct Vote {
  std::string vote_id;
  std::string battle_id;
  std::string user_id;
  Winner winner = Winner::kTie;
  std::optional<std::string> justification;
  Timestamp timestamp{};
  Discipline discipline = Discipline::kNaturalScience;
  std::optional<QuestionCategory> category;

  bool operator==(const Vote&) const = default;
};

struct Battle {
  std::string battle_id;
  std::string question;
  Discipline discipline = Discipline::kNaturalScience;
  std::string model_first;
  std::string model_second;
  std::string response_first;
  std::string response_second;
  Timestamp created_at{};

  bool operator==(const Battle&) const = default;
};

enum class DocumentKind { kAbstract, kSnippet };

struct CorpusDocument {
  std::string doc_id;
  std::string title;
  std::vector<std::string> authors;
  int year = 0;
  DocumentKind kind = DocumentKind::kAbstract;
  std::string text;
  std::string source_paper_id;
  std::optional<std::string> venue;

  bool operator==(const CorpusDocument&) const = default;
};

struct Citation {
  int index = 0;
  std::string doc_id;

  bool operator==(const Citation&) const = default;
};

struct GenerationMetadata {
  double latency_ms = 0.0;
  int prompt_tokens = 0;
  int completion_tokens = 0;

  bool operator==(const GenerationMetadata&) const = default;
};

struct GeneratedResponse {
  std::string response_id;
  std::string model;
  std::string retrieval_id;
  std::string raw_text;
  std::string normalized_text;
  std::vector<Citation> citations;
  std::vector<std::string> reference_list;
  bool dangling_citation = false;
  GenerationMetadata generation_metadata;

  bool operator==(const GeneratedResponse&) const = default;
};

// Conjunction of optional predicates; an empty filter matches every vote.
struct VoteFilter {
  std::optional<Discipline> discipline;
  std::optional<QuestionCategory> category;
  std::optional<std::string> user_id;
  std::optional<Timestamp> from;  // inclusive
  std::optional<Timestamp> to;    // inclusive

  bool Matches(const Vote& vote) const;
  bool IsEmpty() const {
    return !discipline && !category && !user_id && !from && !to;
  }
};

void to_json(Json& j, const ModelRef& m);
void from_json(const Json& j, ModelRef& m);
void to_json(Json& j, const Vote& v);
void from_json(const Json& j, Vote& v);
void to_json(Json& j, const Battle& b);
void from_json(const Json& j, Battle& b);
void to_json(Json& j, const CorpusDocument& d);
void from_json(const Json& j, CorpusDocument& d);
void to_json(Json& j, const GeneratedResponse& r);
void from_json(const Json& j, GeneratedResponse& r);

// Decodes one record, mapping every json exception to ErrorCode::kParse.
template <typename T>
T Decode(const Json& j) {
  try {
    return j.get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

template <typename T>
T DecodeLine(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
  return Decode<T>(j);
}

template <typename T>
std::string EncodeLine(const T& value) {
  return Json(value).dump();
}

// Referential lookups a vote is validated against.
class BattleLookup {
 public:
  virtual ~BattleLookup() = default;
  virtual const Battle* FindBattle(std::string_view battle_id) const = 0;
  virtual bool HasVote(std::string_view user_id,
                       std::string_view battle_id) const = 0;
};

class InMemoryBattles : public BattleLookup {
 public:
  InMemoryBattles() = default;
  explicit InMemoryBattles(const std::vector<Battle>& battles);

  void Add(Battle battle);
  void RecordVote(const Vote& vote);

  const Battle* FindBattle(std::string_view battle_id) const override;
  bool HasVote(std::string_view user_id,
               std::string_view battle_id) const override;

 private:
  std::map<std::string, Battle, std::less<>> battles_;
  std::set<std::pair<std::string, std::string>> votes_;
};

// Throws kUnknownBattle or kDuplicateVote.
const Vote& ValidateVote(const Vote& vote, const BattleLookup& store);

}  // namespace arena

#endif  // ARENA_CORE_DOMAIN_HPP_
