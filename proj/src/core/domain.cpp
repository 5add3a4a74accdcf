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

#include "core/domain.hpp"

namespace arena {
namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> Lookup(const std::pair<Enum, std::string_view> (&table)[N],
                           std::string_view text) {
  for (const auto& [value, name] : table) {
    if (name == text) return value;
  }
  return std::nullopt;
}

template <typename Enum, std::size_t N>
std::string_view Name(const std::pair<Enum, std::string_view> (&table)[N],
                      Enum value) {
  for (const auto& [v, name] : table) {
    if (v == value) return name;
  }
  return "unknown";
}

constexpr std::pair<Discipline, std::string_view> kDisciplineNames[] = {
    {Discipline::kNaturalScience, "natural_science"},
    {Discipline::kHealthcare, "healthcare"},
    {Discipline::kHumanitiesSocial, "humanities_social"},
    {Discipline::kEngineering, "engineering"},
};

constexpr std::pair<Winner, std::string_view> kWinnerNames[] = {
    {Winner::kFirst, "first"},
    {Winner::kSecond, "second"},
    {Winner::kTie, "tie"},
    {Winner::kBothBad, "both_bad"},
};

constexpr std::pair<QuestionCategory, std::string_view> kCategoryNames[] = {
    {QuestionCategory::kConceptualExplanation, "conceptual_explanation"},
    {QuestionCategory::kMethodologyInquiry, "methodology_inquiry"},
    {QuestionCategory::kStateOfTheArt, "state_of_the_art"},
    {QuestionCategory::kChallengesLimitations, "challenges_limitations"},
    {QuestionCategory::kPaperFinding, "paper_finding"},
    {QuestionCategory::kOthers, "others"},
};

Discipline DisciplineField(const Json& j, const char* key) {
  auto text = j.at(key).get<std::string>();
  auto d = ParseDiscipline(text);
  if (!d) Fail(ErrorCode::kParse, "unknown discipline '" + text + "'");
  return *d;
}

Timestamp TimeField(const Json& j, const char* key) {
  return ParseTimestamp(j.at(key).get<std::string>());
}

}  // namespace

std::string_view ToString(Discipline d) { return Name(kDisciplineNames, d); }
std::string_view ToString(Winner w) { return Name(kWinnerNames, w); }
std::string_view ToString(QuestionCategory c) { return Name(kCategoryNames, c); }

std::optional<Discipline> ParseDiscipline(std::string_view text) {
  return Lookup(kDisciplineNames, text);
}

std::optional<Winner> ParseWinner(std::string_view text) {
  return Lookup(kWinnerNames, text);
}

std::optional<QuestionCategory> CategoryFromCode(int code) {
  if (code < 1 || code > 6) return std::nullopt;
  return static_cast<QuestionCategory>(code);
}

void to_json(Json& j, const ModelRef& m) {
  j = Json{{"id", m.id},
           {"display_name", m.display_name},
           {"active", m.active},
           {"provider_config", m.provider_config}};
}

void from_json(const Json& j, ModelRef& m) {
  m.id = j.at("id").get<std::string>();
  if (m.id.empty()) Fail(ErrorCode::kParse, "model id must be nonempty");
  m.display_name = j.value("display_name", m.id);
  m.active = j.value("active", true);
  m.provider_config = j.value("provider_config", Json::object());
  if (!m.provider_config.is_object()) {
    Fail(ErrorCode::kParse, "provider_config must be an object");
  }
}

void to_json(Json& j, const Vote& v) {
  j = Json{{"vote_id", v.vote_id},
           {"battle_id", v.battle_id},
           {"user_id", v.user_id},
           {"winner", ToString(v.winner)},
           {"timestamp", FormatTimestamp(v.timestamp)},
           {"discipline", ToString(v.discipline)}};
  if (v.justification) j["justification"] = *v.justification;
  if (v.category) j["category"] = CategoryCode(*v.category);
}

void from_json(const Json& j, Vote& v) {
  v.vote_id = j.at("vote_id").get<std::string>();
  v.battle_id = j.at("battle_id").get<std::string>();
  v.user_id = j.at("user_id").get<std::string>();
  auto winner = j.at("winner").get<std::string>();
  auto w = ParseWinner(winner);
  if (!w) Fail(ErrorCode::kParse, "unknown winner '" + winner + "'");
  v.winner = *w;
  v.timestamp = TimeField(j, "timestamp");
  v.discipline = DisciplineField(j, "discipline");
  v.justification.reset();
  if (auto it = j.find("justification"); it != j.end() && !it->is_null()) {
    v.justification = it->get<std::string>();
  }
  v.category.reset();
  if (auto it = j.find("category"); it != j.end() && !it->is_null()) {
    auto c = CategoryFromCode(it->get<int>());
    if (!c) Fail(ErrorCode::kParse, "category code out of range 1..6");
    v.category = c;
  }
}

void to_json(Json& j, const Battle& b) {
  j = Json{{"battle_id", b.battle_id},
           {"question", b.question},
           {"discipline", ToString(b.discipline)},
           {"model_first", b.model_first},
           {"model_second", b.model_second},
           {"response_first", b.response_first},
           {"response_second", b.response_second},
           {"created_at", FormatTimestamp(b.created_at)}};
}

void from_json(const Json& j, Battle& b) {
  b.battle_id = j.at("battle_id").get<std::string>();
  b.question = j.at("question").get<std::string>();
  b.discipline = DisciplineField(j, "discipline");
  b.model_first = j.at("model_first").get<std::string>();
  b.model_second = j.at("model_second").get<std::string>();
  if (b.model_first == b.model_second) {
    Fail(ErrorCode::kParse, "battle " + b.battle_id + " pits a model against itself");
  }
  b.response_first = j.at("response_first").get<std::string>();
  b.response_second = j.at("response_second").get<std::string>();
  b.created_at = TimeField(j, "created_at");
}

void to_json(Json& j, const CorpusDocument& d) {
  j = Json{{"doc_id", d.doc_id},
           {"title", d.title},
           {"authors", d.authors},
           {"year", d.year},
           {"kind", d.kind == DocumentKind::kAbstract ? "abstract" : "snippet"},
           {"text", d.text},
           {"source_paper_id", d.source_paper_id}};
  if (d.venue) j["venue"] = *d.venue;
}

void from_json(const Json& j, CorpusDocument& d) {
  d.doc_id = j.at("doc_id").get<std::string>();
  d.title = j.at("title").get<std::string>();
  d.authors = j.value("authors", std::vector<std::string>{});
  d.year = j.value("year", 0);
  auto kind = j.at("kind").get<std::string>();
  if (kind == "abstract") {
    d.kind = DocumentKind::kAbstract;
  } else if (kind == "snippet") {
    d.kind = DocumentKind::kSnippet;
  } else {
    Fail(ErrorCode::kParse, "unknown document kind '" + kind + "'");
  }
  d.text = j.at("text").get<std::string>();
  if (Trim(d.text).empty()) {
    Fail(ErrorCode::kParse, "document " + d.doc_id + " has empty text");
  }
  d.source_paper_id = j.value("source_paper_id", d.doc_id);
  d.venue.reset();
  if (auto it = j.find("venue"); it != j.end() && !it->is_null()) {
    d.venue = it->get<std::string>();
  }
}

void to_json(Json& j, const GeneratedResponse& r) {
  Json citations = Json::array();
  for (const auto& c : r.citations) {
    citations.push_back(Json{{"index", c.index}, {"doc_id", c.doc_id}});
  }
  j = Json{{"response_id", r.response_id},
           {"model", r.model},
           {"retrieval_id", r.retrieval_id},
           {"raw_text", r.raw_text},
           {"normalized_text", r.normalized_text},
           {"citations", std::move(citations)},
           {"reference_list", r.reference_list},
           {"dangling_citation", r.dangling_citation},
           {"generation_metadata",
            Json{{"latency_ms", r.generation_metadata.latency_ms},
                 {"prompt_tokens", r.generation_metadata.prompt_tokens},
                 {"completion_tokens", r.generation_metadata.completion_tokens}}}};
}

void from_json(const Json& j, GeneratedResponse& r) {
  r.response_id = j.at("response_id").get<std::string>();
  r.model = j.at("model").get<std::string>();
  r.retrieval_id = j.value("retrieval_id", "");
  r.raw_text = j.at("raw_text").get<std::string>();
  r.normalized_text = j.value("normalized_text", "");
  r.citations.clear();
  for (const auto& c : j.value("citations", Json::array())) {
    r.citations.push_back(
        {c.at("index").get<int>(), c.at("doc_id").get<std::string>()});
  }
  r.reference_list = j.value("reference_list", std::vector<std::string>{});
  r.dangling_citation = j.value("dangling_citation", false);
  const auto meta = j.value("generation_metadata", Json::object());
  r.generation_metadata.latency_ms = meta.value("latency_ms", 0.0);
  r.generation_metadata.prompt_tokens = meta.value("prompt_tokens", 0);
  r.generation_metadata.completion_tokens = meta.value("completion_tokens", 0);
}

bool VoteFilter::Matches(const Vote& vote) const {
  if (discipline && vote.discipline != *discipline) return false;
  if (category && vote.category != category) return false;
  if (user_id && vote.user_id != *user_id) return false;
  if (from && vote.timestamp < *from) return false;
  if (to && vote.timestamp > *to) return false;
  return true;
}

InMemoryBattles::InMemoryBattles(const std::vector<Battle>& battles) {
  for (const auto& b : battles) Add(b);
}

void InMemoryBattles::Add(Battle battle) {
  auto id = battle.battle_id;
  battles_.insert_or_assign(std::move(id), std::move(battle));
}

void InMemoryBattles::RecordVote(const Vote& vote) {
  votes_.emplace(vote.user_id, vote.battle_id);
}

const Battle* InMemoryBattles::FindBattle(std::string_view battle_id) const {
  auto it = battles_.find(battle_id);
  return it == battles_.end() ? nullptr : &it->second;
}

bool InMemoryBattles::HasVote(std::string_view user_id,
                              std::string_view battle_id) const {
  return votes_.contains({std::string(user_id), std::string(battle_id)});
}

const Vote& ValidateVote(const Vote& vote, const BattleLookup& store) {
  if (store.FindBattle(vote.battle_id) == nullptr) {
    Fail(ErrorCode::kUnknownBattle, "unknown battle '" + vote.battle_id + "'");
  }
  if (store.HasVote(vote.user_id, vote.battle_id)) {
    Fail(ErrorCode::kDuplicateVote, "user '" + vote.user_id +
                                        "' already voted on battle '" +
                                        vote.battle_id + "'");
  }
  return vote;
}

}  // namespace arena
