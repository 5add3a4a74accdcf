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

#include "core/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace arena {
namespace {

bool ContainsFolded(std::string_view haystack, std::string_view needle) {
  return ToLower(haystack).find(ToLower(needle)) != std::string::npos;
}

int ParseYear(std::string_view text) {
  int year = 0;
  for (char c : text) {
    if (c < '0' || c > '9') {
      Fail(ErrorCode::kInvalidArgument, "invalid year filter '" + std::string(text) + "'");
    }
    year = year * 10 + (c - '0');
  }
  Require(!text.empty(), "empty year filter");
  return year;
}

// Splits on whitespace, keeping double-quoted spans together.
std::vector<std::string> QueryWords(std::string_view text) {
  std::vector<std::string> words;
  std::string cur;
  bool quoted = false;
  for (char c : text) {
    if (c == '"') {
      quoted = !quoted;
      continue;
    }
    if (!quoted && std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

struct Candidate {
  std::size_t index;
  double score;
};

std::vector<Candidate> TopCandidates(std::vector<Candidate> pool, int cap,
                                     const CorpusIndex& corpus) {
  std::sort(pool.begin(), pool.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return corpus.documents()[a.index].doc_id < corpus.documents()[b.index].doc_id;
  });
  if (static_cast<int>(pool.size()) > cap) pool.resize(std::max(cap, 0));
  return pool;
}

}  // namespace

bool RetrievalFilters::Matches(const CorpusDocument& doc) const {
  if (year_from && doc.year < *year_from) return false;
  if (year_to && doc.year > *year_to) return false;
  if (!authors.empty()) {
    bool any = false;
    for (const auto& want : authors) {
      for (const auto& have : doc.authors) any = any || ContainsFolded(have, want);
    }
    if (!any) return false;
  }
  if (!venues.empty()) {
    if (!doc.venue) return false;
    if (std::none_of(venues.begin(), venues.end(),
                     [&](const std::string& v) { return ContainsFolded(*doc.venue, v); })) {
      return false;
    }
  }
  return true;
}

ParsedQuery ParseQuery(std::string_view question) {
  ParsedQuery parsed;
  std::string text;
  for (const auto& word : QueryWords(question)) {
    const std::string lower = ToLower(word);
    if (lower.starts_with("year:")) {
      const std::string value = word.substr(5);
      const auto dash = value.find('-');
      if (dash == std::string::npos) {
        parsed.filters.year_from = parsed.filters.year_to = ParseYear(value);
      } else {
        parsed.filters.year_from = ParseYear(std::string_view(value).substr(0, dash));
        parsed.filters.year_to = ParseYear(std::string_view(value).substr(dash + 1));
      }
    } else if (lower.starts_with("author:") && word.size() > 7) {
      parsed.filters.authors.push_back(word.substr(7));
    } else if (lower.starts_with("venue:") && word.size() > 6) {
      parsed.filters.venues.push_back(word.substr(6));
    } else {
      if (!text.empty()) text.push_back(' ');
      text += word;
    }
  }
  parsed.text = std::move(text);
  return parsed;
}

CorpusIndex::CorpusIndex(std::vector<CorpusDocument> documents)
    : documents_(std::move(documents)) {
  terms_.reserve(documents_.size());
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    const auto& doc = documents_[i];
    Require(!Trim(doc.text).empty(), "document '" + doc.doc_id + "' has empty text");
    if (!by_id_.emplace(doc.doc_id, i).second) {
      Fail(ErrorCode::kIntegrityViolation, "duplicate document id '" + doc.doc_id + "'");
    }
    auto tokens = ContentTokens(doc.title + " " + doc.text);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (const auto& t : tokens) ++document_frequency_[t];
    terms_.push_back(std::move(tokens));
  }
}

const CorpusDocument* CorpusIndex::Find(std::string_view doc_id) const {
  auto it = by_id_.find(doc_id);
  return it == by_id_.end() ? nullptr : &documents_[it->second];
}

double CorpusIndex::Idf(const std::string& term) const {
  auto it = document_frequency_.find(term);
  const double df = it == document_frequency_.end() ? 0.0 : it->second;
  return std::log((documents_.size() + 1.0) / (df + 1.0)) + 1.0;
}

double CorpusIndex::Score(std::size_t i, const std::vector<std::string>& terms) const {
  const auto& doc_terms = terms_.at(i);
  double score = 0.0;
  for (const auto& t : terms) {
    if (std::binary_search(doc_terms.begin(), doc_terms.end(), t)) score += Idf(t);
  }
  return score;
}

RetrievalResult Retrieve(std::string_view question, const CorpusIndex& corpus,
                         Provider& reranker, const RetrievalFilters& extra,
                         const RetrievalLimits& limits) {
  if (corpus.size() == 0) Fail(ErrorCode::kEmptyCorpus, "the corpus has no documents");
  Require(limits.top_k >= 1 && limits.snippet_candidates >= 0 &&
              limits.abstract_candidates >= 0,
          "invalid retrieval limits");
  ParsedQuery parsed = ParseQuery(question);
  RetrievalResult result;
  result.filters = parsed.filters;
  result.query_decomposition = {parsed.text};

  auto terms = ContentTokens(parsed.text);
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());

  std::vector<Candidate> snippets;
  std::vector<Candidate> abstracts;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& doc = corpus.documents()[i];
    if (!parsed.filters.Matches(doc) || !extra.Matches(doc)) continue;
    const double s = corpus.Score(i, terms);
    if (s <= 0.0) continue;
    (doc.kind == DocumentKind::kSnippet ? snippets : abstracts).push_back({i, s});
  }
  snippets = TopCandidates(std::move(snippets), limits.snippet_candidates, corpus);
  abstracts = TopCandidates(std::move(abstracts), limits.abstract_candidates, corpus);
  result.snippet_candidates = static_cast<int>(snippets.size());
  result.abstract_candidates = static_cast<int>(abstracts.size());

  std::vector<std::size_t> pool;
  for (const auto& c : snippets) pool.push_back(c.index);
  for (const auto& c : abstracts) pool.push_back(c.index);

  if (!pool.empty()) {
    Json request{{"query", parsed.text}, {"documents", Json::array()}};
    for (std::size_t i : pool) {
      const auto& doc = corpus.documents()[i];
      request["documents"].push_back({{"doc_id", doc.doc_id},
                                      {"text", doc.title + " " + doc.text}});
    }
    const Json response = reranker.Call(request);
    const auto scores = response.at("scores").get<std::vector<double>>();
    if (scores.size() != pool.size()) {
      Fail(ErrorCode::kProviderUnavailable, "reranker returned " +
                                                std::to_string(scores.size()) +
                                                " scores for " +
                                                std::to_string(pool.size()) + " documents");
    }
    for (std::size_t k = 0; k < pool.size(); ++k) {
      result.contexts.push_back({corpus.documents()[pool[k]].doc_id, scores[k]});
    }
    std::sort(result.contexts.begin(), result.contexts.end(),
              [](const RetrievedContext& a, const RetrievedContext& b) {
                if (a.score != b.score) return a.score > b.score;
                return a.doc_id < b.doc_id;
              });
    if (static_cast<int>(result.contexts.size()) > limits.top_k) {
      result.contexts.resize(limits.top_k);
    }
  }

  std::string key(question);
  for (const auto& c : result.contexts) key += "\n" + c.doc_id;
  result.retrieval_id = "r-" + Hex64(Fnv1a64(key));
  return result;
}

Json RetrievalToJson(const RetrievalResult& r) {
  Json contexts = Json::array();
  for (const auto& c : r.contexts) contexts.push_back({{"doc_id", c.doc_id}, {"score", c.score}});
  Json filters = Json::object();
  if (r.filters.year_from) filters["year_from"] = *r.filters.year_from;
  if (r.filters.year_to) filters["year_to"] = *r.filters.year_to;
  if (!r.filters.authors.empty()) filters["authors"] = r.filters.authors;
  if (!r.filters.venues.empty()) filters["venues"] = r.filters.venues;
  return {{"retrieval_id", r.retrieval_id},
          {"contexts", contexts},
          {"query_decomposition", r.query_decomposition},
          {"metadata_filters", filters},
          {"snippet_candidates", r.snippet_candidates},
          {"abstract_candidates", r.abstract_candidates}};
}

}  // namespace arena
