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

// Two-pool literature retrieval over a local corpus.
//
// Stage 1 scores every document passing the metadata filters by the summed
// inverse document frequency of the distinct query terms it contains, and
// keeps the best snippet_candidates snippets and abstract_candidates
// abstracts. Stage 2 sends the union to the reranker provider and keeps the
// top_k by reranker score.

#ifndef ARENA_CORE_RETRIEVAL_HPP_
#define ARENA_CORE_RETRIEVAL_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "core/domain.hpp"
#include "core/providers.hpp"

namespace arena {

struct RetrievalFilters {
  std::optional<int> year_from;  // inclusive
  std::optional<int> year_to;    // inclusive
  std::vector<std::string> authors;  // any-of, case-insensitive substring
  std::vector<std::string> venues;   // any-of, case-insensitive substring

  bool IsEmpty() const {
    return !year_from && !year_to && authors.empty() && venues.empty();
  }
  bool Matches(const CorpusDocument& doc) const;
};

struct ParsedQuery {
  std::string text;
  RetrievalFilters filters;
};

// Pulls `year:2024`, `year:2020-2023`, `author:Smith`, `venue:"Nature Methods"`
// out of the question; the rest is the query text.
ParsedQuery ParseQuery(std::string_view question);

class CorpusIndex {
 public:
  CorpusIndex() = default;
  explicit CorpusIndex(std::vector<CorpusDocument> documents);

  const std::vector<CorpusDocument>& documents() const { return documents_; }
  std::size_t size() const { return documents_.size(); }
  const CorpusDocument* Find(std::string_view doc_id) const;

  // Summed idf of the distinct `terms` present in document `i`.
  double Score(std::size_t i, const std::vector<std::string>& terms) const;
  double Idf(const std::string& term) const;

 private:
  std::vector<CorpusDocument> documents_;
  std::vector<std::vector<std::string>> terms_;  // sorted distinct
  std::unordered_map<std::string, int> document_frequency_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
};

struct RetrievedContext {
  std::string doc_id;
  double score = 0.0;

  bool operator==(const RetrievedContext&) const = default;
};

struct RetrievalResult {
  std::string retrieval_id;
  std::vector<RetrievedContext> contexts;  // scores non-increasing
  std::vector<std::string> query_decomposition;
  RetrievalFilters filters;
  int snippet_candidates = 0;
  int abstract_candidates = 0;
};

struct RetrievalLimits {
  int snippet_candidates = 40;
  int abstract_candidates = 20;
  int top_k = 30;
};

// Throws kEmptyCorpus on an empty index. Filters parsed from the question are
// combined with `extra` (both must pass).
RetrievalResult Retrieve(std::string_view question, const CorpusIndex& corpus,
                         Provider& reranker, const RetrievalFilters& extra = {},
                         const RetrievalLimits& limits = {});

Json RetrievalToJson(const RetrievalResult& r);

}  // namespace arena

#endif  // ARENA_CORE_RETRIEVAL_HPP_
