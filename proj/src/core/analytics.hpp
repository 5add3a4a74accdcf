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

// Response style features, question categories, win rates and agreement.

#ifndef ARENA_CORE_ANALYTICS_HPP_
#define ARENA_CORE_ANALYTICS_HPP_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/domain.hpp"
#include "core/providers.hpp"
#include "core/retrieval.hpp"

namespace arena {

struct StyleFeatures {
  int length_tokens = 0;
  int citation_count = 0;
  int supporting_count = 0;
  int conflicting_count = 0;  // irrelevant + contradicting

  bool operator==(const StyleFeatures&) const = default;
};

// Order of the entries of every style vector.
inline constexpr std::array<std::string_view, 4> kStyleFeatureNames = {
    "length", "citation_count", "supporting_count", "conflicting_count"};

enum class AttributionLabel { kSupporting, kIrrelevant, kContradicting };

std::string_view ToString(AttributionLabel label);
// Leading label word, case-insensitive; anything else reads as irrelevant.
AttributionLabel ParseAttributionReply(std::string_view reply);

// Bracket-citation occurrences; "[1, 2]" counts two.
int CountCitations(std::string_view normalized_text);

// Sentences of `text` citing `index`, joined by spaces.
std::string ClaimForCitation(std::string_view text, int index);

AttributionLabel ClassifyAttribution(Provider& classifier, std::string_view claim,
                                     std::string_view authors, std::string_view content);

// "Smith et al." / "Smith and Lee" / "Smith".
std::string ConciseAuthors(const std::vector<std::string>& authors);

// Length and citation count from the normalized text. With a corpus and a
// classifier, each in-range citation occurrence is also labeled.
StyleFeatures ComputeStyleFeatures(const GeneratedResponse& response,
                                   const CorpusIndex* corpus = nullptr,
                                   Provider* classifier = nullptr);

// (f_first - f_second) / (f_first + f_second + 1) per feature.
std::vector<double> StyleContrast(const StyleFeatures& first, const StyleFeatures& second);

QuestionCategory ParseCategoryReply(std::string_view reply);
QuestionCategory ClassifyCategory(Provider& classifier, std::string_view question);

struct WinRateMatrix {
  std::vector<std::string> models;
  std::vector<std::vector<int>> wins;      // wins[i][j]: i beat j
  std::vector<std::vector<int>> decisive;  // symmetric
  std::optional<double> Rate(std::size_t i, std::size_t j) const;
};

// Ties and both-bad votes are left out of every denominator.
WinRateMatrix ComputeWinRates(std::span<const Vote> votes, const BattleLookup& battles);
Json WinRatesToJson(const WinRateMatrix& m);

enum class KappaWeights { kLinear, kQuadratic };

struct AgreementSample {
  std::string item_id;
  int label_a = 0;
  int label_b = 0;
};

// Ordinal label of a vote from the first response's side: win 2, tie 1,
// both-bad and loss 0.
int OrdinalLabel(Winner winner);

// Categories are the sorted distinct labels; disagreement weight |i - j| or
// (i - j)^2 on their ranks. Throws kInvalidArgument with fewer than two
// samples or fewer than two distinct labels.
double WeightedKappa(std::span<const AgreementSample> samples, KappaWeights weights);

std::map<QuestionCategory, int> CategoryHistogram(std::span<const QuestionCategory> labels);

std::string RenderWinRateSvg(const WinRateMatrix& m);
std::string RenderCategorySvg(const std::map<QuestionCategory, int>& histogram);

}  // namespace arena

#endif  // ARENA_CORE_ANALYTICS_HPP_
