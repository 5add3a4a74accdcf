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

#include "core/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "core/postprocess.hpp"

namespace arena {
namespace {

std::string XmlEscape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string_view ToString(AttributionLabel label) {
  switch (label) {
    case AttributionLabel::kSupporting: return "supporting";
    case AttributionLabel::kIrrelevant: return "irrelevant";
    case AttributionLabel::kContradicting: return "contradicting";
  }
  return "irrelevant";
}

AttributionLabel ParseAttributionReply(std::string_view reply) {
  const auto tokens = Tokenize(reply);
  if (!tokens.empty()) {
    if (tokens.front() == "supporting") return AttributionLabel::kSupporting;
    if (tokens.front() == "contradicting") return AttributionLabel::kContradicting;
  }
  return AttributionLabel::kIrrelevant;
}

int CountCitations(std::string_view normalized_text) {
  return static_cast<int>(ExtractCitationIndices(normalized_text).size());
}

std::string ClaimForCitation(std::string_view text, int index) {
  std::string claim;
  for (const auto& sentence : SplitSentenceTexts(text)) {
    const auto cited = ExtractCitationIndices(sentence);
    if (std::find(cited.begin(), cited.end(), index) == cited.end()) continue;
    if (!claim.empty()) claim.push_back(' ');
    claim += sentence;
  }
  return claim;
}

AttributionLabel ClassifyAttribution(Provider& classifier, std::string_view claim,
                                     std::string_view authors, std::string_view content) {
  Require(!Trim(claim).empty() && !Trim(content).empty(),
          "attribution needs a nonempty claim and citation content");
  const Prompt prompt = AttributionPrompt(claim, authors, content);
  const Json reply = classifier.Call({{"task", "attribution"},
                                      {"system", prompt.system},
                                      {"prompt", prompt.user},
                                      {"claim", std::string(claim)},
                                      {"authors", std::string(authors)},
                                      {"content", std::string(content)}});
  return ParseAttributionReply(reply.value("text", std::string()));
}

std::string ConciseAuthors(const std::vector<std::string>& authors) {
  auto surname = [](const std::string& name) {
    const std::string t(Trim(name));
    const auto space = t.rfind(' ');
    return space == std::string::npos ? t : t.substr(space + 1);
  };
  if (authors.empty()) return "Unknown";
  if (authors.size() == 1) return surname(authors[0]);
  if (authors.size() == 2) return surname(authors[0]) + " and " + surname(authors[1]);
  return surname(authors[0]) + " et al.";
}

StyleFeatures ComputeStyleFeatures(const GeneratedResponse& response,
                                   const CorpusIndex* corpus, Provider* classifier) {
  StyleFeatures f;
  const std::string& text = response.normalized_text;
  f.length_tokens = static_cast<int>(CountWhitespaceTokens(text));
  const auto indices = ExtractCitationIndices(text);
  f.citation_count = static_cast<int>(indices.size());
  if (corpus == nullptr || classifier == nullptr) return f;

  std::map<int, AttributionLabel> labels;
  for (int index : indices) {
    if (index < 1 || index > static_cast<int>(response.reference_list.size())) continue;
    auto it = labels.find(index);
    if (it == labels.end()) {
      const CorpusDocument* doc = corpus->Find(response.reference_list[index - 1]);
      if (doc == nullptr) continue;
      const AttributionLabel label = ClassifyAttribution(
          *classifier, ClaimForCitation(text, index), ConciseAuthors(doc->authors), doc->text);
      it = labels.emplace(index, label).first;
    }
    if (it->second == AttributionLabel::kSupporting) {
      ++f.supporting_count;
    } else {
      ++f.conflicting_count;
    }
  }
  return f;
}

std::vector<double> StyleContrast(const StyleFeatures& first, const StyleFeatures& second) {
  auto contrast = [](double a, double b) { return (a - b) / (a + b + 1.0); };
  return {contrast(first.length_tokens, second.length_tokens),
          contrast(first.citation_count, second.citation_count),
          contrast(first.supporting_count, second.supporting_count),
          contrast(first.conflicting_count, second.conflicting_count)};
}

QuestionCategory ParseCategoryReply(std::string_view reply) {
  const std::string_view t = Trim(reply);
  std::size_t k = 0;
  while (k < t.size() && std::isdigit(static_cast<unsigned char>(t[k]))) ++k;
  if (k == 0 || k > 2) return QuestionCategory::kOthers;
  return CategoryFromCode(std::stoi(std::string(t.substr(0, k))))
      .value_or(QuestionCategory::kOthers);
}

QuestionCategory ClassifyCategory(Provider& classifier, std::string_view question) {
  Require(!Trim(question).empty(), "question is empty");
  const Prompt prompt = CategoryPrompt(question);
  const Json reply = classifier.Call({{"task", "category"},
                                      {"system", prompt.system},
                                      {"prompt", prompt.user},
                                      {"question", std::string(question)}});
  return ParseCategoryReply(reply.value("text", std::string()));
}

std::optional<double> WinRateMatrix::Rate(std::size_t i, std::size_t j) const {
  if (i == j || decisive[i][j] == 0) return std::nullopt;
  return static_cast<double>(wins[i][j]) / decisive[i][j];
}

WinRateMatrix ComputeWinRates(std::span<const Vote> votes, const BattleLookup& battles) {
  WinRateMatrix m;
  std::set<std::string> ids;
  for (const auto& v : votes) {
    const Battle* b = battles.FindBattle(v.battle_id);
    if (b == nullptr) Fail(ErrorCode::kUnknownBattle, "unknown battle '" + v.battle_id + "'");
    ids.insert(b->model_first);
    ids.insert(b->model_second);
  }
  m.models.assign(ids.begin(), ids.end());
  const std::size_t n = m.models.size();
  m.wins.assign(n, std::vector<int>(n, 0));
  m.decisive.assign(n, std::vector<int>(n, 0));
  auto col = [&](const std::string& id) {
    return static_cast<std::size_t>(
        std::lower_bound(m.models.begin(), m.models.end(), id) - m.models.begin());
  };
  for (const auto& v : votes) {
    if (v.winner != Winner::kFirst && v.winner != Winner::kSecond) continue;
    const Battle* b = battles.FindBattle(v.battle_id);
    const std::size_t i = col(b->model_first);
    const std::size_t j = col(b->model_second);
    ++m.decisive[i][j];
    ++m.decisive[j][i];
    if (v.winner == Winner::kFirst) {
      ++m.wins[i][j];
    } else {
      ++m.wins[j][i];
    }
  }
  return m;
}

Json WinRatesToJson(const WinRateMatrix& m) {
  Json rates = Json::array();
  for (std::size_t i = 0; i < m.models.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.models.size(); ++j) {
      auto r = m.Rate(i, j);
      row.push_back(r ? Json(*r) : Json(nullptr));
    }
    rates.push_back(row);
  }
  return {{"models", m.models}, {"win_rate", rates}, {"decisive", m.decisive}};
}

int OrdinalLabel(Winner winner) {
  switch (winner) {
    case Winner::kFirst: return 2;
    case Winner::kTie: return 1;
    case Winner::kBothBad:
    case Winner::kSecond: return 0;
  }
  return 0;
}

double WeightedKappa(std::span<const AgreementSample> samples, KappaWeights weights) {
  Require(samples.size() >= 2, "weighted kappa needs at least two samples");
  std::set<int> labels;
  for (const auto& s : samples) {
    labels.insert(s.label_a);
    labels.insert(s.label_b);
  }
  Require(labels.size() >= 2, "degenerate labels: kappa is undefined for a single label");
  const std::vector<int> ordered(labels.begin(), labels.end());
  const std::size_t k = ordered.size();
  auto rank = [&](int label) {
    return static_cast<std::size_t>(
        std::lower_bound(ordered.begin(), ordered.end(), label) - ordered.begin());
  };
  std::vector<double> observed(k * k, 0.0);
  std::vector<double> row(k, 0.0);
  std::vector<double> col(k, 0.0);
  const double n = static_cast<double>(samples.size());
  for (const auto& s : samples) {
    const std::size_t a = rank(s.label_a);
    const std::size_t b = rank(s.label_b);
    observed[a * k + b] += 1.0 / n;
    row[a] += 1.0 / n;
    col[b] += 1.0 / n;
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double d = std::abs(static_cast<double>(i) - static_cast<double>(j));
      const double w = weights == KappaWeights::kLinear ? d : d * d;
      num += w * observed[i * k + j];
      den += w * row[i] * col[j];
    }
  }
  Require(den > 0.0, "degenerate labels: no chance disagreement");
  return 1.0 - num / den;
}

std::map<QuestionCategory, int> CategoryHistogram(std::span<const QuestionCategory> labels) {
  std::map<QuestionCategory, int> h;
  for (int code = 1; code <= 6; ++code) h[*CategoryFromCode(code)] = 0;
  for (auto c : labels) ++h[c];
  return h;
}

std::string RenderWinRateSvg(const WinRateMatrix& m) {
  constexpr int kCell = 56;
  constexpr int kMargin = 140;
  const int n = static_cast<int>(m.models.size());
  const int size = kMargin + n * kCell + 10;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\""
      << size << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i < n; ++i) {
    svg << "<text x=\"" << kMargin - 6 << "\" y=\"" << kMargin + i * kCell + kCell / 2 + 4
        << "\" text-anchor=\"end\">" << XmlEscape(m.models[i]) << "</text>\n";
    svg << "<text transform=\"translate(" << kMargin + i * kCell + kCell / 2 + 4 << ","
        << kMargin - 6 << ") rotate(-60)\">" << XmlEscape(m.models[i]) << "</text>\n";
    for (int j = 0; j < n; ++j) {
      const auto r = m.Rate(i, j);
      const int x = kMargin + j * kCell;
      const int y = kMargin + i * kCell;
      std::string fill = "#eeeeee";
      if (r) {
        const int red = static_cast<int>(std::lround(255 * (1.0 - *r)));
        const int blue = static_cast<int>(std::lround(255 * *r));
        std::ostringstream c;
        c << "rgb(" << red << ",96," << blue << ")";
        fill = c.str();
      }
      svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell << "\" height=\""
          << kCell << "\" fill=\"" << fill << "\" stroke=\"white\"/>\n";
      if (r) {
        svg.precision(2);
        svg << "<text x=\"" << x + kCell / 2 << "\" y=\"" << y + kCell / 2 + 4
            << "\" text-anchor=\"middle\" fill=\"white\">" << std::fixed << *r
            << "</text>\n";
        svg.unsetf(std::ios::fixed);
      }
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string RenderCategorySvg(const std::map<QuestionCategory, int>& histogram) {
  constexpr int kBar = 28;
  constexpr int kLabel = 200;
  constexpr int kWidth = 320;
  int max_count = 1;
  for (const auto& [_, c] : histogram) max_count = std::max(max_count, c);
  const int height = static_cast<int>(histogram.size()) * (kBar + 8) + 16;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kLabel + kWidth + 60
      << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  int y = 8;
  for (const auto& [category, count] : histogram) {
    const int w = count * kWidth / max_count;
    svg << "<text x=\"" << kLabel - 6 << "\" y=\"" << y + kBar / 2 + 4
        << "\" text-anchor=\"end\">" << XmlEscape(ToString(category)) << "</text>\n"
        << "<rect x=\"" << kLabel << "\" y=\"" << y << "\" width=\"" << w << "\" height=\""
        << kBar << "\" fill=\"#4a78b5\"/>\n"
        << "<text x=\"" << kLabel + w + 6 << "\" y=\"" << y + kBar / 2 + 4 << "\">" << count
        << "</text>\n";
    y += kBar + 8;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace arena
