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

#include "core/postprocess.hpp"

#include <cctype>
#include <regex>
#include <set>
#include <sstream>

namespace arena {
namespace {

const std::regex& CitationGroup() {
  static const std::regex re(R"(\[\s*\d+(?:\s*,\s*\d+)*\s*\])");
  return re;
}

bool IsHorizontalSpace(char c) { return c == ' ' || c == '\t'; }

std::vector<std::string> SplitLines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (true) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

std::string JoinLines(const std::vector<std::string>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out.push_back('\n');
    out += lines[i];
  }
  return out;
}

std::string ReplaceToFixedPoint(std::string text,
                                const std::vector<std::pair<std::regex, std::string>>& rules) {
  for (int pass = 0; pass < 8; ++pass) {
    std::string before = text;
    for (const auto& [re, fmt] : rules) text = std::regex_replace(text, re, fmt);
    if (text == before) break;
  }
  return text;
}

bool IsAbbreviationBefore(const std::string& line, std::size_t dot) {
  static const std::set<std::string, std::less<>> kAbbrev = {
      "al", "e.g", "i.e", "fig", "figs", "eq", "eqs", "dr", "mr", "mrs", "ms",
      "prof", "vs", "cf", "approx", "no", "vol", "pp", "jr", "sr", "ca", "resp", "ref", "refs"};
  std::size_t b = dot;
  while (b > 0 && (std::isalpha(static_cast<unsigned char>(line[b - 1])) ||
                   line[b - 1] == '.')) {
    --b;
  }
  if (b == dot) return false;
  std::string word = line.substr(b, dot - b);
  if (word.size() == 1 && std::isupper(static_cast<unsigned char>(word[0]))) {
    return true;
  }
  return kAbbrev.contains(ToLower(word));
}

struct Segment {
  std::string body;      // sentence text without its terminal mark
  std::string terminal;  // "." "!" "?" or empty at end of line
  std::string spacing;   // whitespace following the sentence
  std::vector<std::string> moved_in;
};

std::vector<Segment> SplitSentences(const std::string& line) {
  std::vector<Segment> out;
  std::size_t start = 0;
  const std::size_t n = line.size();
  for (std::size_t i = 0; i < n; ++i) {
    const char c = line[i];
    if (c != '.' && c != '!' && c != '?') continue;
    if (i + 1 < n && !std::isspace(static_cast<unsigned char>(line[i + 1]))) continue;
    if (c == '.' && IsAbbreviationBefore(line, i)) continue;
    Segment seg;
    seg.body = line.substr(start, i - start);
    seg.terminal = std::string(1, c);
    std::size_t j = i + 1;
    while (j < n && std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    seg.spacing = line.substr(i + 1, j - i - 1);
    out.push_back(std::move(seg));
    start = j;
    i = j - 1;
  }
  if (start < n) {
    Segment seg;
    seg.body = line.substr(start);
    out.push_back(std::move(seg));
  }
  return out;
}

// Removes citation groups at the start of `body`; returns them.
std::vector<std::string> PeelLeadingGroups(std::string& body) {
  std::vector<std::string> groups;
  std::string rest = body;
  std::smatch m;
  while (std::regex_search(rest, m, CitationGroup()) && m.position(0) == 0) {
    groups.push_back(m.str(0));
    std::size_t k = static_cast<std::size_t>(m.length(0));
    while (k < rest.size() && IsHorizontalSpace(rest[k])) ++k;
    rest.erase(0, k);
  }
  if (!groups.empty() && !Trim(rest).empty()) {
    body = rest;
    return groups;
  }
  return {};
}

std::string RebuildSentence(const Segment& seg) {
  std::vector<std::string> groups;
  std::string core;
  std::size_t pos = 0;
  for (auto it = std::sregex_iterator(seg.body.begin(), seg.body.end(), CitationGroup());
       it != std::sregex_iterator(); ++it) {
    const auto start = static_cast<std::size_t>(it->position(0));
    std::string chunk = seg.body.substr(pos, start - pos);
    while (!chunk.empty() && IsHorizontalSpace(chunk.back())) chunk.pop_back();
    core += chunk;
    groups.push_back(it->str(0));
    pos = start + static_cast<std::size_t>(it->length(0));
    if (core.empty()) {
      while (pos < seg.body.size() && IsHorizontalSpace(seg.body[pos])) ++pos;
    }
  }
  groups.insert(groups.end(), seg.moved_in.begin(), seg.moved_in.end());
  if (groups.empty()) return seg.body + seg.terminal;
  core += seg.body.substr(pos);
  while (!core.empty() && IsHorizontalSpace(core.back())) core.pop_back();
  std::string out = core;
  if (!out.empty()) out.push_back(' ');
  for (const auto& g : groups) out += g;
  return out + seg.terminal;
}

std::string RelocateLine(const std::string& line) {
  auto segments = SplitSentences(line);
  for (std::size_t k = 1; k < segments.size(); ++k) {
    if (segments[k - 1].terminal.empty()) continue;
    auto peeled = PeelLeadingGroups(segments[k].body);
    segments[k - 1].moved_in.insert(segments[k - 1].moved_in.end(), peeled.begin(),
                                    peeled.end());
  }
  std::string out;
  for (const auto& seg : segments) out += RebuildSentence(seg) + seg.spacing;
  return out;
}

}  // namespace

std::string StripMarkdown(std::string_view text) {
  static const std::vector<std::pair<std::regex, std::string>> kLineRules = {
      {std::regex(R"(^\s*([-*_])(\s*\1){2,}\s*$)"), ""},
      {std::regex(R"(^\s{0,3}#{1,6}\s+)"), ""},
      {std::regex(R"(^\s*>\s?)"), ""},
      {std::regex(R"(^\s*[-*+]\s+)"), ""},
      {std::regex(R"(^\s*\d+[.)]\s+)"), ""},
  };
  static const std::vector<std::pair<std::regex, std::string>> kInlineRules = {
      {std::regex(R"(!\[([^\]\n]*)\]\([^)\n]*\))"), "$1"},
      {std::regex(R"(\[([^\]\n]*[A-Za-z][^\]\n]*)\]\([^)\n]*\))"), "$1"},
      {std::regex(R"(\*\*(\S(?:[^*\n]*?\S)?)\*\*)"), "$1"},
      {std::regex(R"(__(\S(?:[^_\n]*?\S)?)__)"), "$1"},
      {std::regex(R"((^|[^\w*])\*(\S(?:[^*\n]*?\S)?)\*(?![\w*]))"), "$1$2"},
      {std::regex(R"((^|[^\w_])_(\S(?:[^_\n]*?\S)?)_(?!\w))"), "$1$2"},
      {std::regex(R"(`([^`\n]+)`)"), "$1"},
  };
  auto lines = SplitLines(text);
  for (auto& line : lines) {
    line = ReplaceToFixedPoint(line, kLineRules);
    line = ReplaceToFixedPoint(line, kInlineRules);
  }
  return JoinLines(lines);
}

std::string RelocateCitations(std::string_view text) {
  auto lines = SplitLines(text);
  for (auto& line : lines) line = RelocateLine(line);
  return JoinLines(lines);
}

std::string NormalizeResponseText(std::string_view text) {
  return RelocateCitations(StripMarkdown(text));
}

std::vector<std::string> SplitSentenceTexts(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& line : SplitLines(text)) {
    for (const auto& seg : SplitSentences(line)) {
      std::string sentence(Trim(seg.body + seg.terminal));
      if (!sentence.empty()) out.push_back(std::move(sentence));
    }
  }
  return out;
}

std::vector<int> ExtractCitationIndices(std::string_view text) {
  std::vector<int> out;
  std::string owned(text);
  static const std::regex kNumber(R"(\d+)");
  for (auto it = std::sregex_iterator(owned.begin(), owned.end(), CitationGroup());
       it != std::sregex_iterator(); ++it) {
    const std::string group = it->str(0);
    for (auto n = std::sregex_iterator(group.begin(), group.end(), kNumber);
         n != std::sregex_iterator(); ++n) {
      out.push_back(std::stoi(n->str(0)));
    }
  }
  return out;
}

std::string StripThoughts(std::string_view text) {
  constexpr std::string_view kClose = "</think>";
  auto pos = text.rfind(kClose);
  if (pos == std::string_view::npos) return std::string(text);
  return std::string(Trim(text.substr(pos + kClose.size())));
}

GeneratedResponse PostprocessResponse(const GeneratedResponse& raw) {
  GeneratedResponse out = raw;
  out.normalized_text = NormalizeResponseText(raw.raw_text);
  out.citations.clear();
  out.dangling_citation = false;
  std::set<int> seen;
  const int refs = static_cast<int>(raw.reference_list.size());
  for (int index : ExtractCitationIndices(out.normalized_text)) {
    if (index < 1 || index > refs) {
      out.dangling_citation = true;
      continue;
    }
    if (seen.insert(index).second) {
      out.citations.push_back({index, raw.reference_list[index - 1]});
    }
  }
  return out;
}

}  // namespace arena
