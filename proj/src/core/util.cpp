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

#include "core/util.hpp"

#include <cctype>
#include <cstdio>
#include <ctime>
#include <set>

#include "core/error.hpp"

namespace arena {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kUnknownBattle: return "UnknownBattle";
    case ErrorCode::kDuplicateVote: return "DuplicateVote";
    case ErrorCode::kUnknownModel: return "UnknownModel";
    case ErrorCode::kEmptyVoteSet: return "EmptyVoteSet";
    case ErrorCode::kDegenerateGraph: return "DegenerateGraph";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kModelSetMismatch: return "ModelSetMismatch";
    case ErrorCode::kInvalidRating: return "InvalidRating";
    case ErrorCode::kNonPositiveP: return "NonPositiveP";
    case ErrorCode::kInsufficientSession: return "InsufficientSession";
    case ErrorCode::kProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::kGenerationTimeout: return "GenerationTimeout";
    case ErrorCode::kModerationDenied: return "ModerationDenied";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kPoolTooSmall: return "PoolTooSmall";
    case ErrorCode::kInsufficientVotes: return "InsufficientVotes";
    case ErrorCode::kMissingVerdicts: return "MissingVerdicts";
    case ErrorCode::kStorageFull: return "StorageFull";
    case ErrorCode::kIntegrityViolation: return "IntegrityViolation";
    case ErrorCode::kCorruptRecord: return "CorruptRecord";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

std::uint64_t Fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string Hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

std::string FormatTimestamp(Timestamp t) {
  std::time_t secs = t.time_since_epoch().count();
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Timestamp ParseTimestamp(std::string_view text) {
  int y, mo, d, h, mi, s;
  char z = 0;
  std::string owned(text);
  if (text.size() != 20 ||
      std::sscanf(owned.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &y, &mo, &d, &h,
                  &mi, &s, &z) != 7 ||
      z != 'Z') {
    Fail(ErrorCode::kParse, "invalid timestamp '" + owned + "'");
  }
  std::chrono::year_month_day ymd{std::chrono::year{y},
                                  std::chrono::month{static_cast<unsigned>(mo)},
                                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) {
    Fail(ErrorCode::kParse, "invalid timestamp '" + owned + "'");
  }
  return std::chrono::sys_days{ymd} + std::chrono::hours{h} +
         std::chrono::minutes{mi} + std::chrono::seconds{s};
}

std::string_view Trim(std::string_view text) {
  const auto* ws = " \t\r\n\f\v";
  auto b = text.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = text.find_last_not_of(ws);
  return text.substr(b, e - b + 1);
}

std::string ToLower(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<std::string> ContentTokens(std::string_view text) {
  static const std::set<std::string, std::less<>> kStop = {
      "a",    "an",    "and",  "are",   "as",    "at",   "be",    "by",
      "can",  "do",    "does", "for",   "from",  "has",  "have",  "how",
      "in",   "into",  "is",   "it",    "its",   "of",   "on",    "or",
      "that", "the",   "their", "these", "this", "to",   "was",   "were",
      "what", "which", "while", "with",  "were", "al",   "et",    "we",
      "our",  "they",  "them", "than",  "such",  "also", "using", "used"};
  std::vector<std::string> out;
  for (auto& t : Tokenize(text)) {
    if (!kStop.contains(t)) out.push_back(std::move(t));
  }
  return out;
}

std::size_t CountWhitespaceTokens(std::string_view text) {
  std::size_t n = 0;
  bool in_token = false;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++n;
    }
  }
  return n;
}

}  // namespace arena
