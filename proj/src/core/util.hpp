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

#ifndef ARENA_CORE_UTIL_HPP_
#define ARENA_CORE_UTIL_HPP_

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace arena {

using Timestamp = std::chrono::sys_seconds;

// 64-bit FNV-1a. Stable across platforms, unlike std::hash.
std::uint64_t Fnv1a64(std::string_view bytes,
                      std::uint64_t seed = 0xcbf29ce484222325ULL);

// One SplitMix64 step; used to derive independent child seeds.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream);

std::string Hex64(std::uint64_t value);

// "YYYY-MM-DDTHH:MM:SSZ"
std::string FormatTimestamp(Timestamp t);
Timestamp ParseTimestamp(std::string_view text);

std::string_view Trim(std::string_view text);
std::string ToLower(std::string_view text);

// Lowercased alphanumeric runs.
std::vector<std::string> Tokenize(std::string_view text);

// Tokenize minus a small English stopword list.
std::vector<std::string> ContentTokens(std::string_view text);

// Whitespace-delimited token count.
std::size_t CountWhitespaceTokens(std::string_view text);

}  // namespace arena

#endif  // ARENA_CORE_UTIL_HPP_
