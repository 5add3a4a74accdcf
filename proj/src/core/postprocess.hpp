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

// Rule-based plain-text normalization of generated answers.
//
// 1. Markdown emphasis, headers, bullets, quotes, code spans and links are
//    reduced to plain text.
// 2. Bracket citations ("[3]", "[1, 2]") found inside a sentence move to the
//    end of that sentence, just before its terminal punctuation, keeping
//    their order. Citations stranded right after a sentence's period are
//    pulled back into that sentence.
//
// Sentences end at '.', '!' or '?' followed by whitespace or end of line,
// except after common abbreviations ("et al.", "e.g.", "Fig.") and single
// capital initials. Both steps are idempotent.

#ifndef ARENA_CORE_POSTPROCESS_HPP_
#define ARENA_CORE_POSTPROCESS_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "core/domain.hpp"

namespace arena {

std::string StripMarkdown(std::string_view text);
std::string RelocateCitations(std::string_view text);
std::string NormalizeResponseText(std::string_view text);

// Sentences of `text` (all lines), each with its terminal mark.
std::vector<std::string> SplitSentenceTexts(std::string_view text);

// Every cited index in order of occurrence; "[1,2]" yields 1 then 2.
std::vector<int> ExtractCitationIndices(std::string_view text);

// Drops a reasoning trace: everything up to and including the last "</think>".
std::string StripThoughts(std::string_view text);

// Fills normalized_text, citations (distinct in-range indices in order of
// first use) and the dangling_citation flag. Never fails on dangling indices.
GeneratedResponse PostprocessResponse(const GeneratedResponse& raw);

}  // namespace arena

#endif  // ARENA_CORE_POSTPROCESS_HPP_
