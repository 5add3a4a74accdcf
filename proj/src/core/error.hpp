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

#ifndef ARENA_CORE_ERROR_HPP_
#define ARENA_CORE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace arena {

// Stable failure classes. The numeric values are mirrored by arena_status in
// the C header; never renumber.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kParse = 2,
  kIo = 3,
  kUnknownBattle = 10,
  kDuplicateVote = 11,
  kUnknownModel = 12,
  kEmptyVoteSet = 13,
  kDegenerateGraph = 14,
  kDimensionMismatch = 15,
  kNonFiniteInput = 16,
  kModelSetMismatch = 17,
  kInvalidRating = 20,
  kNonPositiveP = 21,
  kInsufficientSession = 22,
  kProviderUnavailable = 30,
  kGenerationTimeout = 31,
  kModerationDenied = 32,
  kEmptyCorpus = 33,
  kPoolTooSmall = 34,
  kInsufficientVotes = 40,
  kMissingVerdicts = 41,
  kStorageFull = 50,
  kIntegrityViolation = 51,
  kCorruptRecord = 52,
  kInternal = 99,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void Require(bool condition, const std::string& message) {
  if (!condition) Fail(ErrorCode::kInvalidArgument, message);
}

}  // namespace arena

#endif  // ARENA_CORE_ERROR_HPP_
