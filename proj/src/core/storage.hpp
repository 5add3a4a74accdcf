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

// Flat-file data directory.
//
//   votes.jsonl          one vote per line plus a dense "seq" number (from 1)
//   battles.jsonl        one battle per line; a line is the battle's commit
//   responses/<id>.json  {"first": ..., "second": ...}, written before the
//                        battle line so a committed battle always has them
//   corpus.jsonl         ingested CorpusDocument records
//   snapshots/           leaderboard snapshots, one JSON document each
//
// Every line is newline-terminated, so a crash mid-append leaves a torn tail
// without a newline; opening the directory truncates it. Appends are fsynced
// before returning and serialized by a process mutex plus an advisory file
// lock.

#ifndef ARENA_CORE_STORAGE_HPP_
#define ARENA_CORE_STORAGE_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core/domain.hpp"
#include "core/pipeline.hpp"

namespace arena {

struct CorruptRecordInfo {
  std::string file;
  std::int64_t seq = 0;  // best-effort sequence number for vote records
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct RecoveryReport {
  std::map<std::string, std::size_t> torn_bytes;  // file -> bytes dropped
  std::vector<CorruptRecordInfo> corrupt;
};

struct LoadedVotes {
  std::vector<Vote> votes;
  std::vector<std::int64_t> seq;  // parallel to votes
  std::vector<CorruptRecordInfo> corrupt;
};

struct StoreOptions {
  // Total bytes the append-only files may reach; 0 = unlimited. Exceeding it
  // fails like a full disk.
  std::uint64_t quota_bytes = 0;
};

class DataStore : public BattleLookup, public BattleSink {
 public:
  explicit DataStore(std::filesystem::path dir, StoreOptions options = {});

  const std::filesystem::path& dir() const { return dir_; }
  const RecoveryReport& recovery() const { return recovery_; }

  // Returns the sequence number. Throws kUnknownBattle, kIntegrityViolation
  // (duplicate user/battle or vote id), kStorageFull or kIo.
  std::int64_t AppendVote(const Vote& vote);
  // All-or-nothing validation, a single write and fsync.
  std::vector<std::int64_t> AppendVotes(std::span<const Vote> votes);

  // Sequence order. Corrupt records found when the log was opened are listed
  // alongside the readable ones.
  LoadedVotes LoadVotes(const VoteFilter& filter = {}) const;
  std::int64_t VoteCount() const;

  void CommitBattle(const BattleRecord& record) override;
  // Battles without stored responses (imported or simulated logs).
  void AddBattles(std::span<const Battle> battles);
  std::vector<Battle> Battles() const;
  std::optional<std::pair<GeneratedResponse, GeneratedResponse>> LoadResponses(
      std::string_view battle_id) const;

  const Battle* FindBattle(std::string_view battle_id) const override;
  bool HasVote(std::string_view user_id, std::string_view battle_id) const override;

  // Appends documents; throws kIntegrityViolation on a repeated doc_id.
  std::size_t IngestCorpus(std::span<const CorpusDocument> documents);
  std::vector<CorpusDocument> LoadCorpus() const;

  // Snapshot documents are named by the vote count they cover.
  void WriteSnapshot(const Json& snapshot, std::int64_t covered_votes);
  std::optional<Json> LatestSnapshot() const;

 private:
  void Recover();
  void AppendLines(const std::filesystem::path& file, const std::string& payload);

  std::filesystem::path dir_;
  StoreOptions options_;
  RecoveryReport recovery_;

  mutable std::shared_mutex mu_;
  std::vector<Vote> votes_;
  std::vector<std::int64_t> seq_;
  std::set<std::pair<std::string, std::string>> voted_;
  std::set<std::string> vote_ids_;
  std::int64_t next_seq_ = 1;
  std::uint64_t used_bytes_ = 0;
  std::map<std::string, Battle, std::less<>> battles_;
  std::vector<std::string> battle_order_;
  std::set<std::string> doc_ids_;
};

// Reads a line-delimited CorpusDocument file; kParse names the bad line.
std::vector<CorpusDocument> ReadCorpusFile(const std::filesystem::path& path);

// Writes `text` to `path` through a temporary file and rename.
void WriteFileAtomic(const std::filesystem::path& path, const std::string& text);
std::string ReadFile(const std::filesystem::path& path);

}  // namespace arena

#endif  // ARENA_CORE_STORAGE_HPP_
