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

#include "core/storage.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>

namespace arena {
namespace {

namespace fs = std::filesystem;

constexpr const char* kVotesFile = "votes.jsonl";
constexpr const char* kBattlesFile = "battles.jsonl";
constexpr const char* kCorpusFile = "corpus.jsonl";

[[noreturn]] void FailErrno(const std::string& what, int err) {
  const ErrorCode code =
      (err == ENOSPC || err == EDQUOT) ? ErrorCode::kStorageFull : ErrorCode::kIo;
  Fail(code, what + ": " + std::strerror(err));
}

class FileDescriptor {
 public:
  explicit FileDescriptor(int fd) : fd_(fd) {}
  ~FileDescriptor() {
    if (fd_ >= 0) ::close(fd_);
  }
  FileDescriptor(const FileDescriptor&) = delete;
  FileDescriptor& operator=(const FileDescriptor&) = delete;
  int get() const { return fd_; }

 private:
  int fd_;
};

void WriteAll(int fd, const std::string& bytes, const std::string& what) {
  std::size_t done = 0;
  while (done < bytes.size()) {
    const ssize_t n = ::write(fd, bytes.data() + done, bytes.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      FailErrno(what, errno);
    }
    done += static_cast<std::size_t>(n);
  }
}

std::vector<std::string> SplitRecords(const std::string& content) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    auto nl = content.find('\n', start);
    if (nl == std::string::npos) nl = content.size();
    lines.push_back(content.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

// Drops bytes after the last newline; returns how many.
std::size_t TruncateTornTail(const fs::path& file) {
  if (!fs::exists(file)) return 0;
  const std::string content = ReadFile(file);
  if (content.empty() || content.back() == '\n') return 0;
  const auto last = content.rfind('\n');
  const std::size_t keep = last == std::string::npos ? 0 : last + 1;
  fs::resize_file(file, keep);
  return content.size() - keep;
}

std::string SnapshotName(std::int64_t covered) {
  std::ostringstream name;
  name << "snapshot-";
  name.width(12);
  name.fill('0');
  name << covered << ".json";
  return name.str();
}

}  // namespace

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void WriteFileAtomic(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp-" + std::to_string(::getpid());
  {
    FileDescriptor fd(::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644));
    if (fd.get() < 0) FailErrno("cannot create '" + tmp.string() + "'", errno);
    try {
      WriteAll(fd.get(), text, "write '" + tmp.string() + "'");
    } catch (...) {
      ::unlink(tmp.c_str());
      throw;
    }
    if (::fsync(fd.get()) != 0) FailErrno("fsync '" + tmp.string() + "'", errno);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    Fail(ErrorCode::kIo, "cannot rename into '" + path.string() + "'");
  }
}

std::vector<CorpusDocument> ReadCorpusFile(const fs::path& path) {
  std::vector<CorpusDocument> docs;
  std::size_t line_no = 0;
  for (const auto& line : SplitRecords(ReadFile(path))) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      docs.push_back(DecodeLine<CorpusDocument>(line));
    } catch (const Error& e) {
      Fail(ErrorCode::kParse,
           path.filename().string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (Trim(docs.back().text).empty()) {
      Fail(ErrorCode::kParse, path.filename().string() + ":" + std::to_string(line_no) +
                                  ": document text is empty");
    }
  }
  return docs;
}

DataStore::DataStore(fs::path dir, StoreOptions options)
    : dir_(std::move(dir)), options_(options) {
  std::error_code ec;
  fs::create_directories(dir_ / "responses", ec);
  fs::create_directories(dir_ / "snapshots", ec);
  if (!fs::is_directory(dir_ / "responses") || !fs::is_directory(dir_ / "snapshots")) {
    Fail(ErrorCode::kIo, "cannot create data directory '" + dir_.string() + "'");
  }
  Recover();
}

void DataStore::Recover() {
  for (const char* name : {kVotesFile, kBattlesFile, kCorpusFile}) {
    if (auto dropped = TruncateTornTail(dir_ / name); dropped > 0) {
      recovery_.torn_bytes[name] = dropped;
    }
    if (fs::exists(dir_ / name)) used_bytes_ += fs::file_size(dir_ / name);
  }

  auto each_line = [&](const char* name, auto&& handle) {
    if (!fs::exists(dir_ / name)) return;
    std::size_t line_no = 0;
    for (const auto& line : SplitRecords(ReadFile(dir_ / name))) {
      ++line_no;
      handle(line, line_no);
    }
  };

  each_line(kBattlesFile, [&](const std::string& line, std::size_t line_no) {
    try {
      Battle b = DecodeLine<Battle>(line);
      if (battles_.emplace(b.battle_id, b).second) battle_order_.push_back(b.battle_id);
    } catch (const Error& e) {
      recovery_.corrupt.push_back({kBattlesFile, 0, line_no, e.what()});
    }
  });

  std::int64_t last_seq = 0;
  each_line(kVotesFile, [&](const std::string& line, std::size_t line_no) {
    try {
      const Json j = Json::parse(line);
      const std::int64_t seq = j.value("seq", last_seq + 1);
      Vote v = Decode<Vote>(j);
      last_seq = seq;
      voted_.emplace(v.user_id, v.battle_id);
      vote_ids_.insert(v.vote_id);
      votes_.push_back(std::move(v));
      seq_.push_back(seq);
    } catch (const std::exception& e) {
      ++last_seq;
      recovery_.corrupt.push_back({kVotesFile, last_seq, line_no, e.what()});
    }
  });
  next_seq_ = last_seq + 1;

  each_line(kCorpusFile, [&](const std::string& line, std::size_t line_no) {
    try {
      doc_ids_.insert(DecodeLine<CorpusDocument>(line).doc_id);
    } catch (const Error& e) {
      recovery_.corrupt.push_back({kCorpusFile, 0, line_no, e.what()});
    }
  });
}

void DataStore::AppendLines(const fs::path& file, const std::string& payload) {
  if (payload.empty()) return;
  if (options_.quota_bytes > 0 && used_bytes_ + payload.size() > options_.quota_bytes) {
    Fail(ErrorCode::kStorageFull, "data directory quota of " +
                                      std::to_string(options_.quota_bytes) +
                                      " bytes exhausted");
  }
  FileDescriptor fd(::open(file.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644));
  if (fd.get() < 0) FailErrno("cannot open '" + file.string() + "'", errno);
  if (::flock(fd.get(), LOCK_EX) != 0) FailErrno("cannot lock '" + file.string() + "'", errno);
  const off_t start = ::lseek(fd.get(), 0, SEEK_END);
  try {
    WriteAll(fd.get(), payload, "append to '" + file.string() + "'");
    if (::fsync(fd.get()) != 0) FailErrno("fsync '" + file.string() + "'", errno);
  } catch (...) {
    // Never leave a partial record behind.
    if (start >= 0 && ::ftruncate(fd.get(), start) == 0) ::fsync(fd.get());
    ::flock(fd.get(), LOCK_UN);
    throw;
  }
  ::flock(fd.get(), LOCK_UN);
  used_bytes_ += payload.size();
}

std::int64_t DataStore::AppendVote(const Vote& vote) {
  return AppendVotes(std::span<const Vote>(&vote, 1)).front();
}

std::vector<std::int64_t> DataStore::AppendVotes(std::span<const Vote> votes) {
  std::unique_lock lock(mu_);
  std::set<std::pair<std::string, std::string>> batch_pairs;
  std::set<std::string> batch_ids;
  std::string payload;
  std::vector<std::int64_t> seqs;
  std::int64_t seq = next_seq_;
  for (const auto& v : votes) {
    if (battles_.find(v.battle_id) == battles_.end()) {
      Fail(ErrorCode::kUnknownBattle, "unknown battle '" + v.battle_id + "'");
    }
    std::pair<std::string, std::string> key{v.user_id, v.battle_id};
    if (voted_.contains(key) || !batch_pairs.insert(key).second) {
      Fail(ErrorCode::kIntegrityViolation, "user '" + v.user_id +
                                               "' already voted on battle '" +
                                               v.battle_id + "'");
    }
    if (v.vote_id.empty() || vote_ids_.contains(v.vote_id) ||
        !batch_ids.insert(v.vote_id).second) {
      Fail(ErrorCode::kIntegrityViolation, "vote id '" + v.vote_id + "' is empty or reused");
    }
    Json record = v;
    record["seq"] = seq;
    payload += record.dump() + "\n";
    seqs.push_back(seq++);
  }
  AppendLines(dir_ / kVotesFile, payload);
  for (std::size_t k = 0; k < votes.size(); ++k) {
    voted_.emplace(votes[k].user_id, votes[k].battle_id);
    vote_ids_.insert(votes[k].vote_id);
    votes_.push_back(votes[k]);
    seq_.push_back(seqs[k]);
  }
  next_seq_ = seq;
  return seqs;
}

LoadedVotes DataStore::LoadVotes(const VoteFilter& filter) const {
  std::shared_lock lock(mu_);
  LoadedVotes out;
  for (std::size_t k = 0; k < votes_.size(); ++k) {
    if (!filter.Matches(votes_[k])) continue;
    out.votes.push_back(votes_[k]);
    out.seq.push_back(seq_[k]);
  }
  for (const auto& c : recovery_.corrupt) {
    if (c.file == kVotesFile) out.corrupt.push_back(c);
  }
  return out;
}

std::int64_t DataStore::VoteCount() const {
  std::shared_lock lock(mu_);
  return static_cast<std::int64_t>(votes_.size());
}

void DataStore::CommitBattle(const BattleRecord& record) {
  std::unique_lock lock(mu_);
  const Battle& b = record.battle;
  if (battles_.contains(b.battle_id)) {
    Fail(ErrorCode::kIntegrityViolation, "battle '" + b.battle_id + "' already exists");
  }
  const fs::path responses = dir_ / "responses" / (b.battle_id + ".json");
  const Json doc{{"first", record.first}, {"second", record.second}};
  WriteFileAtomic(responses, doc.dump(2) + "\n");
  try {
    AppendLines(dir_ / kBattlesFile, EncodeLine(b) + "\n");
  } catch (...) {
    std::error_code ec;
    fs::remove(responses, ec);
    throw;
  }
  battles_.emplace(b.battle_id, b);
  battle_order_.push_back(b.battle_id);
}

void DataStore::AddBattles(std::span<const Battle> battles) {
  std::unique_lock lock(mu_);
  std::set<std::string> batch;
  std::string payload;
  for (const auto& b : battles) {
    if (battles_.contains(b.battle_id) || !batch.insert(b.battle_id).second) {
      Fail(ErrorCode::kIntegrityViolation, "battle '" + b.battle_id + "' already exists");
    }
    payload += EncodeLine(b) + "\n";
  }
  AppendLines(dir_ / kBattlesFile, payload);
  for (const auto& b : battles) {
    battles_.emplace(b.battle_id, b);
    battle_order_.push_back(b.battle_id);
  }
}

std::vector<Battle> DataStore::Battles() const {
  std::shared_lock lock(mu_);
  std::vector<Battle> out;
  out.reserve(battle_order_.size());
  for (const auto& id : battle_order_) out.push_back(battles_.find(id)->second);
  return out;
}

std::optional<std::pair<GeneratedResponse, GeneratedResponse>> DataStore::LoadResponses(
    std::string_view battle_id) const {
  {
    std::shared_lock lock(mu_);
    if (!battles_.contains(battle_id)) return std::nullopt;
  }
  const fs::path file = dir_ / "responses" / (std::string(battle_id) + ".json");
  if (!fs::exists(file)) return std::nullopt;
  Json doc;
  try {
    doc = Json::parse(ReadFile(file));
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kCorruptRecord, file.string() + ": " + e.what());
  }
  return std::make_pair(Decode<GeneratedResponse>(doc.at("first")),
                        Decode<GeneratedResponse>(doc.at("second")));
}

const Battle* DataStore::FindBattle(std::string_view battle_id) const {
  std::shared_lock lock(mu_);
  auto it = battles_.find(battle_id);
  return it == battles_.end() ? nullptr : &it->second;
}

bool DataStore::HasVote(std::string_view user_id, std::string_view battle_id) const {
  std::shared_lock lock(mu_);
  return voted_.contains({std::string(user_id), std::string(battle_id)});
}

std::size_t DataStore::IngestCorpus(std::span<const CorpusDocument> documents) {
  std::unique_lock lock(mu_);
  std::set<std::string> batch;
  std::string payload;
  for (const auto& d : documents) {
    Require(!d.doc_id.empty(), "document id must be nonempty");
    Require(!Trim(d.text).empty(), "document '" + d.doc_id + "' has empty text");
    if (doc_ids_.contains(d.doc_id) || !batch.insert(d.doc_id).second) {
      Fail(ErrorCode::kIntegrityViolation, "document '" + d.doc_id + "' already ingested");
    }
    payload += EncodeLine(d) + "\n";
  }
  AppendLines(dir_ / kCorpusFile, payload);
  doc_ids_.insert(batch.begin(), batch.end());
  return documents.size();
}

std::vector<CorpusDocument> DataStore::LoadCorpus() const {
  std::shared_lock lock(mu_);
  const fs::path file = dir_ / kCorpusFile;
  std::vector<CorpusDocument> docs;
  if (!fs::exists(file)) return docs;
  for (const auto& line : SplitRecords(ReadFile(file))) {
    try {
      docs.push_back(DecodeLine<CorpusDocument>(line));
    } catch (const Error&) {
      // Reported in recovery().
    }
  }
  return docs;
}

void DataStore::WriteSnapshot(const Json& snapshot, std::int64_t covered_votes) {
  WriteFileAtomic(dir_ / "snapshots" / SnapshotName(covered_votes), snapshot.dump(2) + "\n");
}

std::optional<Json> DataStore::LatestSnapshot() const {
  std::optional<fs::path> latest;
  for (const auto& entry : fs::directory_iterator(dir_ / "snapshots")) {
    const auto name = entry.path().filename().string();
    if (!name.starts_with("snapshot-") || !name.ends_with(".json")) continue;
    if (!latest || name > latest->filename().string()) latest = entry.path();
  }
  if (!latest) return std::nullopt;
  try {
    return Json::parse(ReadFile(*latest));
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kCorruptRecord, latest->string() + ": " + e.what());
  }
}

}  // namespace arena
