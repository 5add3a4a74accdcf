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

// HTTP service. ArenaService holds the request handlers and is usable without
// a socket; HttpServer binds them to routes:
//
//   POST /api/questions      {text, discipline}           202 {battle_id, status}
//   GET  /api/battles/{id}                                 202 pending, 200 ready
//   POST /api/votes          {battle_id, winner, justification?, user_id?}
//   GET  /api/leaderboard    ?discipline=&category=&exclude_flagged=
//   GET  /api/healthz
//
// Errors are {"error": {"status", "code", "message"}}. The user token comes
// from the X-User-Id header, or from "user_id" in the vote body.

#ifndef ARENA_CORE_SERVICE_HPP_
#define ARENA_CORE_SERVICE_HPP_

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "core/config.hpp"
#include "core/pipeline.hpp"
#include "core/retrieval.hpp"
#include "core/storage.hpp"

namespace arena {

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON text
};

// Stable machine-readable error codes.
namespace api_code {
inline constexpr const char* kMalformedRequest = "malformed_request";
inline constexpr const char* kMissingUser = "missing_user";
inline constexpr const char* kInvalidWinner = "invalid_winner";
inline constexpr const char* kInvalidFilter = "invalid_filter";
inline constexpr const char* kModerationDenied = "moderation_denied";
inline constexpr const char* kUnknownBattle = "unknown_battle";
inline constexpr const char* kDuplicateVote = "duplicate_vote";
inline constexpr const char* kProviderUnavailable = "provider_unavailable";
inline constexpr const char* kGenerationTimeout = "generation_timeout";
inline constexpr const char* kEmptyCorpus = "empty_corpus";
inline constexpr const char* kPoolTooSmall = "pool_too_small";
inline constexpr const char* kStorageError = "storage_error";
inline constexpr const char* kNotFound = "not_found";
inline constexpr const char* kInternal = "internal";
}  // namespace api_code

ApiResponse MakeApiError(int status, std::string_view code, std::string_view message);

// Fixed-size pool running tasks in submission order.
class TaskQueue {
 public:
  explicit TaskQueue(int threads);
  ~TaskQueue();
  TaskQueue(const TaskQueue&) = delete;
  TaskQueue& operator=(const TaskQueue&) = delete;

  void Submit(std::function<void()> task);
  // Blocks until no task is queued or running.
  void WaitIdle();

 private:
  void Loop();

  std::mutex mu_;
  std::condition_variable wake_;
  std::condition_variable idle_;
  std::deque<std::function<void()>> tasks_;
  int running_ = 0;
  bool stopping_ = false;
  std::vector<std::thread> threads_;
};

class ArenaService {
 public:
  using Clock = std::function<Timestamp()>;

  // Opens (and recovers) the store under config.data_dir, indexes its corpus
  // and serves the default leaderboard from the latest snapshot when that
  // snapshot covers the whole log.
  explicit ArenaService(ServiceConfig config, Clock clock = {});
  ~ArenaService();
  ArenaService(const ArenaService&) = delete;
  ArenaService& operator=(const ArenaService&) = delete;

  ApiResponse SubmitQuestion(const std::string& body);
  ApiResponse GetBattle(const std::string& battle_id,
                        const std::optional<std::string>& user_id);
  ApiResponse SubmitVote(const std::string& body, const std::optional<std::string>& user_id);
  ApiResponse GetLeaderboard(const std::map<std::string, std::string>& params);
  ApiResponse Health();

  // Blocks until queued generations and leaderboard refits have finished.
  void WaitIdle();

  const ServiceConfig& config() const { return config_; }
  DataStore& store() { return store_; }

 private:
  enum class BattleStatus { kPending, kFailed };
  struct BattleState {
    BattleStatus status = BattleStatus::kPending;
    int http_status = 503;
    std::string code;
    std::string message;
  };
  struct CachedBoard {
    std::string body;
    std::int64_t covered_votes = 0;
  };
  struct BoardQuery {
    VoteFilter filter;
    bool exclude_flagged = false;
    std::string key;
  };

  std::string NextBattleId();
  void RunGeneration(std::string battle_id, std::string question, Discipline discipline);
  std::optional<QuestionCategory> CategoryFor(const Battle& battle);
  BoardQuery ParseBoardQuery(const std::map<std::string, std::string>& params) const;
  std::shared_ptr<const CachedBoard> Refit(const BoardQuery& query, bool persist);
  void ScheduleStaleRefits();
  void LoadSnapshot();

  ServiceConfig config_;
  Clock clock_;
  DataStore store_;
  CorpusIndex corpus_;
  PipelineContext pipeline_;

  std::mutex battles_mu_;
  std::map<std::string, BattleState, std::less<>> battle_states_;
  std::uint64_t battle_counter_ = 0;

  std::mutex votes_mu_;
  std::map<std::string, QuestionCategory, std::less<>> categories_;

  std::mutex boards_mu_;
  std::map<std::string, std::shared_ptr<const CachedBoard>> boards_;
  std::map<std::string, BoardQuery> board_queries_;
  std::set<std::string> refreshing_;

  TaskQueue generation_queue_;
  TaskQueue refit_queue_;
};

// Binds ArenaService handlers to HTTP routes.
class HttpServer {
 public:
  explicit HttpServer(ArenaService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds the socket; port 0 picks a free port. Returns the bound port.
  int Bind(const std::string& host, int port);
  // Serves until Stop(); call after Bind().
  void Run();
  // Bind() followed by Run() on a background thread.
  int Start(const std::string& host, int port);
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace arena

#endif  // ARENA_CORE_SERVICE_HPP_
