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

#include "core/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <random>

#include "core/analytics.hpp"
#include "core/leaderboard.hpp"
#include "core/ops.hpp"

namespace arena {
namespace {

Timestamp WallClock() {
  return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

ApiResponse Ok(int status, const Json& body) { return {status, body.dump()}; }

// Maps failures of the generation path and of storage to API errors.
ApiResponse FromError(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kProviderUnavailable:
      return MakeApiError(503, api_code::kProviderUnavailable, e.what());
    case ErrorCode::kGenerationTimeout:
      return MakeApiError(503, api_code::kGenerationTimeout, e.what());
    case ErrorCode::kEmptyCorpus:
      return MakeApiError(503, api_code::kEmptyCorpus, e.what());
    case ErrorCode::kPoolTooSmall:
      return MakeApiError(503, api_code::kPoolTooSmall, e.what());
    case ErrorCode::kStorageFull:
    case ErrorCode::kIo:
      return MakeApiError(503, api_code::kStorageError, e.what());
    case ErrorCode::kUnknownBattle:
      return MakeApiError(404, api_code::kUnknownBattle, e.what());
    case ErrorCode::kDuplicateVote:
    case ErrorCode::kIntegrityViolation:
      return MakeApiError(409, api_code::kDuplicateVote, e.what());
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParse:
      return MakeApiError(400, api_code::kMalformedRequest, e.what());
    default:
      return MakeApiError(500, api_code::kInternal, e.what());
  }
}

template <typename Handler>
ApiResponse Guarded(Handler&& handler) {
  try {
    return handler();
  } catch (const Error& e) {
    return FromError(e);
  } catch (const std::exception& e) {
    return MakeApiError(500, api_code::kInternal, e.what());
  }
}

std::optional<Json> ParseBody(const std::string& body) {
  try {
    Json j = Json::parse(body);
    if (j.is_object()) return j;
  } catch (const Json::exception&) {
  }
  return std::nullopt;
}

std::optional<std::string> StringField(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

Json ResponsePayload(const GeneratedResponse& r) {
  Json citations = Json::array();
  for (const auto& c : r.citations) citations.push_back({{"index", c.index}, {"doc_id", c.doc_id}});
  return {{"response_id", r.response_id},
          {"text", r.normalized_text},
          {"citations", citations},
          {"dangling_citation", r.dangling_citation}};
}

std::optional<bool> ParseBool(const std::string& text) {
  const std::string t = ToLower(Trim(text));
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no" || t.empty()) return false;
  return std::nullopt;
}

std::optional<QuestionCategory> ParseCategoryParam(const std::string& text) {
  for (int code = 1; code <= 6; ++code) {
    const auto c = *CategoryFromCode(code);
    if (text == std::to_string(code) || text == ToString(c)) return c;
  }
  return std::nullopt;
}

bool HasDecisiveVote(std::span<const Vote> votes) {
  return std::any_of(votes.begin(), votes.end(), [](const Vote& v) {
    return v.winner == Winner::kFirst || v.winner == Winner::kSecond;
  });
}

}  // namespace

ApiResponse MakeApiError(int status, std::string_view code, std::string_view message) {
  return Ok(status, {{"error",
                      {{"status", status},
                       {"code", std::string(code)},
                       {"message", std::string(message)}}}});
}

TaskQueue::TaskQueue(int threads) {
  for (int i = 0; i < std::max(threads, 1); ++i) threads_.emplace_back([this] { Loop(); });
}

TaskQueue::~TaskQueue() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  wake_.notify_all();
  for (auto& t : threads_) t.join();
}

void TaskQueue::Submit(std::function<void()> task) {
  {
    std::lock_guard lock(mu_);
    tasks_.push_back(std::move(task));
  }
  wake_.notify_one();
}

void TaskQueue::WaitIdle() {
  std::unique_lock lock(mu_);
  idle_.wait(lock, [this] { return tasks_.empty() && running_ == 0; });
}

void TaskQueue::Loop() {
  for (;;) {
    std::function<void()> task;
    {
      std::unique_lock lock(mu_);
      wake_.wait(lock, [this] { return stopping_ || !tasks_.empty(); });
      if (tasks_.empty()) return;
      task = std::move(tasks_.front());
      tasks_.pop_front();
      ++running_;
    }
    try {
      task();
    } catch (...) {
      // Tasks record their own failures.
    }
    {
      std::lock_guard lock(mu_);
      --running_;
      if (tasks_.empty() && running_ == 0) idle_.notify_all();
    }
  }
}

ArenaService::ArenaService(ServiceConfig config, Clock clock)
    : config_(std::move(config)),
      clock_(clock ? std::move(clock) : Clock(WallClock)),
      store_(config_.data_dir),
      corpus_(store_.LoadCorpus()),
      generation_queue_(config_.workers),
      refit_queue_(1) {
  config_.Validate();
  if (config_.models.empty()) config_.models = DefaultModelPool();
  pipeline_.providers = ProviderSet::FromConfig(config_.providers);
  pipeline_.corpus = &corpus_;
  pipeline_.pool = config_.models;
  pipeline_.config = config_.pipeline;
  pipeline_.clock = clock_;
  battle_counter_ = store_.Battles().size();
  LoadSnapshot();
}

ArenaService::~ArenaService() { WaitIdle(); }

void ArenaService::WaitIdle() {
  generation_queue_.WaitIdle();
  refit_queue_.WaitIdle();
}

std::string ArenaService::NextBattleId() {
  std::lock_guard lock(battles_mu_);
  for (;;) {
    std::string id = "b-" + Hex64(MixSeed(config_.seed, ++battle_counter_));
    if (store_.FindBattle(id) == nullptr && !battle_states_.contains(id)) return id;
  }
}

ApiResponse ArenaService::SubmitQuestion(const std::string& body) {
  return Guarded([&]() -> ApiResponse {
    const auto j = ParseBody(body);
    if (!j) return MakeApiError(400, api_code::kMalformedRequest, "body must be a JSON object");
    const auto text = StringField(*j, "text");
    if (!text || Trim(*text).empty()) {
      return MakeApiError(400, api_code::kMalformedRequest, "'text' must be a nonempty string");
    }
    const auto discipline_name = StringField(*j, "discipline");
    const auto discipline =
        discipline_name ? ParseDiscipline(*discipline_name) : std::optional<Discipline>{};
    if (!discipline) {
      return MakeApiError(400, api_code::kMalformedRequest,
                          "'discipline' must be one of natural_science, healthcare, "
                          "humanities_social, engineering");
    }
    const ModerationResult moderation = Moderate(*text, *pipeline_.providers.moderation);
    if (!moderation.allowed) {
      ApiResponse denied = MakeApiError(422, api_code::kModerationDenied, moderation.reason);
      Json payload = Json::parse(denied.body);
      payload["reason"] = moderation.reason;
      denied.body = payload.dump();
      return denied;
    }
    std::string battle_id = NextBattleId();
    {
      std::lock_guard lock(battles_mu_);
      battle_states_[battle_id] = BattleState{};
    }
    generation_queue_.Submit([this, battle_id, question = *text, d = *discipline] {
      RunGeneration(battle_id, question, d);
    });
    return Ok(202, {{"battle_id", battle_id}, {"status", "pending"}});
  });
}

void ArenaService::RunGeneration(std::string battle_id, std::string question,
                                 Discipline discipline) {
  std::mt19937_64 rng(MixSeed(config_.seed, Fnv1a64(battle_id)));
  std::optional<BattleState> failure;
  try {
    RunModeratedBattle(question, discipline, pipeline_, rng, &store_, battle_id);
  } catch (const Error& e) {
    const ApiResponse mapped = FromError(e);
    failure = BattleState{BattleStatus::kFailed, mapped.status,
                          Json::parse(mapped.body)["error"]["code"].get<std::string>(),
                          e.what()};
  } catch (const std::exception& e) {
    failure = BattleState{BattleStatus::kFailed, 500, api_code::kInternal, e.what()};
  }
  std::lock_guard lock(battles_mu_);
  if (failure) {
    battle_states_[battle_id] = *failure;
  } else {
    battle_states_.erase(battle_id);
  }
}

ApiResponse ArenaService::GetBattle(const std::string& battle_id,
                                    const std::optional<std::string>& user_id) {
  return Guarded([&]() -> ApiResponse {
    {
      std::lock_guard lock(battles_mu_);
      if (auto it = battle_states_.find(battle_id); it != battle_states_.end()) {
        const BattleState& s = it->second;
        if (s.status == BattleStatus::kPending) {
          return Ok(202, {{"battle_id", battle_id}, {"status", "pending"}});
        }
        ApiResponse failed = MakeApiError(s.http_status, s.code, s.message);
        Json payload = Json::parse(failed.body);
        payload["battle_id"] = battle_id;
        payload["status"] = "failed";
        failed.body = payload.dump();
        return failed;
      }
    }
    const Battle* battle = store_.FindBattle(battle_id);
    if (battle == nullptr) {
      return MakeApiError(404, api_code::kUnknownBattle, "unknown battle '" + battle_id + "'");
    }
    Json out{{"battle_id", battle->battle_id},
             {"status", "ready"},
             {"question", battle->question},
             {"discipline", ToString(battle->discipline)},
             {"created_at", FormatTimestamp(battle->created_at)}};
    if (auto responses = store_.LoadResponses(battle_id)) {
      out["responses"] = {{"a", ResponsePayload(responses->first)},
                          {"b", ResponsePayload(responses->second)}};
    } else {
      out["responses"] = nullptr;
    }
    if (user_id && store_.HasVote(*user_id, battle_id)) {
      out["revealed"] = {{"model_first", battle->model_first},
                         {"model_second", battle->model_second}};
    }
    return Ok(200, out);
  });
}

std::optional<QuestionCategory> ArenaService::CategoryFor(const Battle& battle) {
  {
    std::lock_guard lock(votes_mu_);
    if (auto it = categories_.find(battle.battle_id); it != categories_.end()) return it->second;
  }
  try {
    const QuestionCategory c = ClassifyCategory(*pipeline_.providers.classifier, battle.question);
    std::lock_guard lock(votes_mu_);
    categories_[battle.battle_id] = c;
    return c;
  } catch (const Error&) {
    return std::nullopt;  // the vote is stored without a category
  }
}

ApiResponse ArenaService::SubmitVote(const std::string& body,
                                     const std::optional<std::string>& header_user) {
  std::int64_t votes_after = 0;
  ApiResponse response = Guarded([&]() -> ApiResponse {
    const auto j = ParseBody(body);
    if (!j) return MakeApiError(400, api_code::kMalformedRequest, "body must be a JSON object");
    const auto battle_id = StringField(*j, "battle_id");
    if (!battle_id) {
      return MakeApiError(400, api_code::kMalformedRequest, "'battle_id' must be a string");
    }
    const auto winner_name = StringField(*j, "winner");
    const auto winner = winner_name ? ParseWinner(*winner_name) : std::optional<Winner>{};
    if (!winner) {
      return MakeApiError(400, api_code::kInvalidWinner,
                          "'winner' must be one of first, second, tie, both_bad");
    }
    std::optional<std::string> justification;
    if (auto it = j->find("justification"); it != j->end() && !it->is_null()) {
      if (!it->is_string()) {
        return MakeApiError(400, api_code::kMalformedRequest, "'justification' must be a string");
      }
      justification = it->get<std::string>();
    }
    std::optional<std::string> user = header_user;
    if (!user || user->empty()) user = StringField(*j, "user_id");
    if (!user || Trim(*user).empty()) {
      return MakeApiError(400, api_code::kMissingUser,
                          "a user token is required (X-User-Id header or 'user_id')");
    }
    const Battle* battle = store_.FindBattle(*battle_id);
    if (battle == nullptr) {
      return MakeApiError(404, api_code::kUnknownBattle, "unknown battle '" + *battle_id + "'");
    }
    if (store_.HasVote(*user, *battle_id)) {
      return MakeApiError(409, api_code::kDuplicateVote,
                          "user '" + *user + "' already voted on battle '" + *battle_id + "'");
    }
    Vote vote;
    vote.vote_id = "v-" + Hex64(Fnv1a64(*user + "\n" + *battle_id));
    vote.battle_id = *battle_id;
    vote.user_id = *user;
    vote.winner = *winner;
    vote.justification = justification;
    vote.timestamp = clock_();
    vote.discipline = battle->discipline;
    vote.category = CategoryFor(*battle);
    const std::int64_t seq = store_.AppendVote(vote);
    votes_after = seq;
    return Ok(200, {{"vote_id", vote.vote_id},
                    {"seq", seq},
                    {"revealed",
                     {{"model_first", battle->model_first},
                      {"model_second", battle->model_second}}}});
  });
  if (votes_after > 0) ScheduleStaleRefits();
  return response;
}

ArenaService::BoardQuery ArenaService::ParseBoardQuery(
    const std::map<std::string, std::string>& params) const {
  BoardQuery q;
  Json key = Json::object();
  for (const auto& [name, value] : params) {
    if (name == "discipline") {
      if (value.empty()) continue;
      q.filter.discipline = ParseDiscipline(value);
      if (!q.filter.discipline) Fail(ErrorCode::kInvalidArgument, "unknown discipline '" + value + "'");
      key["discipline"] = value;
    } else if (name == "category") {
      if (value.empty()) continue;
      q.filter.category = ParseCategoryParam(value);
      if (!q.filter.category) Fail(ErrorCode::kInvalidArgument, "unknown category '" + value + "'");
      key["category"] = CategoryCode(*q.filter.category);
    } else if (name == "exclude_flagged") {
      const auto flag = ParseBool(value);
      if (!flag) Fail(ErrorCode::kInvalidArgument, "exclude_flagged must be true or false");
      q.exclude_flagged = *flag;
      if (*flag) key["exclude_flagged"] = true;
    }
  }
  q.key = key.dump();
  return q;
}

std::shared_ptr<const ArenaService::CachedBoard> ArenaService::Refit(const BoardQuery& query, bool persist) {
  const LoadedVotes loaded = store_.LoadVotes();
  FitOptions options;
  options.fit.seed = config_.seed;
  options.filter = query.filter;
  options.exclude_flagged = query.exclude_flagged;
  options.anomaly.alpha_sig = config_.anomaly_alpha;
  options.anomaly.deployment_seed = config_.deployment_seed;
  options.bootstrap_resamples = config_.bootstrap_resamples;

  auto board = std::make_shared<CachedBoard>();
  board->covered_votes = static_cast<std::int64_t>(loaded.votes.size());
  std::optional<FitOutcome> outcome;
  const VoteSelection selection = SelectVotes(loaded.votes, store_, options.filter,
                                              options.exclude_flagged, options.anomaly);
  if (HasDecisiveVote(selection.votes)) {
    outcome = RunFit(loaded.votes, store_, nullptr, options);
    board->body = LeaderboardToJson(outcome->board);
  } else {
    Leaderboard empty;
    empty.seed = options.fit.seed;
    empty.config_hash = ConfigHash(options.ToJson());
    board->body = LeaderboardToJson(empty);
  }
  if (persist) {
    Json snapshot{{"leaderboard", Json::parse(board->body)},
                  {"config_hash", ConfigHash(options.ToJson())},
                  {"created_at", FormatTimestamp(clock_())},
                  {"log_prefix", board->covered_votes}};
    snapshot["diagnostics"] = outcome ? FitDiagnosticsToJson(*outcome) : Json::object();
    store_.WriteSnapshot(snapshot, board->covered_votes);
  }
  return board;
}

void ArenaService::LoadSnapshot() {
  const BoardQuery default_query = ParseBoardQuery({});
  std::shared_ptr<const CachedBoard> board;
  if (auto snapshot = store_.LatestSnapshot()) {
    const std::int64_t covered = snapshot->value("log_prefix", std::int64_t{-1});
    if (covered == store_.VoteCount() && snapshot->contains("leaderboard")) {
      auto cached = std::make_shared<CachedBoard>();
      cached->body = LeaderboardToJson(LeaderboardFromJson(snapshot->at("leaderboard").dump()));
      cached->covered_votes = covered;
      board = cached;
    }
  }
  if (!board) board = Refit(default_query, /*persist=*/true);
  std::lock_guard lock(boards_mu_);
  boards_[default_query.key] = board;
  board_queries_[default_query.key] = default_query;
}

void ArenaService::ScheduleStaleRefits() {
  const std::int64_t count = store_.VoteCount();
  const std::string default_key = ParseBoardQuery({}).key;
  std::lock_guard lock(boards_mu_);
  for (const auto& [key, board] : boards_) {
    if (count - board->covered_votes < config_.snapshot_threshold) continue;
    if (!refreshing_.insert(key).second) continue;
    const BoardQuery query = board_queries_.at(key);
    const bool persist = key == default_key;
    refit_queue_.Submit([this, query, persist] {
      std::shared_ptr<const CachedBoard> fresh;
      try {
        fresh = Refit(query, persist);
      } catch (...) {
        // Keep serving the previous board.
      }
      std::lock_guard inner(boards_mu_);
      if (fresh) boards_[query.key] = fresh;
      refreshing_.erase(query.key);
    });
  }
}

ApiResponse ArenaService::GetLeaderboard(const std::map<std::string, std::string>& params) {
  BoardQuery query;
  try {
    query = ParseBoardQuery(params);
  } catch (const Error& e) {
    return MakeApiError(400, api_code::kInvalidFilter, e.what());
  }
  return Guarded([&]() -> ApiResponse {
    {
      std::lock_guard lock(boards_mu_);
      if (auto it = boards_.find(query.key); it != boards_.end()) return {200, it->second->body};
    }
    auto board = Refit(query, /*persist=*/false);
    std::lock_guard lock(boards_mu_);
    auto [it, inserted] = boards_.emplace(query.key, board);
    board_queries_.emplace(query.key, query);
    return {200, it->second->body};
  });
}

ApiResponse ArenaService::Health() {
  return Guarded([&]() -> ApiResponse {
    const auto& p = pipeline_.providers;
    const std::pair<const char*, Provider*> kinds[] = {
        {"moderation", p.moderation.get()},       {"reranker", p.reranker.get()},
        {"generator", p.generator.get()},         {"postprocessor", p.postprocessor.get()},
        {"classifier", p.classifier.get()},       {"judge", p.judge.get()}};
    Json providers = Json::object();
    bool all = true;
    for (const auto& [name, provider] : kinds) {
      bool reachable = false;
      try {
        reachable = provider != nullptr && provider->Reachable();
      } catch (...) {
        reachable = false;
      }
      providers[name] = reachable;
      all = all && reachable;
    }
    return Ok(200, {{"status", all ? "ok" : "degraded"},
                    {"providers", providers},
                    {"votes", store_.VoteCount()},
                    {"corpus_documents", corpus_.size()}});
  });
}

struct HttpServer::Impl {
  ArenaService& service;
  httplib::Server server;
  std::thread thread;

  static void Send(httplib::Response& res, const ApiResponse& api) {
    res.status = api.status;
    res.set_content(api.body, "application/json");
  }

  static std::optional<std::string> UserHeader(const httplib::Request& req) {
    if (!req.has_header("X-User-Id")) return std::nullopt;
    return req.get_header_value("X-User-Id");
  }

  explicit Impl(ArenaService& s) : service(s) {
    server.Post("/api/questions", [this](const httplib::Request& req, httplib::Response& res) {
      Send(res, service.SubmitQuestion(req.body));
    });
    server.Get(R"(/api/battles/([^/]+))",
               [this](const httplib::Request& req, httplib::Response& res) {
                 Send(res, service.GetBattle(req.matches[1], UserHeader(req)));
               });
    server.Post("/api/votes", [this](const httplib::Request& req, httplib::Response& res) {
      Send(res, service.SubmitVote(req.body, UserHeader(req)));
    });
    server.Get("/api/leaderboard", [this](const httplib::Request& req, httplib::Response& res) {
      std::map<std::string, std::string> params;
      for (const auto& [k, v] : req.params) params[k] = v;
      Send(res, service.GetLeaderboard(params));
    });
    server.Get("/api/healthz", [this](const httplib::Request&, httplib::Response& res) {
      Send(res, service.Health());
    });
    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (!res.body.empty()) return;
      Send(res, MakeApiError(res.status == 0 ? 404 : res.status, api_code::kNotFound,
                             "no route for " + req.method + " " + req.path));
    });
    server.set_exception_handler(
        [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
          std::string message = "unexpected failure";
          try {
            std::rethrow_exception(ep);
          } catch (const std::exception& e) {
            message = e.what();
          } catch (...) {
          }
          Send(res, MakeApiError(500, api_code::kInternal, message));
        });
  }
};

HttpServer::HttpServer(ArenaService& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                              : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    Fail(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

void HttpServer::Run() {
  if (!impl_->server.listen_after_bind()) Fail(ErrorCode::kIo, "server stopped with an error");
}

int HttpServer::Start(const std::string& host, int port) {
  const int bound = Bind(host, port);
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void HttpServer::Stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace arena
