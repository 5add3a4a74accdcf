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

#include "arena/arena.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "core/analytics.hpp"
#include "core/anomaly.hpp"
#include "core/config.hpp"
#include "core/leaderboard.hpp"
#include "core/metaeval.hpp"
#include "core/ops.hpp"
#include "core/service.hpp"
#include "core/simulate.hpp"
#include "core/storage.hpp"

struct arena_store {
  explicit arena_store(const std::filesystem::path& dir) : store(dir) {}
  arena::DataStore store;
};

struct arena_server {
  std::unique_ptr<arena::ArenaService> service;
  std::unique_ptr<arena::HttpServer> http;
  bool started = false;
};

namespace {

using arena::ErrorCode;
using arena::Fail;
using arena::Json;
using arena::Require;

thread_local std::string g_last_error;

template <typename Body>
arena_status Guard(Body&& body) {
  g_last_error.clear();
  try {
    body();
    return ARENA_OK;
  } catch (const arena::Error& e) {
    g_last_error = e.what();
    return static_cast<arena_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const Json::exception& e) {
    g_last_error = e.what();
    return ARENA_PARSE_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown failure";
  }
  return ARENA_INTERNAL;
}

char* Duplicate(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

void SetOutput(char** out, const std::string& text) {
  Require(out != nullptr, "output pointer is null");
  *out = Duplicate(text);
}

void ClearOutput(char** out) {
  if (out != nullptr) *out = nullptr;
}

void RequireHandle(const void* handle) { Require(handle != nullptr, "handle is null"); }

Json ParseOptions(const char* text, std::initializer_list<std::string_view> allowed) {
  if (text == nullptr || *text == '\0') return Json::object();
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kParse, std::string("options are not valid JSON: ") + e.what());
  }
  Require(j.is_object(), "options must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      Fail(ErrorCode::kInvalidArgument, "unknown option '" + key + "'");
    }
  }
  return j;
}

template <typename T>
T Get(const Json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const Json::exception&) {
    Fail(ErrorCode::kInvalidArgument, std::string("option '") + key + "' has the wrong type");
  }
}

#define ARENA_FILTER_KEYS "discipline", "category", "user_id", "from", "to"

arena::VoteFilter FilterFromOptions(const Json& j) {
  arena::VoteFilter f;
  if (auto it = j.find("discipline"); it != j.end() && !it->is_null()) {
    f.discipline = arena::ParseDiscipline(it->get<std::string>());
    if (!f.discipline) Fail(ErrorCode::kInvalidArgument, "unknown discipline " + it->dump());
  }
  if (auto it = j.find("category"); it != j.end() && !it->is_null()) {
    if (it->is_number_integer()) {
      f.category = arena::CategoryFromCode(it->get<int>());
    } else if (it->is_string()) {
      for (int code = 1; code <= 6 && !f.category; ++code) {
        const auto c = *arena::CategoryFromCode(code);
        const auto name = it->get<std::string>();
        if (name == arena::ToString(c) || name == std::to_string(code)) f.category = c;
      }
    }
    if (!f.category) Fail(ErrorCode::kInvalidArgument, "unknown category " + it->dump());
  }
  if (auto it = j.find("user_id"); it != j.end() && !it->is_null()) {
    f.user_id = it->get<std::string>();
  }
  if (auto it = j.find("from"); it != j.end() && !it->is_null()) {
    f.from = arena::ParseTimestamp(it->get<std::string>());
  }
  if (auto it = j.find("to"); it != j.end() && !it->is_null()) {
    f.to = arena::ParseTimestamp(it->get<std::string>());
  }
  return f;
}

struct FitRequest {
  arena::FitOptions options;
  std::optional<arena::StyleByBattle> style;
};

FitRequest FitRequestFromOptions(const Json& j, const arena::DataStore& store,
                                 int default_resamples) {
  FitRequest r;
  auto& o = r.options;
  o.fit.seed = Get<std::uint64_t>(j, "seed", 0);
  o.fit.l2_lambda = Get<double>(j, "l2_lambda", o.fit.l2_lambda);
  o.fit.tolerance = Get<double>(j, "tolerance", o.fit.tolerance);
  o.fit.max_iterations = Get<int>(j, "max_iterations", o.fit.max_iterations);
  o.styled = Get<bool>(j, "styled", false);
  o.filter = FilterFromOptions(j);
  o.exclude_flagged = Get<bool>(j, "exclude_flagged", false);
  o.anomaly.alpha_sig = Get<double>(j, "anomaly_alpha", o.anomaly.alpha_sig);
  o.anomaly.deployment_seed = Get<std::uint64_t>(j, "deployment_seed", 0);
  o.anomaly.Validate();
  o.bootstrap_resamples = Get<int>(j, "bootstrap_resamples", default_resamples);
  o.bootstrap.threads = Get<int>(j, "threads", 1);
  if (auto it = j.find("ci"); it != j.end() && !it->is_null()) {
    Require(it->is_array() && it->size() == 2, "ci must be [lower_q, upper_q]");
    o.bootstrap.lower_quantile = (*it)[0].get<double>();
    o.bootstrap.upper_quantile = (*it)[1].get<double>();
  }
  if (o.styled) {
    std::filesystem::path path = Get<std::string>(j, "style_path", "");
    if (path.empty()) path = store.dir() / "style.jsonl";
    if (!std::filesystem::exists(path)) {
      Fail(ErrorCode::kDimensionMismatch, "styled fit needs style vectors; missing " +
                                              path.string());
    }
    r.style = arena::ReadStyleFile(path);
  }
  return r;
}

#define ARENA_FIT_KEYS                                                                        \
  "seed", "l2_lambda", "tolerance", "max_iterations", "styled", "style_path",                 \
      "exclude_flagged", "anomaly_alpha", "deployment_seed", "bootstrap_resamples", "threads", \
      "ci", ARENA_FILTER_KEYS

Json FitJson(arena_store* s, const char* options_json, int default_resamples) {
  RequireHandle(s);
  const Json j = ParseOptions(options_json, {ARENA_FIT_KEYS});
  const FitRequest request = FitRequestFromOptions(j, s->store, default_resamples);
  const auto loaded = s->store.LoadVotes();
  const auto outcome = arena::RunFit(loaded.votes, s->store,
                                     request.style ? &*request.style : nullptr, request.options);
  Json out = arena::FitToJson(outcome);
  out["diagnostics"] = arena::FitDiagnosticsToJson(outcome);
  return out;
}

Json CorruptToJson(const std::vector<arena::CorruptRecordInfo>& corrupt) {
  Json out = Json::array();
  for (const auto& c : corrupt) {
    out.push_back({{"file", c.file}, {"seq", c.seq}, {"line", c.line}, {"message", c.message}});
  }
  return out;
}

template <typename T>
std::vector<T> DecodeJsonLines(const char* text, const char* what) {
  Require(text != nullptr, std::string(what) + " text is null");
  std::vector<T> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (arena::Trim(line).empty()) continue;
    try {
      out.push_back(arena::DecodeLine<T>(line));
    } catch (const arena::Error& e) {
      Fail(e.code(), std::string(what) + " line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

arena::SimulationConfig SimulationFromJson(const Json& j) {
  arena::SimulationConfig c;
  c.models = Get<int>(j, "models", c.models);
  c.votes = Get<int>(j, "votes", c.votes);
  c.seed = Get<std::uint64_t>(j, "seed", c.seed);
  c.strengths = Get<std::vector<double>>(j, "strengths", c.strengths);
  c.tie_prob = Get<double>(j, "tie_prob", c.tie_prob);
  c.length_gamma = Get<double>(j, "length_gamma", c.length_gamma);
  c.citation_gamma = Get<double>(j, "citation_gamma", c.citation_gamma);
  c.verbosity_spread = Get<double>(j, "verbosity_spread", c.verbosity_spread);
  c.length_jitter = Get<double>(j, "length_jitter", c.length_jitter);
  c.mean_citations = Get<double>(j, "mean_citations", c.mean_citations);
  c.users = Get<int>(j, "users", c.users);
  c.Validate();
  return c;
}

}  // namespace

extern "C" {

const char* arena_version(void) { return "1.0.0"; }

const char* arena_status_name(arena_status status) {
  if (status == ARENA_OK) return "Ok";
  static thread_local std::string name;
  name = std::string(arena::ErrorCodeName(static_cast<ErrorCode>(status)));
  return name.c_str();
}

const char* arena_last_error(void) { return g_last_error.c_str(); }

void arena_string_free(char* text) { std::free(text); }

arena_status arena_store_open(const char* dir, arena_store** out) {
  if (out != nullptr) *out = nullptr;
  return Guard([&] {
    Require(dir != nullptr && *dir != '\0', "store directory is empty");
    Require(out != nullptr, "output pointer is null");
    *out = new arena_store(dir);
  });
}

void arena_store_close(arena_store* store) { delete store; }

arena_status arena_store_recovery(arena_store* s, char** out) {
  ClearOutput(out);
  return Guard([&] {
    RequireHandle(s);
    const auto& r = s->store.recovery();
    Json torn = Json::object();
    for (const auto& [file, bytes] : r.torn_bytes) torn[file] = bytes;
    SetOutput(out, Json{{"torn_bytes", torn}, {"corrupt", CorruptToJson(r.corrupt)}}.dump());
  });
}

arena_status arena_store_add_battles(arena_store* s, const char* battles_jsonl) {
  return Guard([&] {
    RequireHandle(s);
    const auto battles = DecodeJsonLines<arena::Battle>(battles_jsonl, "battles");
    s->store.AddBattles(battles);
  });
}

arena_status arena_store_append_votes(arena_store* s, const char* votes_jsonl,
                                      int64_t* last_seq) {
  return Guard([&] {
    RequireHandle(s);
    const auto votes = DecodeJsonLines<arena::Vote>(votes_jsonl, "votes");
    const auto seqs = s->store.AppendVotes(votes);
    if (last_seq != nullptr) *last_seq = seqs.empty() ? s->store.VoteCount() : seqs.back();
  });
}

arena_status arena_store_load_votes(arena_store* s, const char* filter_json, char** out) {
  ClearOutput(out);
  return Guard([&] {
    RequireHandle(s);
    const Json j = ParseOptions(filter_json, {ARENA_FILTER_KEYS});
    const auto loaded = s->store.LoadVotes(FilterFromOptions(j));
    SetOutput(out, Json{{"votes", loaded.votes},
                        {"seq", loaded.seq},
                        {"corrupt", CorruptToJson(loaded.corrupt)}}
                       .dump());
  });
}

arena_status arena_store_vote_count(arena_store* s, int64_t* out) {
  return Guard([&] {
    RequireHandle(s);
    Require(out != nullptr, "output pointer is null");
    *out = s->store.VoteCount();
  });
}

arena_status arena_store_ingest_corpus(arena_store* s, const char* corpus_path, size_t* added) {
  return Guard([&] {
    RequireHandle(s);
    Require(corpus_path != nullptr, "corpus path is null");
    const auto docs = arena::ReadCorpusFile(corpus_path);
    const std::size_t n = s->store.IngestCorpus(docs);
    if (added != nullptr) *added = n;
  });
}

arena_status arena_fit(arena_store* s, const char* options_json, char** out) {
  ClearOutput(out);
  return Guard([&] { SetOutput(out, FitJson(s, options_json, 0).dump(2) + "\n"); });
}

arena_status arena_bootstrap(arena_store* s, const char* options_json, char** out) {
  ClearOutput(out);
  return Guard([&] { SetOutput(out, FitJson(s, options_json, 100).dump(2) + "\n"); });
}

arena_status arena_leaderboard(arena_store* s, const char* options_json, char** out) {
  ClearOutput(out);
  return Guard([&] {
    RequireHandle(s);
    const Json j = ParseOptions(options_json, {ARENA_FIT_KEYS});
    const FitRequest request = FitRequestFromOptions(j, s->store, 0);
    const auto loaded = s->store.LoadVotes();
    const auto board =
        arena::ComputeLeaderboard(loaded.votes, s->store,
                                  request.style ? &*request.style : nullptr, request.options);
    SetOutput(out, arena::LeaderboardToJson(board));
  });
}

arena_status arena_leaderboard_render(const char* leaderboard_json, const char* format,
                                      char** out) {
  ClearOutput(out);
  return Guard([&] {
    Require(leaderboard_json != nullptr, "leaderboard text is null");
    const std::string fmt = format == nullptr ? "json" : format;
    const auto board = arena::LeaderboardFromJson(leaderboard_json);
    if (fmt == "json") {
      SetOutput(out, arena::LeaderboardToJson(board));
    } else if (fmt == "table") {
      SetOutput(out, arena::RenderLeaderboardTable(board));
    } else {
      Fail(ErrorCode::kInvalidArgument, "unknown format '" + fmt + "' (json|table)");
    }
  });
}

arena_status arena_online_elo(arena_store* s, const char* options_json, char** out) {
  ClearOutput(out);
  return Guard([&] {
    RequireHandle(s);
    const Json j = ParseOptions(options_json, {"k_factor", ARENA_FILTER_KEYS});
    arena::OnlineEloState state;
    state.k_factor = Get<double>(j, "k_factor", state.k_factor);
    Require(state.k_factor > 0.0, "k_factor must be positive");
    const auto loaded = s->store.LoadVotes(FilterFromOptions(j));
    int used = 0;
    for (const auto& v : loaded.votes) {
      const arena::Battle* b = s->store.FindBattle(v.battle_id);
      if (b == nullptr) Fail(ErrorCode::kUnknownBattle, "vote references unknown battle " + v.battle_id);
      state.Register(b->model_first);
      state.Register(b->model_second);
      double outcome = 0.5;
      if (v.winner == arena::Winner::kFirst) outcome = 1.0;
      if (v.winner == arena::Winner::kSecond) outcome = 0.0;
      state = arena::OnlineEloUpdate(state, b->model_first, b->model_second, outcome);
      ++used;
    }
    std::vector<std::pair<std::string, double>> ratings(state.ratings.begin(),
                                                        state.ratings.end());
    std::stable_sort(ratings.begin(), ratings.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    Json rows = Json::array();
    for (const auto& [model, elo] : ratings) rows.push_back({{"model", model}, {"elo", elo}});
    SetOutput(out, Json{{"ratings", rows}, {"k_factor", state.k_factor}, {"n_votes", used}}
                           .dump(2) + "\n");
  });
}

arena_status arena_expected_score(double rating_i, double rating_j, double* out) {
  return Guard([&] {
    Require(out != nullptr, "output pointer is null");
    *out = arena::ExpectedScore(rating_i, rating_j);
  });
}

arena_status arena_anomaly(arena_store* s, const char* options_json, char** out) {
  ClearOutput(out);
  return Guard([&] {
    RequireHandle(s);
    const Json j = ParseOptions(options_json, {"alpha", "deployment_seed", "checkpoints",
                                               "range_low", "range_high"});
    arena::AnomalyConfig config;
    config.alpha_sig = Get<double>(j, "alpha", config.alpha_sig);
    config.deployment_seed = Get<std::uint64_t>(j, "deployment_seed", 0);
    config.checkpoint_count = Get<int>(j, "checkpoints", config.checkpoint_count);
    config.range_low = Get<int>(j, "range_low", config.range_low);
    config.range_high = Get<int>(j, "range_high", config.range_high);
    config.Validate();
    const auto loaded = s->store.LoadVotes();
    Json users = Json::array();
    Json flagged = Json::array();
    for (const auto& v : arena::EvaluateAllUsers(loaded.votes, s->store, config)) {
      users.push_back(arena::VerdictToJson(v));
      if (v.verdict.flagged) flagged.push_back(v.user_id);
    }
    const Json config_json{{"alpha", config.alpha_sig},
                           {"deployment_seed", config.deployment_seed},
                           {"checkpoints", config.checkpoint_count},
                           {"range_low", config.range_low},
                           {"range_high", config.range_high}};
    SetOutput(out, Json{{"config", config_json},
                        {"seed", config.deployment_seed},
                        {"config_hash", arena::ConfigHash(config_json)},
                        {"users", users},
                        {"flagged", flagged}}
                           .dump(2) + "\n");
  });
}

arena_status arena_chi2_quantile(int df, double q, double* out) {
  return Guard([&] {
    Require(out != nullptr, "output pointer is null");
    *out = arena::Chi2Quantile(df, q);
  });
}

arena_status arena_build_benchmark(arena_store* s, const char* options_json, char** out) {
  ClearOutput(out);
  return Guard([&] {
    RequireHandle(s);
    const Json j = ParseOptions(options_json, {"per_discipline", "seed"});
    arena::BenchmarkOptions options;
    options.per_discipline = Get<int>(j, "per_discipline", options.per_discipline);
    options.seed = Get<std::uint64_t>(j, "seed", 0);
    const auto loaded = s->store.LoadVotes();
    const arena::DataStore& store = s->store;
    const arena::ResponseTextSource texts =
        [&store](const arena::Battle& b) -> std::optional<std::pair<std::string, std::string>> {
      auto responses = store.LoadResponses(b.battle_id);
      if (!responses) return std::nullopt;
      return std::make_pair(responses->first.normalized_text, responses->second.normalized_text);
    };
    const auto items = arena::BuildBenchmark(loaded.votes, s->store, texts, options);
    std::string text;
    for (const auto& item : items) text += arena::EncodeLine(item) + "\n";
    SetOutput(out, text);
  });
}

arena_status arena_eval_judges(const char* benchmark_jsonl, const char* request_json,
                               char** out) {
  ClearOutput(out);
  return Guard([&] {
    const Json j = ParseOptions(request_json, {"judges", "verdicts", "both_orders", "parallelism",
                                               "missing_as_wrong"});
    const auto items = DecodeJsonLines<arena::BenchmarkItem>(benchmark_jsonl, "benchmark");
    const bool both_orders = Get<bool>(j, "both_orders", false);
    const int parallelism = Get<int>(j, "parallelism", 1);
    Require(parallelism >= 1, "parallelism must be >= 1");
    std::vector<arena::JudgeVerdict> verdicts;
    if (auto it = j.find("verdicts"); it != j.end() && !it->is_null()) {
      verdicts = arena::Decode<std::vector<arena::JudgeVerdict>>(*it);
    }
    if (auto it = j.find("judges"); it != j.end() && !it->is_null()) {
      Require(it->is_array(), "judges must be an array");
      for (const auto& spec : *it) {
        const std::string id = spec.at("id").get<std::string>();
        Json provider = spec.value("provider", Json{{"type", "stub"}});
        if (provider.value("type", std::string("stub")) == "stub" &&
            provider.value("mode", std::string()) == "oracle" && !provider.contains("gold")) {
          Json gold = Json::object();
          for (const auto& item : items) gold[item.item_id] = item.gold;
          provider["gold"] = gold;
        }
        auto judge = arena::MakeProvider(arena::ProviderKind::kJudge, provider);
        auto produced = arena::RunJudgeOnItems(*judge, id, items, parallelism, both_orders);
        verdicts.insert(verdicts.end(), produced.begin(), produced.end());
      }
    }
    Require(!verdicts.empty() || items.empty(), "give judges or verdicts to score");
    const auto report =
        arena::ScoreJudges(verdicts, items, Get<bool>(j, "missing_as_wrong", false));
    SetOutput(out, Json{{"report", arena::EvalReportToJson(report)},
                        {"table", arena::RenderEvalTable(report)},
                        {"verdicts", verdicts}}
                           .dump(2) + "\n");
  });
}

arena_status arena_simulate(const char* config_json, const char* out_dir, char** out) {
  ClearOutput(out);
  return Guard([&] {
    Require(out_dir != nullptr && *out_dir != '\0', "output directory is empty");
    const Json j = ParseOptions(config_json,
                                {"models", "votes", "seed", "strengths", "tie_prob",
                                 "length_gamma", "citation_gamma", "verbosity_spread",
                                 "length_jitter", "mean_citations", "users"});
    const arena::SimulationConfig config = SimulationFromJson(j);
    const std::filesystem::path dir = out_dir;
    arena::DataStore store(dir);
    if (store.VoteCount() > 0 || !store.Battles().empty()) {
      Fail(ErrorCode::kInvalidArgument, dir.string() + " already holds a vote log");
    }
    const arena::SimulatedLog log = arena::Simulate(config);
    store.AddBattles(log.battles);
    store.AppendVotes(log.votes);
    arena::WriteFileAtomic(dir / "style.jsonl", arena::StyleToJsonl(log.style));
    arena::WriteFileAtomic(dir / "truth.json", arena::TruthToJson(config, log).dump(2) + "\n");
    SetOutput(out, Json{{"out_dir", dir.string()},
                        {"votes", log.votes.size()},
                        {"battles", log.battles.size()},
                        {"seed", config.seed},
                        {"config_hash", arena::ConfigHash(config.ToJson())}}
                           .dump(2) + "\n");
  });
}

arena_status arena_analytics(arena_store* s, const char* options_json, char** out) {
  ClearOutput(out);
  return Guard([&] {
    RequireHandle(s);
    const Json j = ParseOptions(options_json, {"out_dir", "sample", "seed"});
    const auto loaded = s->store.LoadVotes();
    const auto rates = arena::ComputeWinRates(loaded.votes, s->store);

    std::map<std::string, arena::QuestionCategory> by_battle;
    for (const auto& v : loaded.votes) {
      if (v.category) by_battle.emplace(v.battle_id, *v.category);
    }
    std::vector<arena::QuestionCategory> labels;
    for (const auto& [battle, category] : by_battle) labels.push_back(category);
    const int sample = Get<int>(j, "sample", 0);
    Require(sample >= 0, "sample must be >= 0");
    const std::uint64_t seed = Get<std::uint64_t>(j, "seed", 0);
    if (sample > 0 && static_cast<std::size_t>(sample) < labels.size()) {
      std::mt19937_64 rng(seed);
      std::shuffle(labels.begin(), labels.end(), rng);
      labels.resize(sample);
    }
    const auto histogram = arena::CategoryHistogram(labels);
    Json categories = Json::object();
    for (const auto& [category, count] : histogram) {
      categories[std::string(arena::ToString(category))] = count;
    }
    const std::string out_dir = Get<std::string>(j, "out_dir", "");
    Json written = Json::array();
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      const auto win_path = std::filesystem::path(out_dir) / "win_rates.svg";
      const auto cat_path = std::filesystem::path(out_dir) / "categories.svg";
      arena::WriteFileAtomic(win_path, arena::RenderWinRateSvg(rates));
      arena::WriteFileAtomic(cat_path, arena::RenderCategorySvg(histogram));
      written = {win_path.string(), cat_path.string()};
    }
    SetOutput(out, Json{{"win_rates", arena::WinRatesToJson(rates)},
                        {"categories", categories},
                        {"sampled_battles", labels.size()},
                        {"seed", seed},
                        {"files", written}}
                           .dump(2) + "\n");
  });
}

arena_status arena_server_create(const char* config_path, const char* overrides_json,
                                 arena_server** out) {
  if (out != nullptr) *out = nullptr;
  return Guard([&] {
    Require(out != nullptr, "output pointer is null");
    std::optional<std::filesystem::path> path;
    if (config_path != nullptr && *config_path != '\0') path = config_path;
    arena::ServiceConfig config = arena::LoadServiceConfig(path);
    if (overrides_json != nullptr && *overrides_json != '\0') {
      Json merged = config.ToJson();
      Json overrides;
      try {
        overrides = Json::parse(overrides_json);
      } catch (const Json::exception& e) {
        Fail(ErrorCode::kParse, std::string("overrides are not valid JSON: ") + e.what());
      }
      Require(overrides.is_object(), "overrides must be a JSON object");
      for (const auto& [key, value] : overrides.items()) merged[key] = value;
      config = arena::ServiceConfig::FromJson(merged);
    }
    auto server = std::make_unique<arena_server>();
    server->service = std::make_unique<arena::ArenaService>(config);
    server->http = std::make_unique<arena::HttpServer>(*server->service);
    *out = server.release();
  });
}

arena_status arena_server_start(arena_server* server, int* bound_port) {
  return Guard([&] {
    RequireHandle(server);
    Require(!server->started, "server already started");
    const auto& config = server->service->config();
    const int port = server->http->Start(config.host, config.port);
    server->started = true;
    if (bound_port != nullptr) *bound_port = port;
  });
}

arena_status arena_server_stop(arena_server* server) {
  return Guard([&] {
    RequireHandle(server);
    server->http->Stop();
    server->started = false;
  });
}

arena_status arena_server_wait_idle(arena_server* server) {
  return Guard([&] {
    RequireHandle(server);
    server->service->WaitIdle();
  });
}

arena_status arena_server_config(arena_server* server, char** out) {
  ClearOutput(out);
  return Guard([&] {
    RequireHandle(server);
    SetOutput(out, server->service->config().ToJson().dump(2) + "\n");
  });
}

void arena_server_destroy(arena_server* server) {
  if (server == nullptr) return;
  try {
    server->http->Stop();
  } catch (...) {
  }
  delete server;
}

}  // extern "C"
