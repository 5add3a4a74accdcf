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

// Operator command line. Data goes to stdout (or --out), diagnostics to
// stderr as {"error": {...}} JSON. Exit codes: 0 ok, 1 internal, 2 usage,
// 3 data error, 4 provider error.

#include <arena/arena.h>
#include <pthread.h>

#include <CLI11.hpp>
#include <csignal>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include "json.hpp"
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using Json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitProvider = 4;

int ExitCodeFor(arena_status status) {
  switch (status) {
    case ARENA_OK: return kExitOk;
    case ARENA_INVALID_ARGUMENT: return kExitUsage;
    case ARENA_PROVIDER_UNAVAILABLE:
    case ARENA_GENERATION_TIMEOUT:
    case ARENA_MODERATION_DENIED: return kExitProvider;
    case ARENA_INTERNAL: return kExitInternal;
    default: return kExitData;
  }
}

void ReportError(const std::string& name, int code, const std::string& message) {
  std::cerr << Json{{"error", {{"status", name}, {"code", code}, {"message", message}}}}.dump()
            << "\n";
}

// Thrown to unwind with a library status.
struct Failure {
  arena_status status;
};

void Check(arena_status status) {
  if (status != ARENA_OK) {
    ReportError(arena_status_name(status), static_cast<int>(status), arena_last_error());
    throw Failure{status};
  }
}

struct OwnedString {
  char* text = nullptr;
  ~OwnedString() { arena_string_free(text); }
  std::string str() const { return text == nullptr ? std::string() : std::string(text); }
};

struct StoreHandle {
  arena_store* store = nullptr;
  explicit StoreHandle(const std::string& dir) { Check(arena_store_open(dir.c_str(), &store)); }
  ~StoreHandle() { arena_store_close(store); }
};

std::string ReadInput(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ReportError("IoError", ARENA_IO_ERROR, "cannot read " + path);
    throw Failure{ARENA_IO_ERROR};
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteOutput(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    ReportError("IoError", ARENA_IO_ERROR, "cannot write " + path);
    throw Failure{ARENA_IO_ERROR};
  }
}

// Flags shared by fit, bootstrap and leaderboard.
struct FitFlags {
  std::string data = "data";
  std::uint64_t seed = 0;
  bool styled = false;
  std::string style_path;
  std::string discipline;
  std::string category;
  std::string user;
  std::string from;
  std::string to;
  bool exclude_flagged = false;
  double alpha = 0.05;
  std::uint64_t deployment_seed = 0;
  int resamples = 0;
  int threads = 1;
  double ci_lower = 0.025;
  double ci_upper = 0.975;
  std::string out;

  void Register(CLI::App* cmd, bool with_bootstrap) {
    cmd->add_option("--data", data, "Data directory holding votes.jsonl and battles.jsonl")
        ->capture_default_str();
    cmd->add_option("--seed", seed, "Seed recorded in the output and used for resampling");
    cmd->add_flag("--styled", styled, "Fit style coefficients jointly");
    cmd->add_option("--style", style_path, "Style vectors (default <data>/style.jsonl)");
    cmd->add_option("--discipline", discipline, "Restrict to one discipline");
    cmd->add_option("--category", category, "Restrict to one category (code 1-6 or name)");
    cmd->add_option("--user", user, "Restrict to one user");
    cmd->add_option("--from", from, "Earliest vote time, YYYY-MM-DDTHH:MM:SSZ");
    cmd->add_option("--to", to, "Latest vote time, YYYY-MM-DDTHH:MM:SSZ");
    cmd->add_flag("--exclude-flagged", exclude_flagged, "Drop votes of flagged users");
    cmd->add_option("--alpha", alpha, "Anomaly significance for --exclude-flagged")
        ->capture_default_str();
    cmd->add_option("--deployment-seed", deployment_seed, "Checkpoint seed for anomaly checks");
    if (with_bootstrap) {
      cmd->add_option("--resamples", resamples, "Bootstrap resamples")->capture_default_str();
      cmd->add_option("--threads", threads, "Bootstrap worker threads")->capture_default_str();
      cmd->add_option("--ci-lower", ci_lower, "Lower interval quantile")->capture_default_str();
      cmd->add_option("--ci-upper", ci_upper, "Upper interval quantile")->capture_default_str();
    }
    cmd->add_option("--out", out, "Output file (default stdout)");
  }

  std::string Options() const {
    Json j{{"seed", seed},
           {"styled", styled},
           {"exclude_flagged", exclude_flagged},
           {"anomaly_alpha", alpha},
           {"deployment_seed", deployment_seed}};
    if (!style_path.empty()) j["style_path"] = style_path;
    if (!discipline.empty()) j["discipline"] = discipline;
    if (!category.empty()) j["category"] = category;
    if (!user.empty()) j["user_id"] = user;
    if (!from.empty()) j["from"] = from;
    if (!to.empty()) j["to"] = to;
    if (resamples > 0) {
      j["bootstrap_resamples"] = resamples;
      j["threads"] = threads;
      j["ci"] = {ci_lower, ci_upper};
    }
    return j.dump();
  }
};

sigset_t BlockStopSignals() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  return set;
}

Json JudgeFromFlag(const std::string& spec) {
  // id=mode[:seed]
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw CLI::ValidationError("--judge", "expected id=mode[:seed], got '" + spec + "'");
  }
  Json provider{{"type", "stub"}};
  std::string mode = spec.substr(eq + 1);
  if (const auto colon = mode.find(':'); colon != std::string::npos) {
    try {
      provider["seed"] = std::stoull(mode.substr(colon + 1));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--judge", "bad seed in '" + spec + "'");
    }
    mode = mode.substr(0, colon);
  }
  provider["mode"] = mode;
  return {{"id", spec.substr(0, eq)}, {"provider", provider}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arena operator tooling: ratings, anomaly checks, meta-evaluation, service."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(arena_version()));

  // fit / bootstrap / leaderboard
  FitFlags fit_flags;
  auto* fit = app.add_subcommand("fit", "Fit Bradley-Terry strengths to the vote log");
  fit_flags.Register(fit, /*with_bootstrap=*/false);

  FitFlags boot_flags;
  boot_flags.resamples = 100;
  auto* bootstrap = app.add_subcommand("bootstrap", "Fit plus bootstrap confidence intervals");
  boot_flags.Register(bootstrap, /*with_bootstrap=*/true);

  FitFlags board_flags;
  std::string board_format = "table";
  std::string board_import;
  auto* leaderboard = app.add_subcommand("leaderboard", "Render the leaderboard");
  board_flags.Register(leaderboard, /*with_bootstrap=*/true);
  leaderboard->add_option("--format", board_format, "json or table")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  leaderboard->add_option("--import", board_import,
                          "Render an existing leaderboard JSON file ('-' for stdin)");

  // online Elo
  std::string elo_data = "data";
  double elo_k = 32.0;
  std::string elo_out;
  auto* online = app.add_subcommand("online-elo", "Replay the log through sequential Elo");
  online->add_option("--data", elo_data, "Data directory")->capture_default_str();
  online->add_option("--k", elo_k, "K factor")->capture_default_str();
  online->add_option("--out", elo_out, "Output file (default stdout)");

  // anomaly
  std::string anomaly_data = "data";
  double anomaly_alpha = 0.05;
  std::uint64_t anomaly_seed = 0;
  bool flagged_only = false;
  std::string anomaly_out;
  auto* anomaly = app.add_subcommand("anomaly", "Per-user anomalous voting verdicts");
  anomaly->add_option("--data", anomaly_data, "Data directory")->capture_default_str();
  anomaly->add_option("--alpha", anomaly_alpha, "Significance level")->capture_default_str();
  anomaly->add_option("--deployment-seed", anomaly_seed, "Checkpoint seed");
  anomaly->add_flag("--flagged-only", flagged_only, "Only list flagged users");
  anomaly->add_option("--out", anomaly_out, "Output file (default stdout)");

  // build-benchmark
  std::string bench_data = "data";
  int per_discipline = 500;
  std::uint64_t bench_seed = 0;
  std::string bench_out;
  auto* build_benchmark =
      app.add_subcommand("build-benchmark", "Sample a balanced judge benchmark from votes");
  build_benchmark->add_option("--data", bench_data, "Data directory")->capture_default_str();
  build_benchmark->add_option("--per-discipline", per_discipline, "Items per discipline (even)")
      ->capture_default_str();
  build_benchmark->add_option("--seed", bench_seed, "Sampling seed");
  build_benchmark->add_option("--out", bench_out, "Output JSONL (default stdout)");

  // eval-judge
  std::string eval_benchmark;
  std::vector<std::string> eval_judges;
  std::string eval_judge_config;
  std::string eval_verdicts;
  bool eval_both_orders = false;
  int eval_parallelism = 1;
  bool eval_missing_as_wrong = false;
  std::string eval_format = "json";
  std::string eval_out;
  auto* eval_judge = app.add_subcommand("eval-judge", "Score judges against benchmark gold");
  eval_judge->add_option("--benchmark", eval_benchmark, "Benchmark JSONL")->required();
  eval_judge->add_option("--judge", eval_judges,
                         "Stub judge id=mode[:seed]; modes always_a, always_b, random, oracle, "
                         "more_citations");
  eval_judge->add_option("--judge-config", eval_judge_config,
                         "JSON array of {id, provider} judge definitions");
  eval_judge->add_option("--verdicts", eval_verdicts, "Precomputed verdicts JSONL");
  eval_judge->add_flag("--both-orders", eval_both_orders, "Also judge with sides swapped");
  eval_judge->add_option("--parallelism", eval_parallelism, "Concurrent judge calls")
      ->capture_default_str();
  eval_judge->add_flag("--missing-as-wrong", eval_missing_as_wrong,
                       "Count items without a verdict as wrong instead of failing");
  eval_judge->add_option("--format", eval_format, "json or table")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  eval_judge->add_option("--out", eval_out, "Output file (default stdout)");

  // ingest-corpus
  std::string ingest_data = "data";
  std::string ingest_corpus;
  auto* ingest = app.add_subcommand("ingest-corpus", "Load corpus documents into the store");
  ingest->add_option("--data", ingest_data, "Data directory")->capture_default_str();
  ingest->add_option("--corpus", ingest_corpus, "Corpus JSONL")->required();

  // serve
  std::string serve_config;
  std::string serve_data;
  std::string serve_host;
  int serve_port = -1;
  int serve_threshold = 0;
  double serve_alpha = 0.0;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service until SIGINT/SIGTERM");
  serve->add_option("--config", serve_config, "Service configuration JSON");
  serve->add_option("--data", serve_data, "Data directory (overrides config)");
  serve->add_option("--host", serve_host, "Bind address (overrides config)");
  serve->add_option("--port", serve_port, "Port, 0 for any free port (overrides config)");
  serve->add_option("--snapshot-threshold", serve_threshold,
                    "New votes before a leaderboard refit (overrides config)");
  serve->add_option("--alpha", serve_alpha, "Anomaly significance (overrides config)");

  // simulate
  int sim_models = 5;
  int sim_votes = 20000;
  std::uint64_t sim_seed = 7;
  std::vector<double> sim_strengths;
  double sim_tie = 0.0;
  double sim_length_gamma = 0.0;
  double sim_citation_gamma = 0.0;
  double sim_verbosity = 1.0;
  double sim_jitter = 0.5;
  double sim_citations = 4.0;
  int sim_users = 100;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "Generate a seeded synthetic vote log");
  simulate->add_option("--out", sim_out, "Output data directory")->required();
  simulate->add_option("--models", sim_models, "Number of models")->capture_default_str();
  simulate->add_option("--votes", sim_votes, "Number of votes")->capture_default_str();
  simulate->add_option("--seed", sim_seed, "Seed")->capture_default_str();
  simulate->add_option("--strengths", sim_strengths, "True strengths (default evenly spaced)");
  simulate->add_option("--tie-prob", sim_tie, "Probability a vote is a tie")->capture_default_str();
  simulate->add_option("--length-gamma", sim_length_gamma, "Style bias on length contrast")
      ->capture_default_str();
  simulate->add_option("--citation-gamma", sim_citation_gamma, "Style bias on citation contrast")
      ->capture_default_str();
  simulate->add_option("--verbosity-spread", sim_verbosity, "Spread of log verbosity")
      ->capture_default_str();
  simulate->add_option("--length-jitter", sim_jitter, "SD of log length noise")
      ->capture_default_str();
  simulate->add_option("--mean-citations", sim_citations, "Mean citations per response")
      ->capture_default_str();
  simulate->add_option("--users", sim_users, "Number of voters")->capture_default_str();

  // analytics
  std::string analytics_data = "data";
  std::string analytics_out_dir;
  int analytics_sample = 0;
  std::uint64_t analytics_seed = 0;
  std::string analytics_out;
  auto* analytics = app.add_subcommand("analytics", "Win-rate matrix and category histogram");
  analytics->add_option("--data", analytics_data, "Data directory")->capture_default_str();
  analytics->add_option("--svg-dir", analytics_out_dir, "Write SVG charts here");
  analytics->add_option("--sample", analytics_sample, "Battles sampled for the category chart");
  analytics->add_option("--seed", analytics_seed, "Sampling seed");
  analytics->add_option("--out", analytics_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    ReportError("UsageError", kExitUsage, e.what());
    return kExitUsage;
  }

  try {
    if (fit->parsed() || bootstrap->parsed()) {
      const FitFlags& flags = fit->parsed() ? fit_flags : boot_flags;
      StoreHandle store(flags.data);
      OwnedString out;
      const std::string options = flags.Options();
      Check(fit->parsed() ? arena_fit(store.store, options.c_str(), &out.text)
                          : arena_bootstrap(store.store, options.c_str(), &out.text));
      WriteOutput(flags.out, out.str());
    } else if (leaderboard->parsed()) {
      OwnedString board;
      if (!board_import.empty()) {
        const std::string text = ReadInput(board_import);
        Check(arena_leaderboard_render(text.c_str(), board_format.c_str(), &board.text));
        WriteOutput(board_flags.out, board.str());
      } else {
        StoreHandle store(board_flags.data);
        const std::string options = board_flags.Options();
        Check(arena_leaderboard(store.store, options.c_str(), &board.text));
        OwnedString rendered;
        Check(arena_leaderboard_render(board.text, board_format.c_str(), &rendered.text));
        WriteOutput(board_flags.out, rendered.str());
      }
    } else if (online->parsed()) {
      StoreHandle store(elo_data);
      OwnedString out;
      const std::string options = Json{{"k_factor", elo_k}}.dump();
      Check(arena_online_elo(store.store, options.c_str(), &out.text));
      WriteOutput(elo_out, out.str());
    } else if (anomaly->parsed()) {
      StoreHandle store(anomaly_data);
      OwnedString out;
      const std::string options =
          Json{{"alpha", anomaly_alpha}, {"deployment_seed", anomaly_seed}}.dump();
      Check(arena_anomaly(store.store, options.c_str(), &out.text));
      std::string text = out.str();
      if (flagged_only) {
        Json j = Json::parse(text);
        Json users = Json::array();
        for (const auto& u : j["users"]) {
          if (u.value("flagged", false)) users.push_back(u);
        }
        j["users"] = users;
        text = j.dump(2) + "\n";
      }
      WriteOutput(anomaly_out, text);
    } else if (build_benchmark->parsed()) {
      StoreHandle store(bench_data);
      OwnedString out;
      const std::string options =
          Json{{"per_discipline", per_discipline}, {"seed", bench_seed}}.dump();
      Check(arena_build_benchmark(store.store, options.c_str(), &out.text));
      WriteOutput(bench_out, out.str());
    } else if (eval_judge->parsed()) {
      const std::string benchmark = ReadInput(eval_benchmark);
      Json request{{"both_orders", eval_both_orders},
                   {"parallelism", eval_parallelism},
                   {"missing_as_wrong", eval_missing_as_wrong}};
      Json judges = Json::array();
      for (const auto& spec : eval_judges) judges.push_back(JudgeFromFlag(spec));
      if (!eval_judge_config.empty()) {
        Json configured;
        try {
          configured = Json::parse(ReadInput(eval_judge_config));
        } catch (const Json::exception& e) {
          ReportError("ParseError", ARENA_PARSE_ERROR, eval_judge_config + ": " + e.what());
          return kExitData;
        }
        for (const auto& j : configured) judges.push_back(j);
      }
      if (!judges.empty()) request["judges"] = judges;
      if (!eval_verdicts.empty()) {
        Json verdicts = Json::array();
        std::istringstream lines(ReadInput(eval_verdicts));
        std::string line;
        while (std::getline(lines, line)) {
          if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
          try {
            verdicts.push_back(Json::parse(line));
          } catch (const Json::exception& e) {
            ReportError("ParseError", ARENA_PARSE_ERROR, eval_verdicts + ": " + e.what());
            return kExitData;
          }
        }
        request["verdicts"] = verdicts;
      }
      if (judges.empty() && eval_verdicts.empty()) {
        ReportError("UsageError", kExitUsage, "give --judge, --judge-config or --verdicts");
        return kExitUsage;
      }
      OwnedString out;
      const std::string request_text = request.dump();
      Check(arena_eval_judges(benchmark.c_str(), request_text.c_str(), &out.text));
      const std::string text = out.str();
      WriteOutput(eval_out,
                  eval_format == "table" ? Json::parse(text)["table"].get<std::string>() : text);
    } else if (ingest->parsed()) {
      StoreHandle store(ingest_data);
      size_t added = 0;
      Check(arena_store_ingest_corpus(store.store, ingest_corpus.c_str(), &added));
      std::cout << Json{{"ingested", added}, {"data", ingest_data}}.dump() << "\n";
    } else if (serve->parsed()) {
      const sigset_t stop_signals = BlockStopSignals();
      Json overrides = Json::object();
      if (!serve_data.empty()) overrides["data_dir"] = serve_data;
      if (!serve_host.empty()) overrides["host"] = serve_host;
      if (serve_port >= 0) overrides["port"] = serve_port;
      if (serve_threshold > 0) overrides["snapshot_threshold"] = serve_threshold;
      if (serve_alpha > 0.0) overrides["anomaly_alpha"] = serve_alpha;
      arena_server* server = nullptr;
      const std::string overrides_text = overrides.dump();
      Check(arena_server_create(serve_config.empty() ? nullptr : serve_config.c_str(),
                                overrides_text.c_str(), &server));
      std::unique_ptr<arena_server, void (*)(arena_server*)> guard(server, arena_server_destroy);
      int port = 0;
      Check(arena_server_start(server, &port));
      OwnedString config;
      Check(arena_server_config(server, &config.text));
      const Json effective = Json::parse(config.str());
      std::cout << Json{{"listening", effective["host"].get<std::string>() + ":" +
                                          std::to_string(port)},
                        {"port", port}}
                       .dump()
                << std::endl;
      int signal_number = 0;
      sigwait(&stop_signals, &signal_number);
      Check(arena_server_stop(server));
      Check(arena_server_wait_idle(server));
    } else if (simulate->parsed()) {
      Json config{{"models", sim_models},
                  {"votes", sim_votes},
                  {"seed", sim_seed},
                  {"tie_prob", sim_tie},
                  {"length_gamma", sim_length_gamma},
                  {"citation_gamma", sim_citation_gamma},
                  {"verbosity_spread", sim_verbosity},
                  {"length_jitter", sim_jitter},
                  {"mean_citations", sim_citations},
                  {"users", sim_users}};
      if (!sim_strengths.empty()) config["strengths"] = sim_strengths;
      OwnedString out;
      const std::string config_text = config.dump();
      Check(arena_simulate(config_text.c_str(), sim_out.c_str(), &out.text));
      std::cout << out.str();
    } else if (analytics->parsed()) {
      StoreHandle store(analytics_data);
      Json options{{"sample", analytics_sample}, {"seed", analytics_seed}};
      if (!analytics_out_dir.empty()) options["out_dir"] = analytics_out_dir;
      OwnedString out;
      const std::string options_text = options.dump();
      Check(arena_analytics(store.store, options_text.c_str(), &out.text));
      WriteOutput(analytics_out, out.str());
    }
  } catch (const Failure& f) {
    return ExitCodeFor(f.status);
  } catch (const CLI::ValidationError& e) {
    ReportError("UsageError", kExitUsage, e.what());
    return kExitUsage;
  }
  return kExitOk;
}
