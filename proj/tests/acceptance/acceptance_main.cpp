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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "core/analytics.hpp"
#include "core/anomaly.hpp"
#include "core/config.hpp"
#include "core/leaderboard.hpp"
#include "core/metaeval.hpp"
#include "core/pipeline.hpp"
#include "core/postprocess.hpp"
#include "core/providers.hpp"
#include "core/rating.hpp"
#include "core/retrieval.hpp"
#include "core/simulate.hpp"
#include "support/test_support.hpp"

namespace arena {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

int Threads() { return std::max(1u, std::thread::hardware_concurrency()); }

SimulationConfig RecoveryConfig(int votes, std::uint64_t seed) {
  SimulationConfig sim;
  sim.models = 5;
  sim.votes = votes;
  sim.seed = seed;
  sim.strengths = {0.0, 0.25, 0.5, 0.75, 1.0};
  return sim;
}

Outcome BtRecovery() {
  const auto start = Clock::now();
  const auto log = Simulate(RecoveryConfig(20000, 7));
  InMemoryBattles battles(log.battles);
  const auto pool = ModelPoolFromVotes(log.votes, battles);
  const auto fit = FitBt(EncodeBattles(log.votes, battles, pool), {});
  const auto rates = ComputeWinRates(log.votes, battles);
  const double seconds = SecondsSince(start);

  double worst = 0.0;
  int pairs = 0;
  for (std::size_t i = 0; i < rates.models.size(); ++i) {
    for (std::size_t j = i + 1; j < rates.models.size(); ++j) {
      const auto empirical = rates.Rate(i, j);
      if (!empirical) return {false, "pair without decisive votes"};
      const double fitted = ExpectedScore(fit.EloOf(rates.models[i]), fit.EloOf(rates.models[j]));
      worst = std::max(worst, std::abs(fitted - *empirical));
      ++pairs;
    }
  }
  return {pairs == 10 && worst <= 0.02 && seconds < 10.0,
          Fmt("%d pairs, max |fitted - empirical| = %.4f (<= 0.02), %.2f s (< 10 s)", pairs,
              worst, seconds)};
}

Outcome ScaleConsistency() {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal(0.0, 1.5);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::vector<double> beta = {normal(rng), normal(rng), normal(rng)};
    const auto elo = ToElo(beta);
    worst = std::max(worst,
                     std::abs(Sigmoid(beta[0] - beta[1]) - ExpectedScore(elo[0], elo[1], 400.0)));
  }
  return {worst <= 1e-9, Fmt("100 random pairs, max deviation %.3g (<= 1e-9)", worst)};
}

Outcome TieHandling() {
  InMemoryBattles battles;
  std::vector<Vote> votes;
  for (int i = 0; i < 200; ++i) {
    Battle b = testing::MakeBattle("t" + std::to_string(i), i % 2 ? "m1" : "m2",
                                   i % 2 ? "m2" : "m1");
    battles.Add(b);
    votes.push_back(testing::MakeVote(b, "u" + std::to_string(i), Winner::kTie));
  }
  const auto pool = ModelPoolFromVotes(votes, battles);
  const auto fit = FitBt(EncodeBattles(votes, battles, pool), {});
  const double gap = std::abs(fit.EloOf("m1") - fit.EloOf("m2"));
  return {gap < 1.0, Fmt("|delta Elo| = %.3g (< 1)", gap)};
}

Outcome StyleControl() {
  SimulationConfig sim;
  sim.models = 5;
  sim.votes = 20000;
  sim.seed = 21;
  sim.strengths = std::vector<double>(5, 0.0);
  sim.length_gamma = 1.0;
  const auto log = Simulate(sim);
  InMemoryBattles battles(log.battles);
  const auto pool = ModelPoolFromVotes(log.votes, battles);
  const auto styled = FitBtStyled(EncodeBattles(log.votes, battles, pool, &log.style), {});
  const auto plain = FitBt(EncodeBattles(log.votes, battles, pool), {});
  auto max_abs = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };
  const double gamma = styled.gamma ? (*styled.gamma)[0] : 0.0;
  const double controlled = max_abs(styled.beta);
  const double uncontrolled = max_abs(plain.beta);
  return {gamma > 0.0 && controlled < 0.1 && uncontrolled >= 5.0 * controlled,
          Fmt("gamma_length = %.3f (> 0), max|beta| controlled %.4f (< 0.1), uncontrolled "
              "%.4f (>= 5x)",
              gamma, controlled, uncontrolled)};
}

double MeanWidth(const BootstrapResult& r) {
  double total = 0.0;
  for (const auto& m : r.intervals) total += m.upper - m.lower;
  return total / static_cast<double>(r.intervals.size());
}

Outcome Bootstrap() {
  BootstrapOptions options;
  options.resamples = 100;
  options.threads = Threads();
  BtFitConfig config;
  config.seed = 5;

  auto run = [&](int votes, std::uint64_t seed, bool* covered) {
    const auto log = Simulate(RecoveryConfig(votes, seed));
    InMemoryBattles battles(log.battles);
    const auto pool = ModelPoolFromVotes(log.votes, battles);
    const auto ci = BootstrapCi(log.votes, battles, pool, nullptr, config, options);
    *covered = std::all_of(ci.intervals.begin(), ci.intervals.end(), [](const auto& m) {
      return m.lower <= m.point && m.point <= m.upper;
    });
    return MeanWidth(ci);
  };
  bool covered_large = false;
  bool covered_small = false;
  const double wide = run(5000, 7, &covered_small);
  const double narrow = run(20000, 7, &covered_large);
  const double ratio = wide / narrow;
  return {covered_large && covered_small && ratio >= 1.6 && ratio <= 2.6,
          Fmt("point inside CI for all models: %s; width(n=5000)/width(4n) = %.3f (in [1.6, 2.6])",
              covered_large && covered_small ? "yes" : "no", ratio)};
}

Outcome AnomalyFixtures() {
  const double p = EmpiricalP(std::vector<double>{1, 1, 0.5, 0}, 1.0);
  const double m = FisherStatistic(std::vector<double>{0.6});
  const double q = Chi2Quantile(2, 0.99);
  return {p == 0.6 && std::abs(m - 1.02165) <= 1e-5 && std::abs(q - 9.21034) <= 1e-5,
          Fmt("empirical_p = %.17g (== 0.6), fisher = %.6f, chi2(2, 0.99) = %.6f", p, m, q)};
}

// Population: on every action the first-shown model loses with
// probability 0.9. The contrarian always prefers it; the honest user draws
// from the population distribution.
Outcome AnomalyPowerSize() {
  const auto start = Clock::now();
  const std::vector<Action> actions = {{"m1", "m2"}, {"m2", "m3"}, {"m3", "m1"}, {"m1", "m4"}};
  AnomalyConfig config;
  constexpr int kRuns = 1000;
  constexpr int kSessionVotes = 100;
  constexpr int kHistoryPerAction = 250;
  int contrarian_flagged = 0;
  int honest_flagged = 0;
  for (int run = 0; run < kRuns; ++run) {
    std::mt19937_64 rng(MixSeed(2024, run));
    std::bernoulli_distribution population_first_loses(0.9);
    auto draw = [&] { return population_first_loses(rng) ? 0.0 : 1.0; };
    RatingHistory history;
    for (const auto& a : actions) {
      for (int k = 0; k < kHistoryPerAction; ++k) history.Add(a, draw());
    }
    UserSession contrarian{"contrarian-" + std::to_string(run), {}};
    UserSession honest{"honest-" + std::to_string(run), {}};
    for (int j = 0; j < kSessionVotes; ++j) {
      const Action& a = actions[j % actions.size()];
      contrarian.ratings.push_back({a, 1.0});
      honest.ratings.push_back({a, draw()});
    }
    if (EvaluateUser(contrarian, history, config).flagged) ++contrarian_flagged;
    if (EvaluateUser(honest, history, config).flagged) ++honest_flagged;
  }
  const double power = static_cast<double>(contrarian_flagged) / kRuns;
  const double size = static_cast<double>(honest_flagged) / kRuns;
  const double seconds = SecondsSince(start);
  const double size_limit = 1.5 * config.alpha_sig;
  return {power >= 0.95 && size <= size_limit && seconds < 30.0,
          Fmt("contrarian flagged %.3f (>= 0.95), honest flagged %.3f (<= %.3f), %.2f s (< 30 s)",
              power, size, size_limit, seconds)};
}

Outcome OnlineElo() {
  OnlineEloState s;
  s.Register("i");
  s.Register("j");
  const auto win = OnlineEloUpdate(s, "i", "j", 1.0);
  const auto tie = OnlineEloUpdate(s, "i", "j", 0.5);
  const bool ok = win.ratings.at("i") == 1016.0 && win.ratings.at("j") == 984.0 &&
                  tie.ratings.at("i") == 1000.0 && tie.ratings.at("j") == 1000.0;
  return {ok, Fmt("win -> (%.1f, %.1f), tie -> (%.1f, %.1f)", win.ratings.at("i"),
                  win.ratings.at("j"), tie.ratings.at("i"), tie.ratings.at("j"))};
}

Outcome PipelineDeterminism() {
  CorpusIndex corpus(testing::SyntheticCorpus(200));
  PipelineContext context;
  context.providers = ProviderSet::Stubs();
  context.corpus = &corpus;
  context.pool = DefaultModelPool();
  context.clock = [] { return testing::At(0); };
  const std::string question = "learning methods for qubit problems";
  std::mt19937_64 rng_a(314);
  std::mt19937_64 rng_b(314);
  const auto a = RunBattle(question, Discipline::kNaturalScience, context, rng_a);
  const auto b = RunBattle(question, Discipline::kNaturalScience, context, rng_b);
  const bool identical = BattleRecordToJson(a).dump() == BattleRecordToJson(b).dump();
  const auto& r = a.retrieval;
  const bool caps = r.snippet_candidates <= 40 && r.abstract_candidates <= 20;
  return {identical && r.contexts.size() == 30 && caps,
          Fmt("byte-identical: %s; contexts = %zu (== 30); candidates %d snippets (<= 40), "
              "%d abstracts (<= 20)",
              identical ? "yes" : "no", r.contexts.size(), r.snippet_candidates,
              r.abstract_candidates)};
}

Outcome Postprocessor() {
  const auto cases = testing::ReadJsonLines(testing::FixturePath("postprocess_cases.jsonl"));
  if (cases.empty()) return {false, "no relocation cases"};
  const std::string input = cases[0]["input"];
  const std::string expected = cases[0]["expected"];
  const bool relocated = NormalizeResponseText(input) == expected;
  int texts = 0;
  int stable = 0;
  for (const char* name :
       {"postprocess_cases.jsonl", "postprocess_corpus.jsonl", "citation_counts.jsonl"}) {
    for (const auto& c : testing::ReadJsonLines(testing::FixturePath(name))) {
      const std::string text = c.contains("input") ? c["input"] : c["text"];
      const std::string once = NormalizeResponseText(text);
      ++texts;
      if (NormalizeResponseText(once) == once) ++stable;
    }
  }
  return {relocated && stable == texts,
          Fmt("relocation example verbatim: %s; idempotent on %d/%d fixture texts",
              relocated ? "yes" : "no", stable, texts)};
}

struct BenchmarkFixture {
  SimulatedLog log;
  InMemoryBattles battles;
  std::vector<BenchmarkItem> items;
};

const BenchmarkFixture& Benchmark() {
  static const BenchmarkFixture fixture = [] {
    BenchmarkFixture f;
    SimulationConfig sim;
    sim.votes = 20000;
    sim.seed = 17;
    sim.tie_prob = 0.2;
    f.log = Simulate(sim);
    f.battles = InMemoryBattles(f.log.battles);
    BenchmarkOptions options;
    options.per_discipline = 500;
    options.seed = 11;
    f.items = BuildBenchmark(f.log.votes, f.battles, {}, options);
    return f;
  }();
  return fixture;
}

Outcome BenchmarkBuilder() {
  const auto& f = Benchmark();
  std::map<std::string, Winner> winner_of;
  for (const auto& v : f.log.votes) winner_of["item-" + v.vote_id] = v.winner;
  std::map<Discipline, std::pair<int, int>> split;
  int tie_origin = 0;
  for (const auto& item : f.items) {
    auto& [a, b] = split[item.discipline];
    (item.gold == "A" ? a : b) += 1;
    const Winner w = winner_of.at(item.item_id);
    if (w == Winner::kTie || w == Winner::kBothBad) ++tie_origin;
  }
  bool balanced = split.size() == 4;
  for (const auto& [d, ab] : split) balanced = balanced && ab.first == 250 && ab.second == 250;
  BenchmarkOptions options;
  options.per_discipline = 500;
  options.seed = 11;
  const bool deterministic = BuildBenchmark(f.log.votes, f.battles, {}, options) == f.items;
  return {f.items.size() == 2000 && balanced && tie_origin == 0 && deterministic,
          Fmt("%zu items (== 2000), 250/250 per discipline: %s, tie-origin items %d (== 0), "
              "deterministic: %s",
              f.items.size(), balanced ? "yes" : "no", tie_origin, deterministic ? "yes" : "no")};
}

Outcome JudgeHarness() {
  const auto& items = Benchmark().items;
  std::map<std::string, std::string> gold;
  for (const auto& i : items) gold[i.item_id] = i.gold;
  JudgeStub oracle(JudgeStubMode::kOracle, 0, gold);
  JudgeStub always_a(JudgeStubMode::kAlwaysA);
  JudgeStub random(JudgeStubMode::kRandom, 2024);
  std::vector<JudgeVerdict> verdicts;
  for (auto [judge, id] : {std::pair<Provider*, const char*>{&oracle, "oracle"},
                           {&always_a, "always_a"},
                           {&random, "random"}}) {
    auto v = RunJudgeOnItems(*judge, id, items, Threads());
    verdicts.insert(verdicts.end(), v.begin(), v.end());
  }
  std::map<std::string, double> accuracy;
  for (const auto& s : ScoreJudges(verdicts, items).judges) accuracy[s.judge_id] = s.accuracy;
  return {accuracy["oracle"] == 1.0 && accuracy["always_a"] == 0.5 &&
              std::abs(accuracy["random"] - 0.5) <= 0.03,
          Fmt("oracle %.4f (== 1), always-A %.4f (== 0.5), random %.4f (0.5 +/- 0.03)",
              accuracy["oracle"], accuracy["always_a"], accuracy["random"])};
}

Outcome WeightedKappaFixture() {
  const int a[] = {2, 2, 1, 0};
  const int b[] = {2, 1, 0, 0};
  std::vector<AgreementSample> samples;
  for (int i = 0; i < 4; ++i) samples.push_back({"s" + std::to_string(i), a[i], b[i]});
  const double linear = WeightedKappa(samples, KappaWeights::kLinear);
  const double quadratic = WeightedKappa(samples, KappaWeights::kQuadratic);
  std::vector<AgreementSample> perfect;
  for (int i = 0; i < 6; ++i) perfect.push_back({"p", i % 3, i % 3});
  const double one = WeightedKappa(perfect, KappaWeights::kLinear);
  const bool ok = std::abs(linear - 0.5) <= 1e-12 && std::abs(quadratic - 9.0 / 13.0) <= 1e-12 &&
                  one == 1.0;
  return {ok, Fmt("linear %.15f (0.5), quadratic %.15f (9/13), perfect %.3f (== 1)", linear,
                  quadratic, one)};
}

Outcome LeaderboardFixture() {
  const std::string text = testing::ReadText(testing::FixturePath("published_leaderboard.json"));
  const auto board = LeaderboardFromJson(text);
  const bool identical = LeaderboardToJson(board) == text;
  bool descending = true;
  for (std::size_t i = 1; i < board.rows.size(); ++i) {
    descending = descending && board.rows[i - 1].elo >= board.rows[i].elo;
  }
  return {identical && descending && board.rows.size() == 23,
          Fmt("%zu rows, byte-identical: %s, Elo-descending: %s", board.rows.size(),
              identical ? "yes" : "no", descending ? "yes" : "no")};
}

}  // namespace
}  // namespace arena

int main() {
  using arena::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"bt-recovery", arena::BtRecovery},
      {"scale-consistency", arena::ScaleConsistency},
      {"tie-handling", arena::TieHandling},
      {"style-control", arena::StyleControl},
      {"bootstrap", arena::Bootstrap},
      {"anomaly-hand-fixtures", arena::AnomalyFixtures},
      {"anomaly-power-size", arena::AnomalyPowerSize},
      {"online-elo", arena::OnlineElo},
      {"pipeline-determinism", arena::PipelineDeterminism},
      {"postprocessor", arena::Postprocessor},
      {"benchmark-builder", arena::BenchmarkBuilder},
      {"judge-harness", arena::JudgeHarness},
      {"weighted-kappa", arena::WeightedKappaFixture},
      {"leaderboard-fixture", arena::LeaderboardFixture},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failed;
    std::printf("%s %s: %s\n", outcome.pass ? "PASS" : "FAIL", name, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
