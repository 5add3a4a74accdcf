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

#include "core/metaeval.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace arena {
namespace {

JudgeChoice Flip(JudgeChoice c) {
  switch (c) {
    case JudgeChoice::kA: return JudgeChoice::kB;
    case JudgeChoice::kB: return JudgeChoice::kA;
    case JudgeChoice::kUnparseable: return JudgeChoice::kUnparseable;
  }
  return c;
}

bool Matches(JudgeChoice c, const std::string& gold) {
  return (c == JudgeChoice::kA && gold == "A") || (c == JudgeChoice::kB && gold == "B");
}

std::string Percent(double x) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(1) << 100.0 * x;
  return out.str();
}

}  // namespace

void to_json(Json& j, const BenchmarkItem& item) {
  j = Json{{"item_id", item.item_id},
           {"question", item.question},
           {"response_a", item.response_a},
           {"response_b", item.response_b},
           {"discipline", ToString(item.discipline)},
           {"gold", item.gold}};
}

void from_json(const Json& j, BenchmarkItem& item) {
  item.item_id = j.at("item_id").get<std::string>();
  item.question = j.at("question").get<std::string>();
  item.response_a = j.at("response_a").get<std::string>();
  item.response_b = j.at("response_b").get<std::string>();
  const auto d = ParseDiscipline(j.at("discipline").get<std::string>());
  if (!d) Fail(ErrorCode::kParse, "unknown discipline in benchmark item");
  item.discipline = *d;
  item.gold = j.at("gold").get<std::string>();
  if (item.gold != "A" && item.gold != "B") {
    Fail(ErrorCode::kParse, "benchmark gold must be \"A\" or \"B\"");
  }
}

std::vector<BenchmarkItem> BuildBenchmark(std::span<const Vote> votes,
                                          const BattleLookup& battles,
                                          const ResponseTextSource& texts,
                                          const BenchmarkOptions& options) {
  Require(options.per_discipline > 0 && options.per_discipline % 2 == 0,
          "per_discipline must be a positive even number");
  const std::size_t half = static_cast<std::size_t>(options.per_discipline / 2);
  std::vector<BenchmarkItem> items;
  for (std::size_t d = 0; d < kAllDisciplines.size(); ++d) {
    const Discipline discipline = kAllDisciplines[d];
    std::vector<const Vote*> side_a;
    std::vector<const Vote*> side_b;
    for (const auto& v : votes) {
      if (v.discipline != discipline) continue;
      if (v.winner == Winner::kFirst) side_a.push_back(&v);
      if (v.winner == Winner::kSecond) side_b.push_back(&v);
    }
    for (auto [pool, side] : {std::pair{&side_a, "A"}, std::pair{&side_b, "B"}}) {
      if (pool->size() < half) {
        Fail(ErrorCode::kInsufficientVotes,
             "discipline " + std::string(ToString(discipline)) + " side " + side + ": " +
                 std::to_string(pool->size()) + " decisive votes, need " +
                 std::to_string(half));
      }
    }
    std::mt19937_64 rng(MixSeed(options.seed, d));
    std::shuffle(side_a.begin(), side_a.end(), rng);
    std::shuffle(side_b.begin(), side_b.end(), rng);
    std::vector<const Vote*> chosen(side_a.begin(), side_a.begin() + half);
    chosen.insert(chosen.end(), side_b.begin(), side_b.begin() + half);
    std::shuffle(chosen.begin(), chosen.end(), rng);
    for (const Vote* v : chosen) {
      const Battle* b = battles.FindBattle(v->battle_id);
      if (b == nullptr) Fail(ErrorCode::kUnknownBattle, "unknown battle '" + v->battle_id + "'");
      BenchmarkItem item;
      item.item_id = "item-" + v->vote_id;
      item.question = b->question;
      item.discipline = discipline;
      item.gold = v->winner == Winner::kFirst ? "A" : "B";
      auto pair = texts ? texts(*b) : std::nullopt;
      item.response_a = pair ? pair->first : b->response_first;
      item.response_b = pair ? pair->second : b->response_second;
      items.push_back(std::move(item));
    }
  }
  return items;
}

namespace {

JudgeChoice ChoiceFromName(std::string_view name) {
  if (name == "A") return JudgeChoice::kA;
  if (name == "B") return JudgeChoice::kB;
  if (name == "unparseable") return JudgeChoice::kUnparseable;
  Fail(ErrorCode::kParse, "unknown judge choice '" + std::string(name) + "'");
}

}  // namespace

void to_json(Json& j, const JudgeVerdict& v) {
  j = Json{{"item_id", v.item_id},
           {"judge_id", v.judge_id},
           {"choice", std::string(ToString(v.choice))},
           {"raw_output", v.raw_output}};
  if (v.swapped_choice) j["swapped_choice"] = std::string(ToString(*v.swapped_choice));
}

void from_json(const Json& j, JudgeVerdict& v) {
  v.item_id = j.at("item_id").get<std::string>();
  v.judge_id = j.at("judge_id").get<std::string>();
  v.raw_output = j.value("raw_output", std::string());
  v.choice = j.contains("choice") ? ChoiceFromName(j.at("choice").get<std::string>())
                                  : ParseJudgeChoice(v.raw_output);
  v.swapped_choice.reset();
  if (auto it = j.find("swapped_choice"); it != j.end() && !it->is_null()) {
    v.swapped_choice = ChoiceFromName(it->get<std::string>());
  }
}

std::string_view ToString(JudgeChoice c) {
  switch (c) {
    case JudgeChoice::kA: return "A";
    case JudgeChoice::kB: return "B";
    case JudgeChoice::kUnparseable: return "unparseable";
  }
  return "unparseable";
}

JudgeChoice ParseJudgeChoice(std::string_view text) {
  const std::string lower = ToLower(text);
  const auto a = lower.rfind("output (a)");
  const auto b = lower.rfind("output (b)");
  if (a == std::string::npos && b == std::string::npos) return JudgeChoice::kUnparseable;
  if (b == std::string::npos) return JudgeChoice::kA;
  if (a == std::string::npos) return JudgeChoice::kB;
  return a > b ? JudgeChoice::kA : JudgeChoice::kB;
}

JudgeVerdict RunJudge(Provider& judge, std::string_view judge_id, const BenchmarkItem& item,
                      bool both_orders) {
  auto ask = [&](bool swapped) {
    const std::string& a = swapped ? item.response_b : item.response_a;
    const std::string& b = swapped ? item.response_a : item.response_b;
    const Json reply = judge.Call({{"item_id", item.item_id},
                                   {"prompt", JudgePrompt(item.question, a, b)},
                                   {"swapped", swapped}});
    return reply.value("text", std::string());
  };
  JudgeVerdict v;
  v.item_id = item.item_id;
  v.judge_id = std::string(judge_id);
  v.raw_output = ask(false);
  v.choice = ParseJudgeChoice(v.raw_output);
  if (both_orders) v.swapped_choice = Flip(ParseJudgeChoice(ask(true)));
  return v;
}

std::vector<JudgeVerdict> RunJudgeOnItems(Provider& judge, std::string_view judge_id,
                                          std::span<const BenchmarkItem> items,
                                          int parallelism, bool both_orders) {
  Require(parallelism >= 1, "parallelism must be >= 1");
  std::vector<JudgeVerdict> out(items.size());
  std::vector<std::exception_ptr> errors(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < items.size(); k = next++) {
      try {
        out[k] = RunJudge(judge, judge_id, items[k], both_orders);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int threads = std::min<int>(parallelism, static_cast<int>(items.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

EvalReport ScoreJudges(std::span<const JudgeVerdict> verdicts,
                       std::span<const BenchmarkItem> items, bool missing_as_wrong) {
  std::map<std::string, const BenchmarkItem*, std::less<>> by_id;
  for (const auto& item : items) by_id.emplace(item.item_id, &item);
  std::map<std::string, std::map<std::string, const JudgeVerdict*>> by_judge;
  for (const auto& v : verdicts) {
    if (!by_id.contains(v.item_id)) {
      Fail(ErrorCode::kInvalidArgument, "verdict for unknown item '" + v.item_id + "'");
    }
    if (!by_judge[v.judge_id].emplace(v.item_id, &v).second) {
      Fail(ErrorCode::kInvalidArgument,
           "judge '" + v.judge_id + "' has two verdicts for '" + v.item_id + "'");
    }
  }
  EvalReport report;
  for (const auto& [judge_id, answers] : by_judge) {
    JudgeScore score;
    score.judge_id = judge_id;
    int consistent = 0;
    int both = 0;
    for (const auto& item : items) {
      auto& disc = score.per_discipline[item.discipline];
      ++score.total;
      ++disc.total;
      auto it = answers.find(item.item_id);
      if (it == answers.end()) {
        if (!missing_as_wrong) {
          Fail(ErrorCode::kMissingVerdicts,
               "judge '" + judge_id + "' has no verdict for '" + item.item_id + "'");
        }
        ++score.missing;
        continue;
      }
      const JudgeVerdict& v = *it->second;
      if (v.choice == JudgeChoice::kUnparseable) ++score.unparseable;
      if (Matches(v.choice, item.gold)) {
        ++score.correct;
        ++disc.correct;
      }
      if (v.swapped_choice) {
        ++both;
        if (*v.swapped_choice == v.choice && v.choice != JudgeChoice::kUnparseable) {
          ++consistent;
        }
      }
    }
    score.accuracy = score.total ? static_cast<double>(score.correct) / score.total : 0.0;
    for (auto& [_, d] : score.per_discipline) {
      d.accuracy = d.total ? static_cast<double>(d.correct) / d.total : 0.0;
    }
    if (both > 0) score.position_consistency = static_cast<double>(consistent) / both;
    report.judges.push_back(std::move(score));
  }
  return report;
}

Json EvalReportToJson(const EvalReport& report) {
  Json judges = Json::array();
  for (const auto& s : report.judges) {
    Json per = Json::object();
    for (const auto& [d, score] : s.per_discipline) {
      per[std::string(ToString(d))] = {
          {"total", score.total}, {"correct", score.correct}, {"accuracy", score.accuracy}};
    }
    Json j{{"judge_id", s.judge_id},   {"total", s.total},
           {"correct", s.correct},     {"accuracy", s.accuracy},
           {"unparseable", s.unparseable}, {"missing", s.missing},
           {"per_discipline", per}};
    if (s.position_consistency) j["position_consistency"] = *s.position_consistency;
    judges.push_back(j);
  }
  return {{"judges", judges}};
}

std::string RenderEvalTable(const EvalReport& report) {
  std::size_t width = 5;
  for (const auto& s : report.judges) width = std::max(width, s.judge_id.size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width)) << "Judge" << "  " << std::right
      << std::setw(8) << "Overall";
  for (auto d : kAllDisciplines) out << "  " << std::setw(17) << ToString(d);
  out << "  " << std::setw(11) << "Unparseable" << "\n";
  for (const auto& s : report.judges) {
    out << std::left << std::setw(static_cast<int>(width)) << s.judge_id << "  " << std::right
        << std::setw(8) << Percent(s.accuracy);
    for (auto d : kAllDisciplines) {
      auto it = s.per_discipline.find(d);
      out << "  " << std::setw(17) << (it == s.per_discipline.end() ? "-" : Percent(it->second.accuracy));
    }
    out << "  " << std::setw(11) << s.unparseable << "\n";
  }
  return out.str();
}

}  // namespace arena
