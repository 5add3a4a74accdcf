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

// Helpers shared by the test executables.

#ifndef ARENA_TESTS_SUPPORT_TEST_SUPPORT_HPP_
#define ARENA_TESTS_SUPPORT_TEST_SUPPORT_HPP_

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "core/domain.hpp"
#include "core/error.hpp"
#include "core/util.hpp"
#include "json.hpp"

#ifndef ARENA_FIXTURE_DIR
#error "ARENA_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace arena::testing {

inline std::filesystem::path FixturePath(const std::string& name) {
  return std::filesystem::path(ARENA_FIXTURE_DIR) / name;
}

inline std::vector<nlohmann::json> ReadJsonLines(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<nlohmann::json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

inline std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fresh directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("arena-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline Timestamp At(long seconds) { return Timestamp{std::chrono::seconds{1700000000 + seconds}}; }

inline Battle MakeBattle(const std::string& id, const std::string& first,
                         const std::string& second,
                         Discipline discipline = Discipline::kNaturalScience) {
  Battle b;
  b.battle_id = id;
  b.question = "question for " + id;
  b.discipline = discipline;
  b.model_first = first;
  b.model_second = second;
  b.response_first = id + "-r1";
  b.response_second = id + "-r2";
  b.created_at = At(0);
  return b;
}

inline Vote MakeVote(const Battle& battle, const std::string& user, Winner winner,
                     long t = 0) {
  Vote v;
  v.vote_id = "v-" + battle.battle_id + "-" + user;
  v.battle_id = battle.battle_id;
  v.user_id = user;
  v.winner = winner;
  v.timestamp = At(t);
  v.discipline = battle.discipline;
  return v;
}

// Deterministic synthetic corpus: every document mentions the shared query
// terms so that candidate pools fill up, with varied extra vocabulary.
inline std::vector<CorpusDocument> SyntheticCorpus(int n) {
  static const char* kTopics[] = {"protein", "graphene", "statin",  "perovskite",
                                  "wage",    "robot",    "radiograph", "titanium",
                                  "coral",   "qubit",    "sleep",   "polarization"};
  std::vector<CorpusDocument> docs;
  for (int i = 0; i < n; ++i) {
    CorpusDocument d;
    d.doc_id = "s" + std::to_string(1000 + i);
    const std::string topic = kTopics[i % 12];
    d.title = "Study " + std::to_string(i) + " on " + topic + " learning methods";
    d.authors = {"Author" + std::to_string(i % 17), "Coauthor" + std::to_string(i % 5)};
    d.year = 2000 + i % 25;
    d.kind = i % 2 == 0 ? DocumentKind::kSnippet : DocumentKind::kAbstract;
    d.text = "We evaluate learning methods for " + topic +
             " problems and report accuracy of neural models. Variant " +
             std::to_string(i * 7 % 13) + " improves on baseline " + std::to_string(i % 9) + ".";
    d.source_paper_id = "p" + std::to_string(i / 2);
    docs.push_back(d);
  }
  return docs;
}

}  // namespace arena::testing

#endif  // ARENA_TESTS_SUPPORT_TEST_SUPPORT_HPP_
