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

#include "core/providers.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

#include "core/postprocess.hpp"

namespace arena {
namespace {

bool Contains(const std::vector<std::string>& list, std::string_view value) {
  return std::find(list.begin(), list.end(), value) != list.end();
}

std::vector<std::string> StringList(const Json& j, const char* key) {
  std::vector<std::string> out;
  if (j.contains(key)) out = j.at(key).get<std::vector<std::string>>();
  return out;
}

// First `max_words` words of `text`, without brackets or a trailing stop.
std::string Excerpt(std::string_view text, std::size_t max_words) {
  std::istringstream in{std::string(text)};
  std::string word;
  std::string out;
  for (std::size_t n = 0; n < max_words && in >> word; ++n) {
    std::erase_if(word, [](char c) { return c == '[' || c == ']' || c == '*' || c == '_'; });
    if (word.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += word;
  }
  while (!out.empty() && std::string_view(".!?,;:").find(out.back()) != std::string_view::npos) {
    out.pop_back();
  }
  return out;
}

std::string Surname(const std::string& author) {
  auto trimmed = std::string(Trim(author));
  auto space = trimmed.rfind(' ');
  return space == std::string::npos ? trimmed : trimmed.substr(space + 1);
}

std::string LeadingSurname(const Json& ref) {
  if (ref.contains("authors") && !ref.at("authors").empty()) {
    return Surname(ref.at("authors").at(0).get<std::string>());
  }
  return "Prior work";
}

std::string JoinAuthors(const std::vector<std::string>& authors) {
  std::string out;
  for (const auto& a : authors) {
    if (!out.empty()) out += ", ";
    out += a;
  }
  return out;
}

bool HasNegation(const std::vector<std::string>& tokens) {
  static const std::set<std::string, std::less<>> kNegations = {
      "not", "no", "never", "cannot", "fail", "fails", "failed", "neither", "nor",
      "without", "unlike", "contrary", "contradicts", "don", "doesn", "didn", "isn",
      "aren", "wasn", "weren"};
  return std::any_of(tokens.begin(), tokens.end(),
                     [&](const std::string& t) { return kNegations.contains(t); });
}

std::string ClassifyAttributionText(std::string_view claim, std::string_view content) {
  const auto claim_tokens = Tokenize(claim);
  const auto content_tokens = Tokenize(content);
  const auto claim_words = ContentTokens(claim);
  const auto content_words = ContentTokens(content);
  const std::set<std::string> claim_set(claim_words.begin(), claim_words.end());
  const std::set<std::string> content_set(content_words.begin(), content_words.end());
  std::size_t shared = 0;
  for (const auto& w : content_set) shared += claim_set.count(w);
  const double overlap =
      content_set.empty() ? 0.0 : static_cast<double>(shared) / content_set.size();
  const bool claim_neg = HasNegation(claim_tokens);
  const bool content_neg = HasNegation(content_tokens);
  std::ostringstream out;
  out.precision(3);
  if (overlap >= 0.2) {
    if (claim_neg != content_neg) {
      out << "Contradicting. The statement shares the citation's terms (overlap "
          << overlap << ") but reverses its polarity.";
    } else {
      out << "Supporting. The statement restates the citation content (overlap "
          << overlap << ").";
    }
  } else if (overlap < 0.05 && (claim_neg || content_neg)) {
    out << "Contradicting. Negated statement with no shared content (overlap " << overlap
        << ").";
  } else {
    out << "Irrelevant. The citation content does not address the statement (overlap "
        << overlap << ").";
  }
  return out.str();
}

int ClassifyCategoryCode(std::string_view question) {
  const std::string q = ToLower(question);
  auto any = [&](std::initializer_list<std::string_view> keys) {
    return std::any_of(keys.begin(), keys.end(),
                       [&](std::string_view k) { return q.find(k) != std::string::npos; });
  };
  if (any({"find papers", "papers on", "research on", "literature", "survey",
           "review of"})) {
    return 5;
  }
  if (any({"challenge", "limitation", "hinder", "barrier", "drawback", "obstacle"})) {
    return 4;
  }
  if (any({"state of the art", "state-of-the-art", "latest", "recent", "lately", "trend",
           "advances", "breakthrough", "innovation"})) {
    return 3;
  }
  if (any({"how does", "how do", "why", "mechanism", "explain", "what is", "principle"})) {
    return 1;
  }
  if (any({"method", "technique", "model", "simulat", "approach", "algorithm", "how to"})) {
    return 2;
  }
  return 6;
}

std::string ResponseSection(std::string_view prompt, std::string_view open,
                            std::string_view close) {
  auto start = prompt.find(open);
  if (start == std::string_view::npos) return {};
  start += open.size();
  auto end = prompt.find(close, start);
  return std::string(prompt.substr(start, end == std::string_view::npos
                                              ? std::string_view::npos
                                              : end - start));
}

std::string JudgeAnswer(bool pick_a) {
  return pick_a ? "Having compared both candidates, the better one is Output (a)."
                : "Having compared both candidates, the better one is Output (b).";
}

JudgeStubMode ParseJudgeMode(std::string_view name) {
  if (name == "always_a") return JudgeStubMode::kAlwaysA;
  if (name == "always_b") return JudgeStubMode::kAlwaysB;
  if (name == "random") return JudgeStubMode::kRandom;
  if (name == "oracle") return JudgeStubMode::kOracle;
  if (name == "more_citations") return JudgeStubMode::kMoreCitations;
  if (name == "echo") return JudgeStubMode::kEcho;
  Fail(ErrorCode::kInvalidArgument, "unknown judge mode '" + std::string(name) + "'");
}

void AppendReferences(std::ostringstream& out,
                      const std::vector<PromptReference>& references) {
  out << "References:\n\n";
  for (const auto& r : references) {
    out << r.index << ". Title: " << r.title << "\n"
        << "Authors: " << JoinAuthors(r.authors) << "\n"
        << "Relevant Context: " << r.context << "\n\n";
  }
}

}  // namespace

std::string_view ToString(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::kModeration: return "moderation";
    case ProviderKind::kRetrieval: return "retrieval";
    case ProviderKind::kReranker: return "reranker";
    case ProviderKind::kGenerator: return "generator";
    case ProviderKind::kPostprocessor: return "postprocessor";
    case ProviderKind::kClassifier: return "classifier";
    case ProviderKind::kJudge: return "judge";
  }
  return "unknown";
}

ModerationStub::ModerationStub(std::vector<std::string> denylist)
    : denylist_(std::move(denylist)) {}

Json ModerationStub::Call(const Json& request, Millis) {
  const std::string text = ToLower(request.at("text").get<std::string>());
  for (const auto& pattern : denylist_) {
    if (!pattern.empty() && text.find(ToLower(pattern)) != std::string::npos) {
      return {{"allowed", false}, {"reason", pattern}};
    }
  }
  return {{"allowed", true}};
}

Json RerankerStub::Call(const Json& request, Millis) {
  auto tf = [](std::string_view text) {
    std::unordered_map<std::string, double> counts;
    for (auto& t : Tokenize(text)) counts[t] += 1.0;
    return counts;
  };
  auto norm = [](const std::unordered_map<std::string, double>& v) {
    double s = 0.0;
    for (const auto& [_, c] : v) s += c * c;
    return std::sqrt(s);
  };
  const auto query = tf(request.at("query").get<std::string>());
  const double query_norm = norm(query);
  Json scores = Json::array();
  for (const auto& doc : request.at("documents")) {
    const auto d = tf(doc.at("text").get<std::string>());
    double dot = 0.0;
    for (const auto& [term, c] : query) {
      auto it = d.find(term);
      if (it != d.end()) dot += c * it->second;
    }
    const double denom = query_norm * norm(d);
    scores.push_back(denom > 0 ? dot / denom : 0.0);
  }
  return {{"scores", scores}};
}

GeneratorStub::GeneratorStub(GeneratorStubOptions options) : options_(std::move(options)) {}

Json GeneratorStub::Call(const Json& request, Millis deadline) {
  const std::string model = request.at("model").get<std::string>();
  const Json config = request.value("provider_config", Json::object());
  if (Contains(options_.failing_models, model) || config.value("fail", false)) {
    Fail(ErrorCode::kProviderUnavailable, "generator for '" + model + "' is unavailable");
  }
  const Millis latency{config.value("latency_ms", options_.latency.count())};
  if (latency > deadline) {
    Fail(ErrorCode::kGenerationTimeout, "generation for '" + model + "' exceeded " +
                                            std::to_string(deadline.count()) + " ms");
  }
  const auto& refs = request.at("references");
  const std::size_t cited =
      std::min<std::size_t>(refs.size(), config.value("cite_top_k", options_.cite_top_k));
  const std::string question = request.value("question", std::string());

  std::ostringstream text;
  if (Contains(options_.reasoning_models, model) || config.value("reasoning", false)) {
    text << "<think>Weighing which references bear on the question.</think>\n";
  }
  const int variant = static_cast<int>(Fnv1a64(model) % 3);
  text << "The retrieved literature bears on the question \"" << Excerpt(question, 24)
       << "\" from several angles.";
  for (std::size_t k = 0; k < cited; ++k) {
    const auto& ref = refs.at(k);
    const int index = ref.at("index").get<int>();
    const std::string excerpt = Excerpt(ref.value("context", std::string()), 18);
    const std::string title = Excerpt(ref.value("title", std::string()), 16);
    switch (variant) {
      case 0:
        text << " The study \"" << title << "\" describes " << excerpt << " [" << index
             << "].";
        break;
      case 1:
        text << " " << LeadingSurname(ref) << " et al. [" << index << "] report that "
             << excerpt << ".";
        break;
      default:
        text << "\n- **Evidence " << index << ":** " << excerpt << " [" << index << "].";
        break;
    }
  }
  if (variant == 2) text << "\n";
  text << " Taken together, these sources outline the current understanding.";
  const std::string out = text.str();
  const auto prompt_tokens = CountWhitespaceTokens(request.value("system", std::string())) +
                             CountWhitespaceTokens(request.value("prompt", std::string()));
  return {{"text", out},
          {"prompt_tokens", prompt_tokens},
          {"completion_tokens", CountWhitespaceTokens(out)}};
}

Json PostprocessorStub::Call(const Json& request, Millis) {
  const std::string normalized =
      NormalizeResponseText(request.at("response").get<std::string>());
  std::vector<int> distinct;
  for (int i : ExtractCitationIndices(normalized)) {
    if (std::find(distinct.begin(), distinct.end(), i) == distinct.end()) {
      distinct.push_back(i);
    }
  }
  return {{"references", distinct}, {"response", normalized}};
}

Json ClassifierStub::Call(const Json& request, Millis) {
  const std::string task = request.at("task").get<std::string>();
  if (task == "category") {
    return {{"text", std::to_string(ClassifyCategoryCode(
                         request.at("question").get<std::string>()))}};
  }
  if (task == "attribution") {
    const std::string claim = request.contains("claim")
                                  ? request.at("claim").get<std::string>()
                                  : request.at("response").get<std::string>();
    return {{"text",
             ClassifyAttributionText(claim, request.at("content").get<std::string>())}};
  }
  Fail(ErrorCode::kInvalidArgument, "unknown classifier task '" + task + "'");
}

JudgeStub::JudgeStub(JudgeStubMode mode, std::uint64_t seed,
                     std::map<std::string, std::string> gold, std::string echo_text)
    : mode_(mode), seed_(seed), gold_(std::move(gold)), echo_text_(std::move(echo_text)) {}

Json JudgeStub::Call(const Json& request, Millis) {
  const std::string item = request.at("item_id").get<std::string>();
  switch (mode_) {
    case JudgeStubMode::kAlwaysA: return {{"text", JudgeAnswer(true)}};
    case JudgeStubMode::kAlwaysB: return {{"text", JudgeAnswer(false)}};
    case JudgeStubMode::kRandom:
      return {{"text", JudgeAnswer((MixSeed(seed_, Fnv1a64(item)) & 1U) == 0)}};
    case JudgeStubMode::kOracle: {
      auto it = gold_.find(item);
      if (it == gold_.end()) {
        Fail(ErrorCode::kInvalidArgument, "oracle judge has no gold for '" + item + "'");
      }
      const bool swapped = request.value("swapped", false);
      return {{"text", JudgeAnswer((it->second == "A") != swapped)}};
    }
    case JudgeStubMode::kMoreCitations: {
      const std::string prompt = request.at("prompt").get<std::string>();
      const auto a = ExtractCitationIndices(
          ResponseSection(prompt, "Output (a):\n", "\n\nOutput (b):"));
      const auto b = ExtractCitationIndices(
          ResponseSection(prompt, "Output (b):\n", "\n\nWhich"));
      return {{"text", JudgeAnswer(a.size() >= b.size())}};
    }
    case JudgeStubMode::kEcho: return {{"text", echo_text_}};
  }
  Fail(ErrorCode::kInternal, "unhandled judge mode");
}

Json UnavailableProvider::Call(const Json&, Millis) {
  Fail(ErrorCode::kProviderUnavailable,
       std::string(ToString(kind_)) + " provider is unavailable");
}

RemoteProvider::RemoteProvider(ProviderKind kind, std::string endpoint) : kind_(kind) {
  const auto scheme = endpoint.find("://");
  const auto path_start =
      endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path_start == std::string::npos) {
    base_ = endpoint;
    path_ = "/";
  } else {
    base_ = endpoint.substr(0, path_start);
    path_ = endpoint.substr(path_start);
  }
  Require(!base_.empty(), "remote provider needs an endpoint");
}

Json RemoteProvider::Call(const Json& request, Millis deadline) {
  httplib::Client client(base_);
  const auto secs = deadline.count() / 1000;
  const auto usecs = (deadline.count() % 1000) * 1000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  auto res = client.Post(path_, request.dump(), "application/json");
  if (!res) {
    if (res.error() == httplib::Error::Read) {
      Fail(ErrorCode::kGenerationTimeout,
           std::string(ToString(kind_)) + " provider did not answer within the deadline");
    }
    Fail(ErrorCode::kProviderUnavailable, std::string(ToString(kind_)) +
                                              " provider unreachable: " +
                                              httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    Fail(ErrorCode::kProviderUnavailable, std::string(ToString(kind_)) +
                                              " provider returned HTTP " +
                                              std::to_string(res->status));
  }
  try {
    return Json::parse(res->body);
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kProviderUnavailable,
         std::string(ToString(kind_)) + " provider sent malformed JSON: " + e.what());
  }
}

bool RemoteProvider::Reachable() {
  httplib::Client client(base_);
  client.set_connection_timeout(1, 0);
  client.set_read_timeout(1, 0);
  return static_cast<bool>(client.Get(path_));
}

ProviderPtr MakeProvider(ProviderKind kind, const Json& config) {
  const std::string type = config.value("type", std::string("stub"));
  if (type == "unavailable") return std::make_shared<UnavailableProvider>(kind);
  if (type == "remote") {
    return std::make_shared<RemoteProvider>(kind, config.at("endpoint").get<std::string>());
  }
  Require(type == "stub", "unknown provider type '" + type + "'");
  switch (kind) {
    case ProviderKind::kModeration:
      return std::make_shared<ModerationStub>(StringList(config, "denylist"));
    case ProviderKind::kReranker: return std::make_shared<RerankerStub>();
    case ProviderKind::kGenerator: {
      GeneratorStubOptions options;
      options.cite_top_k = config.value("cite_top_k", options.cite_top_k);
      options.failing_models = StringList(config, "failing_models");
      options.reasoning_models = StringList(config, "reasoning_models");
      options.latency = Millis{config.value("latency_ms", 0)};
      return std::make_shared<GeneratorStub>(options);
    }
    case ProviderKind::kPostprocessor: return std::make_shared<PostprocessorStub>();
    case ProviderKind::kClassifier: return std::make_shared<ClassifierStub>();
    case ProviderKind::kJudge:
      return std::make_shared<JudgeStub>(
          ParseJudgeMode(config.value("mode", std::string("more_citations"))),
          config.value("seed", std::uint64_t{0}),
          config.value("gold", std::map<std::string, std::string>{}),
          config.value("echo_text", std::string()));
    case ProviderKind::kRetrieval: break;
  }
  Fail(ErrorCode::kInvalidArgument,
       "no stub for provider kind '" + std::string(ToString(kind)) + "'");
}

ProviderSet ProviderSet::Stubs() { return FromConfig(Json::object()); }

ProviderSet ProviderSet::FromConfig(const Json& providers) {
  auto make = [&](ProviderKind kind) {
    const std::string key(ToString(kind));
    return MakeProvider(kind, providers.contains(key) ? providers.at(key) : Json::object());
  };
  ProviderSet set;
  try {
    set.moderation = make(ProviderKind::kModeration);
    set.reranker = make(ProviderKind::kReranker);
    set.generator = make(ProviderKind::kGenerator);
    set.postprocessor = make(ProviderKind::kPostprocessor);
    set.classifier = make(ProviderKind::kClassifier);
    set.judge = make(ProviderKind::kJudge);
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kParse, std::string("invalid provider configuration: ") + e.what());
  }
  return set;
}

Prompt GenerationPrompt(std::string_view question,
                        const std::vector<PromptReference>& references) {
  Prompt p;
  p.system =
      "You are a research assistant answering a question from the scientific "
      "literature.\n\n"
      "1. Inputs\n"
      "- References: numbered papers, each with a title and an excerpt. Some may not "
      "bear on the question.\n"
      "- Question: what the user wants to know.\n\n"
      "2. Task\n"
      "- Pick the references that address the question.\n"
      "- Answer in plain text without markdown, attributing claims to references.\n\n"
      "3. Citations\n"
      "- Cite with the reference number in square brackets, e.g. \"X holds [1].\"\n"
      "- Cite only the listed references.\n";
  std::ostringstream user;
  AppendReferences(user, references);
  user << "Question: " << question << "\n\n"
       << "Answer the question with citations to the references.";
  p.user = user.str();
  return p;
}

Prompt PostprocessPrompt(std::string_view question, std::string_view response,
                         const std::vector<PromptReference>& references) {
  Prompt p;
  p.system =
      "You normalize citation-attributed answers.\n\n"
      "- Use numeric bracket citations such as [1].\n"
      "- Move every citation to the end of its sentence, before the final period.\n"
      "- Remove markdown formatting.\n"
      "- Change nothing else.\n\n"
      "Reply with JSON:\n"
      "{\n"
      "  \"references\": [],  // cited reference numbers\n"
      "  \"response\": \"\"     // the normalized answer text\n"
      "}\n";
  std::ostringstream user;
  AppendReferences(user, references);
  user << "Question: " << question << "\n"
       << "Response: " << response << "\n\n"
       << "Normalize the response as instructed.";
  p.user = user.str();
  return p;
}

Prompt CategoryPrompt(std::string_view question) {
  Prompt p;
  p.system =
      "Assign the research question to exactly one category.\n\n"
      "Categories:\n"
      "1. Conceptual Explanation: principles or mechanisms behind a phenomenon.\n"
      "2. Methodology Inquiry: methods, modeling techniques or simulations.\n"
      "3. State-of-the-Art Assessment: recent advances, trends or breakthroughs.\n"
      "4. Challenges & Limitations: open problems, obstacles, room for improvement.\n"
      "5. Paper Finding: literature summaries, evidence synthesis, finding papers.\n"
      "6. Others: anything else.\n\n"
      "Answer with the category number (1-6) only.\n";
  p.user = "Question:\n" + std::string(question) + "\n\nCategory:";
  return p;
}

Prompt AttributionPrompt(std::string_view response, std::string_view authors,
                         std::string_view content) {
  Prompt p;
  p.system =
      "You check whether cited sources back the statements made about them.\n";
  std::ostringstream user;
  user << "Decide whether the cited source agrees with what the response says about "
          "it.\n\n"
       << "Response content:" << response << "\n"
       << "Citation author: " << authors << "\n"
       << "Citation original content:" << content << "\n\n"
       << "Focus on the statements attributed to \"" << authors
       << "\" in the response.\n\n"
       << "Labels:\n"
       << "- supporting: the source backs the statement\n"
       << "- irrelevant: the source does not address the statement\n"
       << "- contradicting: the source conflicts with the statement\n\n"
       << "Start your reply with the label, then explain briefly.";
  p.user = user.str();
  return p;
}

std::string JudgePrompt(std::string_view question, std::string_view response_a,
                        std::string_view response_b) {
  std::ostringstream out;
  out << "Compare two citation-attributed answers to a research question. Consider "
         "relevance, correctness, clarity and how well citations support the claims, "
         "then pick Output (a) or Output (b).\n\n"
      << "User Question:\n" << question << "\n\n"
      << "Output (a):\n" << response_a << "\n\n"
      << "Output (b):\n" << response_b << "\n\n"
      << "Which is best, Output (a) or Output (b)?";
  return out.str();
}

}  // namespace arena
