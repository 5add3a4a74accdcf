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

#include "core/rating.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <thread>

#include "Eigen/Dense"

namespace arena {
namespace {

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

double Softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double MaxAbs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void CheckNoDegenerateColumns(const EncodedBattles& encoded) {
  std::vector<int> appearances(encoded.models.size(), 0);
  for (const auto& row : encoded.rows) {
    ++appearances[row.first];
    ++appearances[row.second];
  }
  for (std::size_t m = 0; m < appearances.size(); ++m) {
    if (appearances[m] == 0) {
      Fail(ErrorCode::kDegenerateGraph,
           "model '" + encoded.models[m] + "' appears in no comparison");
    }
  }
}

BtFitResult Fit(const EncodedBattles& encoded, const BtFitConfig& config,
                bool use_style) {
  config.Validate();
  if (encoded.rows.empty()) Fail(ErrorCode::kEmptyVoteSet, "no rows to fit");
  if (encoded.models.size() < 2) {
    Fail(ErrorCode::kInvalidArgument, "need at least two models");
  }
  for (const auto& row : encoded.rows) {
    if (row.first < 0 || row.second < 0 ||
        row.first >= static_cast<int>(encoded.models.size()) ||
        row.second >= static_cast<int>(encoded.models.size()) ||
        row.first == row.second) {
      Fail(ErrorCode::kInvalidArgument, "row columns out of range");
    }
    if (use_style && row.z.size() != encoded.style_dim) {
      Fail(ErrorCode::kDimensionMismatch, "style vector dimension mismatch");
    }
  }
  if (use_style && encoded.style_dim == 0) {
    Fail(ErrorCode::kDimensionMismatch, "styled fit requires style vectors");
  }
  CheckNoDegenerateColumns(encoded);

  const BtObjective objective(encoded, config.l2_lambda, use_style);
  const auto dim = static_cast<Eigen::Index>(objective.Dimension());
  std::vector<double> theta(objective.Dimension(), 0.0);
  double loss = objective.Value(theta);
  std::vector<double> grad = objective.Gradient(theta);

  BtFitResult result;
  int iter = 0;
  for (; iter < config.max_iterations; ++iter) {
    if (MaxAbs(grad) <= config.tolerance) {
      result.converged = true;
      break;
    }
    const auto hess = objective.Hessian(theta);
    Eigen::Map<const Eigen::MatrixXd> h(hess.data(), dim, dim);
    Eigen::Map<const Eigen::VectorXd> g(grad.data(), dim);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    Eigen::VectorXd step = ldlt.solve(-g);
    if (ldlt.info() != Eigen::Success || !step.allFinite() || step.dot(g) >= 0) {
      step = -g;
    }
    const double slope = step.dot(g);

    std::vector<double> candidate(theta.size());
    double t = 1.0;
    double candidate_loss = loss;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      for (Eigen::Index k = 0; k < dim; ++k) candidate[k] = theta[k] + t * step[k];
      candidate_loss = objective.Value(candidate);
      if (candidate_loss <= loss + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      // Loss differences are below double resolution; keep the full Newton
      // step only if it still shrinks the gradient.
      for (Eigen::Index k = 0; k < dim; ++k) candidate[k] = theta[k] + step[k];
      auto candidate_grad = objective.Gradient(candidate);
      if (MaxAbs(candidate_grad) >= MaxAbs(grad)) break;
      theta = std::move(candidate);
      loss = objective.Value(theta);
      grad = std::move(candidate_grad);
      continue;
    }
    theta = candidate;
    loss = candidate_loss;
    grad = objective.Gradient(theta);
  }
  if (!result.converged && MaxAbs(grad) <= config.tolerance) {
    result.converged = true;
  }

  const std::size_t m = encoded.models.size();
  result.models = encoded.models;
  result.beta.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(m));
  const double mean =
      std::accumulate(result.beta.begin(), result.beta.end(), 0.0) / m;
  for (auto& b : result.beta) b -= mean;
  if (use_style) {
    result.gamma = std::vector<double>(theta.begin() + static_cast<std::ptrdiff_t>(m),
                                       theta.end());
  }
  result.elo = ToElo(result.beta);
  result.iterations = iter;
  result.final_loss = loss;
  return result;
}

}  // namespace

int EncodedBattles::ColumnOf(std::string_view model_id) const {
  auto it = std::find(models.begin(), models.end(), model_id);
  return it == models.end() ? -1 : static_cast<int>(it - models.begin());
}

void BtFitConfig::Validate() const {
  Require(l2_lambda >= 0 && std::isfinite(l2_lambda), "l2_lambda must be >= 0");
  Require(tolerance > 0, "tolerance must be > 0");
  Require(max_iterations >= 1, "max_iterations must be >= 1");
}

double BtFitResult::EloOf(std::string_view model_id) const {
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (models[i] == model_id) return elo[i];
  }
  Fail(ErrorCode::kUnknownModel, "model '" + std::string(model_id) + "' not in fit");
}

std::vector<std::string> ModelPoolFromVotes(std::span<const Vote> votes,
                                            const BattleLookup& battles) {
  std::set<std::string> ids;
  for (const auto& v : votes) {
    const Battle* b = battles.FindBattle(v.battle_id);
    if (b == nullptr) {
      Fail(ErrorCode::kUnknownBattle, "unknown battle '" + v.battle_id + "'");
    }
    ids.insert(b->model_first);
    ids.insert(b->model_second);
  }
  return {ids.begin(), ids.end()};
}

EncodedBattles EncodeBattles(std::span<const Vote> votes,
                             const BattleLookup& battles,
                             const std::vector<std::string>& pool,
                             const StyleByBattle* style) {
  if (votes.empty()) Fail(ErrorCode::kEmptyVoteSet, "vote set is empty");
  EncodedBattles out;
  out.models = pool;
  std::map<std::string_view, int, std::less<>> column;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    column.emplace(out.models[i], static_cast<int>(i));
  }
  auto column_of = [&](const std::string& id) {
    auto it = column.find(id);
    if (it == column.end()) {
      Fail(ErrorCode::kUnknownModel, "model '" + id + "' is not in the pool");
    }
    return it->second;
  };

  out.rows.reserve(votes.size() + votes.size() / 4);
  bool dim_set = false;
  for (const auto& v : votes) {
    const Battle* b = battles.FindBattle(v.battle_id);
    if (b == nullptr) {
      Fail(ErrorCode::kUnknownBattle, "unknown battle '" + v.battle_id + "'");
    }
    EncodedRow row;
    row.first = column_of(b->model_first);
    row.second = column_of(b->model_second);
    if (style != nullptr) {
      auto it = style->find(v.battle_id);
      if (it == style->end()) {
        Fail(ErrorCode::kDimensionMismatch,
             "no style vector for battle '" + v.battle_id + "'");
      }
      if (!dim_set) {
        out.style_dim = it->second.size();
        dim_set = true;
      } else if (it->second.size() != out.style_dim) {
        Fail(ErrorCode::kDimensionMismatch, "ragged style vectors");
      }
      row.z = it->second;
    }
    switch (v.winner) {
      case Winner::kFirst:
        row.y = 1.0;
        out.rows.push_back(std::move(row));
        break;
      case Winner::kSecond:
        row.y = 0.0;
        out.rows.push_back(std::move(row));
        break;
      case Winner::kTie:
      case Winner::kBothBad: {
        row.weight = 0.5;
        EncodedRow loss = row;
        row.y = 1.0;
        loss.y = 0.0;
        out.rows.push_back(std::move(row));
        out.rows.push_back(std::move(loss));
        break;
      }
    }
  }
  return out;
}

BtObjective::BtObjective(const EncodedBattles& data, double l2_lambda,
                         bool use_style)
    : data_(data),
      l2_lambda_(l2_lambda),
      use_style_(use_style),
      models_(data.models.size()),
      dim_(data.models.size() + (use_style ? data.style_dim : 0)),
      total_weight_(0.0) {
  for (const auto& row : data_.rows) total_weight_ += row.weight;
}

double BtObjective::Logit(const EncodedRow& row,
                          std::span<const double> theta) const {
  double eta = theta[row.first] - theta[row.second];
  if (use_style_) {
    for (std::size_t k = 0; k < row.z.size(); ++k) eta += row.z[k] * theta[models_ + k];
  }
  return eta;
}

double BtObjective::Value(std::span<const double> theta) const {
  double ce = 0.0;
  for (const auto& row : data_.rows) {
    const double eta = Logit(row, theta);
    ce += row.weight * (Softplus(eta) - row.y * eta);
  }
  double reg = 0.0;
  for (double t : theta) reg += t * t;
  return ce / total_weight_ + l2_lambda_ * reg;
}

std::vector<double> BtObjective::Gradient(std::span<const double> theta) const {
  std::vector<double> g(dim_, 0.0);
  for (const auto& row : data_.rows) {
    const double r = row.weight * (Sigmoid(Logit(row, theta)) - row.y) / total_weight_;
    g[row.first] += r;
    g[row.second] -= r;
    if (use_style_) {
      for (std::size_t k = 0; k < row.z.size(); ++k) g[models_ + k] += r * row.z[k];
    }
  }
  for (std::size_t k = 0; k < dim_; ++k) g[k] += 2.0 * l2_lambda_ * theta[k];
  return g;
}

std::vector<double> BtObjective::Hessian(std::span<const double> theta) const {
  std::vector<double> h(dim_ * dim_, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return h[i * dim_ + j]; };
  for (const auto& row : data_.rows) {
    const double p = Sigmoid(Logit(row, theta));
    const double w = row.weight * p * (1.0 - p) / total_weight_;
    const std::size_t f = row.first;
    const std::size_t s = row.second;
    at(f, f) += w;
    at(s, s) += w;
    at(f, s) -= w;
    at(s, f) -= w;
    if (use_style_) {
      for (std::size_t k = 0; k < row.z.size(); ++k) {
        const double wz = w * row.z[k];
        at(f, models_ + k) += wz;
        at(models_ + k, f) += wz;
        at(s, models_ + k) -= wz;
        at(models_ + k, s) -= wz;
        for (std::size_t l = 0; l < row.z.size(); ++l) {
          at(models_ + k, models_ + l) += wz * row.z[l];
        }
      }
    }
  }
  for (std::size_t k = 0; k < dim_; ++k) at(k, k) += 2.0 * l2_lambda_;
  return h;
}

BtFitResult FitBt(const EncodedBattles& encoded, const BtFitConfig& config) {
  return Fit(encoded, config, /*use_style=*/false);
}

BtFitResult FitBtStyled(const EncodedBattles& encoded, const BtFitConfig& config) {
  return Fit(encoded, config, /*use_style=*/true);
}

std::vector<double> ToElo(std::span<const double> beta) {
  if (beta.empty()) return {};
  for (double b : beta) {
    if (!std::isfinite(b)) Fail(ErrorCode::kNonFiniteInput, "beta is not finite");
  }
  const double mean = std::accumulate(beta.begin(), beta.end(), 0.0) / beta.size();
  const double scale = kEloScale / std::numbers::ln10;
  std::vector<double> elo(beta.size());
  for (std::size_t i = 0; i < beta.size(); ++i) {
    elo[i] = kEloAnchor + scale * (beta[i] - mean);
  }
  return elo;
}

double ExpectedScore(double rating_i, double rating_j, double alpha) {
  Require(alpha > 0, "alpha must be > 0");
  return 1.0 / (1.0 + std::pow(10.0, (rating_j - rating_i) / alpha));
}

const ModelInterval* BootstrapResult::Find(std::string_view model) const {
  for (const auto& iv : intervals) {
    if (iv.model == model) return &iv;
  }
  return nullptr;
}

double EmpiricalQuantile(std::vector<double> samples, double q) {
  Require(!samples.empty(), "quantile of empty sample");
  Require(q >= 0 && q <= 1, "quantile must lie in [0, 1]");
  std::sort(samples.begin(), samples.end());
  const double h = (samples.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= samples.size()) return samples.back();
  return samples[lo] + (h - lo) * (samples[lo + 1] - samples[lo]);
}

BootstrapResult BootstrapCi(std::span<const Vote> votes,
                            const BattleLookup& battles,
                            const std::vector<std::string>& pool,
                            const StyleByBattle* style,
                            const BtFitConfig& config,
                            const BootstrapOptions& options) {
  Require(options.resamples >= 1, "resamples must be >= 1");
  if (votes.empty()) Fail(ErrorCode::kEmptyVoteSet, "vote set is empty");
  auto fit = [&](std::span<const Vote> sample) {
    auto encoded = EncodeBattles(sample, battles, pool, style);
    return style != nullptr ? FitBtStyled(encoded, config) : FitBt(encoded, config);
  };
  const BtFitResult full = fit(votes);
  const std::size_t n = votes.size();
  const int resamples = options.resamples;
  constexpr int kMaxRedraws = 10;

  std::vector<std::vector<double>> elos(resamples);
  std::vector<std::exception_ptr> errors(resamples);
  auto run_one = [&](int r) {
    for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
      std::mt19937_64 rng(MixSeed(MixSeed(config.seed, r), attempt));
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      std::vector<Vote> sample;
      sample.reserve(n);
      for (std::size_t i = 0; i < n; ++i) sample.push_back(votes[pick(rng)]);
      try {
        elos[r] = fit(sample).elo;
        return;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kDegenerateGraph || attempt == kMaxRedraws) throw;
      }
    }
  };

  const int threads = std::clamp(options.threads, 1, resamples);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < resamples; r = next++) {
      try {
        run_one(r);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool_threads;
    for (int t = 0; t < threads; ++t) pool_threads.emplace_back(worker);
    for (auto& t : pool_threads) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  BootstrapResult result;
  result.resamples = resamples;
  result.seed = config.seed;
  for (std::size_t m = 0; m < pool.size(); ++m) {
    std::vector<double> column(resamples);
    for (int r = 0; r < resamples; ++r) column[r] = elos[r][m];
    result.intervals.push_back(
        {pool[m], full.elo[m], EmpiricalQuantile(column, options.lower_quantile),
         EmpiricalQuantile(std::move(column), options.upper_quantile)});
  }
  return result;
}

void OnlineEloState::Register(const std::string& model, double rating) {
  ratings.emplace(model, rating);
}

OnlineEloState OnlineEloUpdate(const OnlineEloState& state,
                               std::string_view model_i,
                               std::string_view model_j, double outcome) {
  if (model_i == model_j) {
    Fail(ErrorCode::kUnknownModel, "a model cannot battle itself");
  }
  Require(outcome == 0.0 || outcome == 0.5 || outcome == 1.0,
          "outcome must be 0, 0.5 or 1");
  auto it_i = state.ratings.find(model_i);
  auto it_j = state.ratings.find(model_j);
  if (it_i == state.ratings.end() || it_j == state.ratings.end()) {
    Fail(ErrorCode::kUnknownModel, "model not registered in online Elo state");
  }
  const double r_i = it_i->second;
  const double r_j = it_j->second;
  OnlineEloState next = state;
  next.ratings[std::string(model_i)] =
      r_i + state.k_factor * (outcome - ExpectedScore(r_i, r_j, state.alpha_scale));
  next.ratings[std::string(model_j)] =
      r_j + state.k_factor *
                ((1.0 - outcome) - ExpectedScore(r_j, r_i, state.alpha_scale));
  return next;
}

}  // namespace arena
