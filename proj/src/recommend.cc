/*
 * Copyright 2026 The KCF Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "kcf/recommend.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kcf/errors.h"

namespace kcf {

double QuantizeScore(double score) {
  if (!std::isfinite(score) || score == 0.0) return score;
  int exponent = 0;
  const double mantissa = std::frexp(score, &exponent);
  return std::ldexp(std::nearbyint(std::ldexp(mantissa, 40)), exponent - 40);
}

Recommendation RankScores(const InteractionMatrix& train, UserId u,
                          std::span<const double> scores) {
  const std::int32_t m = train.num_items();
  if (static_cast<std::int64_t>(scores.size()) != m) {
    throw ContractError("expected one score per item");
  }
  Recommendation rec;
  rec.user = u;
  const auto positives = train.ItemsOf(u);
  rec.excluded.assign(positives.begin(), positives.end());
  std::vector<char> skip(m, 0);
  for (ItemId i : positives) skip[i] = 1;

  std::vector<ItemId> unreachable;
  rec.ranked.reserve(m - positives.size());
  for (ItemId i = 0; i < m; ++i) {
    if (skip[i]) continue;
    if (train.Popularity(i) == 0) {
      unreachable.push_back(i);
    } else {
      rec.ranked.push_back({i, QuantizeScore(scores[i])});
    }
  }
  std::sort(rec.ranked.begin(), rec.ranked.end(),
            [](const ScoredItem& a, const ScoredItem& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.item < b.item;
            });
  for (ItemId i : unreachable) {
    rec.ranked.push_back({i, -std::numeric_limits<double>::infinity()});
  }
  return rec;
}

namespace {

void CheckSolution(const UserSolution& solution,
                   const InteractionMatrix& train, UserId u) {
  if (u < 0 || u >= train.num_users()) {
    throw ContractError("user id " + std::to_string(u) + " out of range");
  }
  if (solution.alpha.size() != train.PositiveCount(u)) {
    throw ContractError("solution does not match the positives of user " +
                        std::to_string(u));
  }
}

}  // namespace

Recommendation ScoreUser(const UserSolution& solution, const GramMatrix& gram,
                         std::span<const double> q,
                         const InteractionMatrix& train, UserId u) {
  CheckSolution(solution, train, u);
  if (gram.num_items() != train.num_items() ||
      static_cast<std::int64_t>(q.size()) != train.num_items()) {
    throw ContractError("gram, q and matrix disagree on the item count");
  }
  std::vector<double> scores(train.num_items(), 0.0);
  const auto positives = train.ItemsOf(u);
  for (std::size_t a = 0; a < positives.size(); ++a) {
    const double weight = solution.alpha[static_cast<Eigen::Index>(a)];
    if (weight == 0.0) continue;
    const auto cols = gram.RowCols(positives[a]);
    const auto values = gram.RowValues(positives[a]);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      scores[cols[k]] += weight * values[k];
    }
  }
  for (std::size_t i = 0; i < scores.size(); ++i) scores[i] -= q[i];
  return RankScores(train, u, scores);
}

Recommendation ScoreUserEcf(const UserSolution& solution,
                            const ItemVectors& vectors,
                            const NegativeCentroidCache& cache, UserId u) {
  const InteractionMatrix& train = vectors.matrix();
  CheckSolution(solution, train, u);
  Eigen::VectorXd w = -cache.NegativeCentroid(train, u);
  const auto positives = train.ItemsOf(u);
  for (std::size_t a = 0; a < positives.size(); ++a) {
    const double weight = solution.alpha[static_cast<Eigen::Index>(a)] /
                          vectors.Norm(positives[a]);
    for (UserId v : train.UsersOf(positives[a])) w[v] += weight;
  }
  std::vector<double> scores(train.num_items(), 0.0);
  for (ItemId i = 0; i < train.num_items(); ++i) {
    if (!vectors.Reachable(i)) continue;
    double dot = 0.0;
    for (UserId v : train.UsersOf(i)) dot += w[v];
    scores[i] = dot / vectors.Norm(i);
  }
  return RankScores(train, u, scores);
}

double AsymmetricCosine(const InteractionMatrix& train, ItemId i, ItemId j,
                        double alpha) {
  const auto a = train.UsersOf(i);
  const auto b = train.UsersOf(j);
  if (a.empty() || b.empty()) return 0.0;
  std::vector<UserId> both;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(both));
  return static_cast<double>(both.size()) /
         (std::pow(static_cast<double>(a.size()), alpha) *
          std::pow(static_cast<double>(b.size()), 1.0 - alpha));
}

Recommendation AsymcRecommend(const InteractionMatrix& train, double alpha,
                              double locality_q, UserId u) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ConfigError("asymmetric cosine alpha must lie in [0, 1]");
  }
  if (!(locality_q >= 1.0) || !std::isfinite(locality_q)) {
    throw ConfigError("locality exponent q must be a finite value >= 1");
  }
  if (u < 0 || u >= train.num_users()) {
    throw ContractError("user id " + std::to_string(u) + " out of range");
  }
  const std::int32_t m = train.num_items();
  std::vector<double> scores(m, 0.0);
  const auto positives = train.ItemsOf(u);
  auto popularity = [&train](ItemId i) {
    return static_cast<double>(train.Popularity(i));
  };

  if (locality_q == 1.0) {
    // Linear in the pair weights, so aggregate through the users:
    // r_ui = |U_i|^-alpha sum_{v in U_i} sum_{j in I_u n I_v} |U_j|^(alpha-1).
    std::vector<double> item_weight(m, 0.0);
    for (ItemId j : positives) {
      item_weight[j] = std::pow(popularity(j), alpha - 1.0);
    }
    std::vector<double> user_weight(train.num_users(), 0.0);
    for (ItemId j : positives) {
      for (UserId v : train.UsersOf(j)) user_weight[v] += item_weight[j];
    }
    for (ItemId i = 0; i < m; ++i) {
      if (train.Popularity(i) == 0) continue;
      double sum = 0.0;
      for (UserId v : train.UsersOf(i)) sum += user_weight[v];
      scores[i] = sum * std::pow(popularity(i), -alpha);
    }
    return RankScores(train, u, scores);
  }

  std::vector<std::int32_t> shared(m, 0);
  std::vector<ItemId> touched;
  for (ItemId j : positives) {
    touched.clear();
    for (UserId v : train.UsersOf(j)) {
      for (ItemId i : train.ItemsOf(v)) {
        if (shared[i]++ == 0) touched.push_back(i);
      }
    }
    const double right = std::pow(popularity(j), 1.0 - alpha);
    for (ItemId i : touched) {
      const double w = shared[i] / (std::pow(popularity(i), alpha) * right);
      scores[i] += std::pow(w, locality_q);
      shared[i] = 0;
    }
  }
  return RankScores(train, u, scores);
}

}  // namespace kcf
