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

#ifndef KCF_RECOMMEND_H_
#define KCF_RECOMMEND_H_

#include <span>
#include <vector>

#include "kcf/cf_omd.h"
#include "kcf/gram.h"
#include "kcf/simplex_qp.h"

namespace kcf {

struct ScoredItem {
  ItemId item;
  double score;

  friend bool operator==(const ScoredItem&, const ScoredItem&) = default;
};

// Ranked list for one user. `ranked` holds every item outside `excluded`:
// scored items by descending score then ascending id, followed by items
// without training ratings (score -inf) in id order.
struct Recommendation {
  UserId user = 0;
  std::vector<ScoredItem> ranked;
  std::vector<ItemId> excluded;

  friend bool operator==(const Recommendation&,
                         const Recommendation&) = default;
};

// Rounds to 40 mantissa bits so that formulations that agree up to a few
// ulps produce the same key. Applied to every reported score.
double QuantizeScore(double score);

// Builds the ranking from one score per item. Excludes the training items
// of `u`; items unrated in `train` are appended with score -inf.
Recommendation RankScores(const InteractionMatrix& train, UserId u,
                          std::span<const double> scores);

// r_ui = sum_{j in I_u} alpha_j K(x_i, x_j) - q_i, with `q` the same per-item
// vector the QP was trained on.
Recommendation ScoreUser(const UserSolution& solution, const GramMatrix& gram,
                         std::span<const double> q,
                         const InteractionMatrix& train, UserId u);

// Feature-space form r_ui = x_i . (sum_j alpha_j x_j - mu_u^-).
Recommendation ScoreUserEcf(const UserSolution& solution,
                            const ItemVectors& vectors,
                            const NegativeCentroidCache& cache, UserId u);

// |U_i n U_j| / (|U_i|^alpha |U_j|^(1 - alpha)); 0 when either is unrated.
double AsymmetricCosine(const InteractionMatrix& train, ItemId i, ItemId j,
                        double alpha);

// r_ui = sum_{j in I_u} w_ij^locality_q. Throws ConfigError for alpha
// outside [0, 1] or locality_q < 1.
Recommendation AsymcRecommend(const InteractionMatrix& train, double alpha,
                              double locality_q, UserId u);

}  // namespace kcf

#endif  // KCF_RECOMMEND_H_
