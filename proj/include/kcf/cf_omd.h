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

#ifndef KCF_CF_OMD_H_
#define KCF_CF_OMD_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kcf/gram.h"
#include "kcf/simplex_qp.h"

namespace kcf {

// Per-user margin QP over the training positives I_u:
//   minimize a' K_plus a + lambda_p |a|^2 - 2 a' q   s.t. a on the simplex.
struct UserProblem {
  UserId user = 0;
  std::vector<ItemId> positives;
  Eigen::MatrixXd k_plus;
  Eigen::VectorXd q;
  double lambda_p = 0.0;
};

// Sum of all normalized item vectors, m * mu, as a dense vector over users.
// Gives mu_u^- = (m mu - sum_{i in I_u} x_i) / m_u^- without touching the
// negatives.
class NegativeCentroidCache {
 public:
  explicit NegativeCentroidCache(const ItemVectors& vectors);

  // total[v] = sum_{i in I_v} 1 / |r_i|.
  const Eigen::VectorXd& total() const { return total_; }
  const std::vector<double>& norms() const { return norms_; }

  // mu_u^-. Throws DegenerateUserError when m_u^- = 0.
  Eigen::VectorXd NegativeCentroid(const InteractionMatrix& matrix,
                                   UserId u) const;

 private:
  Eigen::VectorXd total_;
  std::vector<double> norms_;
};

// Linear gram of I_u and q_i = x_i . mu_u^-.
UserProblem BuildEcfProblem(const ItemVectors& vectors,
                            const NegativeCentroidCache& cache, UserId u,
                            double lambda_p);

// Gram restricted to I_u and `q` (one value per item) restricted to I_u.
// Throws UnreachableItemError when a positive has no gram row.
UserProblem BuildKomdProblem(const ItemVectors& vectors,
                             const GramMatrix& gram, std::span<const double> q,
                             UserId u, double lambda_p);

UserSolution SolveUserProblem(const UserProblem& problem,
                              const SolverOptions& options = {});

UserSolution TrainUserEcf(const ItemVectors& vectors,
                          const NegativeCentroidCache& cache, UserId u,
                          double lambda_p, const SolverOptions& options = {});

UserSolution TrainUserKomd(const ItemVectors& vectors, const GramMatrix& gram,
                           std::span<const double> q, UserId u,
                           double lambda_p, const SolverOptions& options = {});

// Largest catalog the dense two-block reference accepts.
inline constexpr std::int32_t kReferenceItemCap = 500;

struct ReferenceSolution {
  // Positives then negatives, each ascending.
  std::vector<ItemId> positives;
  std::vector<ItemId> negatives;
  // Weight of every item, indexed by item id.
  Eigen::VectorXd alpha;
  // w_u . x_i for every item, w_u = sum_pos a_i x_i - sum_neg a_i x_i.
  Eigen::VectorXd scores;
  UserSolution solution;
};

// Full margin-distribution QP with both halves of the distribution as free
// variables and ridge lambda_p on positives, lambda_n on negatives.
// Dense; refuses catalogs above kReferenceItemCap with ConfigError.
ReferenceSolution CfomdReference(const InteractionMatrix& matrix, UserId u,
                                 double lambda_p, double lambda_n,
                                 const SolverOptions& options = {});

}  // namespace kcf

#endif  // KCF_CF_OMD_H_
