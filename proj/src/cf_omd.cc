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

#include "kcf/cf_omd.h"

#include <cmath>
#include <string>

#include "kcf/errors.h"

namespace kcf {

NegativeCentroidCache::NegativeCentroidCache(const ItemVectors& vectors) {
  const InteractionMatrix& mtx = vectors.matrix();
  total_ = Eigen::VectorXd::Zero(mtx.num_users());
  norms_.resize(mtx.num_items());
  for (ItemId i = 0; i < mtx.num_items(); ++i) {
    norms_[i] = vectors.Norm(i);
    if (!vectors.Reachable(i)) continue;
    const double weight = 1.0 / norms_[i];
    for (UserId v : mtx.UsersOf(i)) total_[v] += weight;
  }
}

Eigen::VectorXd NegativeCentroidCache::NegativeCentroid(
    const InteractionMatrix& matrix, UserId u) const {
  const std::int32_t negatives = matrix.NegativeCount(u);
  if (negatives == 0) {
    throw DegenerateUserError("user " + std::to_string(u) +
                              " has rated every item");
  }
  Eigen::VectorXd mu = total_;
  for (ItemId i : matrix.ItemsOf(u)) {
    const double weight = 1.0 / norms_[i];
    for (UserId v : matrix.UsersOf(i)) mu[v] -= weight;
  }
  return mu / static_cast<double>(negatives);
}

namespace {

void CheckUser(const InteractionMatrix& mtx, UserId u, double lambda_p) {
  if (u < 0 || u >= mtx.num_users()) {
    throw ContractError("user id " + std::to_string(u) + " out of range");
  }
  if (mtx.PositiveCount(u) == 0) {
    throw DegenerateUserError("user " + std::to_string(u) +
                              " has no training positives");
  }
  if (mtx.NegativeCount(u) == 0) {
    throw DegenerateUserError("user " + std::to_string(u) +
                              " has rated every item");
  }
  if (!std::isfinite(lambda_p)) throw NumericError("lambda_p is not finite");
  if (lambda_p < 0.0) throw ContractError("lambda_p must be non-negative");
}

}  // namespace

UserProblem BuildEcfProblem(const ItemVectors& vectors,
                            const NegativeCentroidCache& cache, UserId u,
                            double lambda_p) {
  const InteractionMatrix& mtx = vectors.matrix();
  CheckUser(mtx, u, lambda_p);
  const auto items = mtx.ItemsOf(u);
  const auto size = static_cast<Eigen::Index>(items.size());

  UserProblem problem;
  problem.user = u;
  problem.positives.assign(items.begin(), items.end());
  problem.lambda_p = lambda_p;

  // Co-occurrence counts among the positives, one user at a time.
  std::vector<Eigen::Index> position(mtx.num_items(), -1);
  for (Eigen::Index a = 0; a < size; ++a) position[items[a]] = a;
  std::vector<char> visited(mtx.num_users(), 0);
  Eigen::MatrixXd shared = Eigen::MatrixXd::Zero(size, size);
  std::vector<Eigen::Index> local;
  for (ItemId j : items) {
    for (UserId v : mtx.UsersOf(j)) {
      if (visited[v]) continue;
      visited[v] = 1;
      local.clear();
      for (ItemId k : mtx.ItemsOf(v)) {
        if (position[k] >= 0) local.push_back(position[k]);
      }
      for (Eigen::Index a : local) {
        for (Eigen::Index b : local) shared(a, b) += 1.0;
      }
    }
  }
  problem.k_plus.resize(size, size);
  for (Eigen::Index a = 0; a < size; ++a) {
    for (Eigen::Index b = 0; b < size; ++b) {
      problem.k_plus(a, b) = vectors.Cosine(
          static_cast<std::int64_t>(shared(a, b)), items[a], items[b]);
    }
  }

  const Eigen::VectorXd mu = cache.NegativeCentroid(mtx, u);
  problem.q.resize(size);
  for (Eigen::Index a = 0; a < size; ++a) {
    double dot = 0.0;
    for (UserId v : mtx.UsersOf(items[a])) dot += mu[v];
    problem.q[a] = dot / vectors.Norm(items[a]);
  }
  return problem;
}

UserProblem BuildKomdProblem(const ItemVectors& vectors,
                             const GramMatrix& gram, std::span<const double> q,
                             UserId u, double lambda_p) {
  const InteractionMatrix& mtx = vectors.matrix();
  CheckUser(mtx, u, lambda_p);
  if (gram.num_items() != mtx.num_items() ||
      static_cast<std::int64_t>(q.size()) != mtx.num_items()) {
    throw ContractError("gram, q and matrix disagree on the item count");
  }
  const auto items = mtx.ItemsOf(u);
  for (ItemId i : items) {
    if (!gram.HasRow(i)) {
      throw UnreachableItemError("positive item " + std::to_string(i) +
                                 " of user " + std::to_string(u) +
                                 " is not covered by the gram");
    }
  }
  UserProblem problem;
  problem.user = u;
  problem.positives.assign(items.begin(), items.end());
  problem.lambda_p = lambda_p;
  problem.k_plus = gram.Submatrix(items);
  problem.q.resize(static_cast<Eigen::Index>(items.size()));
  for (std::size_t a = 0; a < items.size(); ++a) problem.q[a] = q[items[a]];
  return problem;
}

UserSolution SolveUserProblem(const UserProblem& problem,
                              const SolverOptions& options) {
  return SolveSimplexQp(problem.k_plus, problem.q, problem.lambda_p, options);
}

UserSolution TrainUserEcf(const ItemVectors& vectors,
                          const NegativeCentroidCache& cache, UserId u,
                          double lambda_p, const SolverOptions& options) {
  return SolveUserProblem(BuildEcfProblem(vectors, cache, u, lambda_p),
                          options);
}

UserSolution TrainUserKomd(const ItemVectors& vectors, const GramMatrix& gram,
                           std::span<const double> q, UserId u,
                           double lambda_p, const SolverOptions& options) {
  return SolveUserProblem(BuildKomdProblem(vectors, gram, q, u, lambda_p),
                          options);
}

ReferenceSolution CfomdReference(const InteractionMatrix& matrix, UserId u,
                                 double lambda_p, double lambda_n,
                                 const SolverOptions& options) {
  const std::int32_t m = matrix.num_items();
  if (m > kReferenceItemCap) {
    throw ConfigError("dense reference is limited to " +
                      std::to_string(kReferenceItemCap) + " items, got " +
                      std::to_string(m));
  }
  CheckUser(matrix, u, lambda_p);
  if (!std::isfinite(lambda_n)) throw NumericError("lambda_n is not finite");
  if (lambda_n < 0.0) throw ContractError("lambda_n must be non-negative");

  ReferenceSolution ref;
  std::vector<char> positive(m, 0);
  for (ItemId i : matrix.ItemsOf(u)) positive[i] = 1;
  for (ItemId i = 0; i < m; ++i) {
    (positive[i] ? ref.positives : ref.negatives).push_back(i);
  }
  std::vector<ItemId> order = ref.positives;
  order.insert(order.end(), ref.negatives.begin(), ref.negatives.end());

  // Columns of X are the normalized item vectors; unrated items stay zero.
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(matrix.num_users(), m);
  for (ItemId i = 0; i < m; ++i) {
    const auto users = matrix.UsersOf(i);
    if (users.empty()) continue;
    const double weight = 1.0 / std::sqrt(static_cast<double>(users.size()));
    for (UserId v : users) x(v, i) = weight;
  }
  const auto size = static_cast<Eigen::Index>(m);
  const auto num_pos = static_cast<Eigen::Index>(ref.positives.size());
  Eigen::MatrixXd xy(matrix.num_users(), size);
  for (Eigen::Index k = 0; k < size; ++k) {
    xy.col(k) = (k < num_pos ? 1.0 : -1.0) * x.col(order[k]);
  }

  BlockSimplexQp qp;
  qp.quadratic = xy.transpose() * xy;
  qp.ridge.resize(size);
  qp.ridge.head(num_pos).setConstant(lambda_p);
  qp.ridge.tail(size - num_pos).setConstant(lambda_n);
  qp.linear = Eigen::VectorXd::Zero(size);
  qp.block_sizes = {num_pos, size - num_pos};
  ref.solution = SolveBlockSimplexQp(qp, options);

  ref.alpha.resize(size);
  for (Eigen::Index k = 0; k < size; ++k) {
    ref.alpha[order[k]] = ref.solution.alpha[k];
  }
  const Eigen::VectorXd w = xy * ref.solution.alpha;
  ref.scores = x.transpose() * w;
  return ref;
}

}  // namespace kcf
