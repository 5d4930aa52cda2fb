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

// Independent reference computations used by the unit and acceptance tests.
// Everything here is deliberately naive: dense loops, explicit sums and
// exhaustive search.

#ifndef KCF_TESTS_TESTING_ORACLES_H_
#define KCF_TESTS_TESTING_ORACLES_H_

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kcf/interaction_matrix.h"
#include "kcf/kernel.h"
#include "kcf/random.h"

namespace kcf::testing {

// Each (user, item) cell is set independently with probability p.
InteractionMatrix UniformMatrix(Rng& rng, std::int32_t n, std::int32_t m,
                                double p);

// Sparse random matrix in which every user has at least `min_per_user` and
// at most m - 1 items, and every item at least one rating.
InteractionMatrix RandomSparseMatrix(Rng& rng, std::int32_t n, std::int32_t m,
                                     double p, int min_per_user = 1);

// Item popularity ~ rank^-skew, users uniform.
InteractionMatrix LongTailMatrix(Rng& rng, std::int32_t n, std::int32_t m,
                                 double ratings_per_user, double skew);

// Dense n x m 0/1 matrix.
Eigen::MatrixXd DenseRatings(const InteractionMatrix& mtx);

// Columns divided by their norms; zero columns stay zero.
Eigen::MatrixXd NormalizedColumns(const InteractionMatrix& mtx);

// K_ij = f(x_i . x_j) (minus a_0 when reduced) from explicit column dot
// products, over every pair of rated items. Unrated items give zero rows.
Eigen::MatrixXd DenseGram(const InteractionMatrix& mtx, const KernelSpec& spec);

// mu_u^- as the plain mean of the normalized negative columns.
Eigen::VectorXd DirectNegativeCentroid(const InteractionMatrix& mtx, UserId u);

// Exact q_u = mean of K over the negative columns, from a dense gram.
Eigen::VectorXd DirectQExact(const InteractionMatrix& mtx,
                             const Eigen::MatrixXd& gram, UserId u);

// Symmetric PSD matrix B B' / n with Gaussian B.
Eigen::MatrixXd RandomPsd(Rng& rng, int n);
Eigen::VectorXd RandomGaussian(Rng& rng, int n);

// Uniform (Dirichlet(1)) point on the probability simplex.
Eigen::VectorXd RandomSimplexPoint(Rng& rng, int n);

double QpObjective(const Eigen::MatrixXd& k, const Eigen::VectorXd& q,
                   double lambda, const Eigen::VectorXd& alpha);

// Minimum of the QP over simplex points whose coordinates are multiples of
// 1e-3: exhaustive at 1/40, then local lattice descent at 1/200 and 1/1000.
double GridSearchMinimum(const Eigen::MatrixXd& k, const Eigen::VectorXd& q,
                         double lambda);

// Central differences of f at x with step h.
Eigen::VectorXd CentralDifferences(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h);

// Fraction of (positive, negative) pairs with a strictly larger positive
// score, by double loop.
double BruteForceAuc(const std::vector<double>& positive_scores,
                     const std::vector<double>& negative_scores);

// sum_{k=1..N} P@k rel(k) / min(|positives|, N), recounting P@k at every k.
double BruteForceAp(const std::vector<ItemId>& ranked,
                    const std::vector<ItemId>& positives, int n);

// Fraction of item pairs (i < j) ordered the same way by both score vectors.
double PairwiseAgreement(const std::vector<double>& a,
                         const std::vector<double>& b);

}  // namespace kcf::testing

#endif  // KCF_TESTS_TESTING_ORACLES_H_
