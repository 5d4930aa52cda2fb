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

#ifndef KCF_SIMPLEX_QP_H_
#define KCF_SIMPLEX_QP_H_

#include <vector>

#include <Eigen/Dense>

namespace kcf {

// Euclidean projection of `v` onto {a : a >= 0, sum(a) = 1}.
Eigen::VectorXd ProjectOntoSimplex(const Eigen::Ref<const Eigen::VectorXd>& v);

struct SolverOptions {
  // Bound on the infinity norm of the gradient mapping
  // L (a - P(a - grad / L)).
  double tolerance = 1e-6;
  int max_iterations = 1000;
  // Momentum with function-value restarts. Off gives plain projected
  // gradient. Both keep the objective non-increasing.
  bool accelerate = true;
  // Keep the objective after every iteration in UserSolution::trace.
  bool record_trace = false;
};

enum class SolveStatus { kConverged, kMaxIterations };

struct UserSolution {
  Eigen::VectorXd alpha;
  int iterations = 0;
  double final_gap = 0.0;
  double objective = 0.0;
  SolveStatus status = SolveStatus::kConverged;
  // Objective at the start and after each iteration when requested.
  std::vector<double> trace;

  bool converged() const { return status == SolveStatus::kConverged; }
};

// minimize  a' (Q + diag(ridge)) a - 2 linear' a
// over a product of probability simplices, one per consecutive block of
// coordinates. Q must be symmetric positive semidefinite (not checked).
struct BlockSimplexQp {
  Eigen::MatrixXd quadratic;
  Eigen::VectorXd ridge;
  Eigen::VectorXd linear;
  std::vector<Eigen::Index> block_sizes;
};

// Objective value of a feasible or infeasible point.
double Objective(const BlockSimplexQp& qp,
                 const Eigen::Ref<const Eigen::VectorXd>& alpha);
// 2 ((Q + diag(ridge)) a - linear).
Eigen::VectorXd Gradient(const BlockSimplexQp& qp,
                         const Eigen::Ref<const Eigen::VectorXd>& alpha);

// Throws ContractError on inconsistent dimensions or negative ridge and
// NumericError on non-finite inputs.
UserSolution SolveBlockSimplexQp(const BlockSimplexQp& qp,
                                 const SolverOptions& options = {});

// Single-simplex form: minimize a' K a + lambda_p |a|^2 - 2 a' q.
UserSolution SolveSimplexQp(const Eigen::MatrixXd& kernel,
                            const Eigen::VectorXd& q, double lambda_p,
                            const SolverOptions& options = {});

}  // namespace kcf

#endif  // KCF_SIMPLEX_QP_H_
