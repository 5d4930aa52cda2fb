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

#include "kcf/simplex_qp.h"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "kcf/errors.h"
#include "testing/oracles.h"

namespace kcf {
namespace {

void ExpectOnSimplex(const Eigen::VectorXd& a) {
  EXPECT_GE(a.minCoeff(), 0.0);
  EXPECT_NEAR(a.sum(), 1.0, 1e-9);
}

TEST(ProjectOntoSimplexTest, FixedPointsAndKnownProjections) {
  Eigen::VectorXd p(3);
  p << 0.2, 0.3, 0.5;
  EXPECT_LE((ProjectOntoSimplex(p) - p).cwiseAbs().maxCoeff(), 1e-15);
  Eigen::VectorXd v(3);
  v << 2.0, 0.0, 0.0;
  Eigen::VectorXd e(3);
  e << 1.0, 0.0, 0.0;
  EXPECT_EQ(ProjectOntoSimplex(v), e);
  v << 0.0, 0.0, 0.0;
  EXPECT_LE((ProjectOntoSimplex(v).array() - 1.0 / 3.0).abs().maxCoeff(),
            1e-15);
}

TEST(ProjectOntoSimplexTest, IsTheClosestFeasiblePoint) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(UniformBelow(rng, 12));
    const Eigen::VectorXd v = 2.0 * testing::RandomGaussian(rng, n);
    const Eigen::VectorXd p = ProjectOntoSimplex(v);
    ExpectOnSimplex(p);
    // Variational inequality: (v - p) . (z - p) <= 0 for every feasible z.
    for (int k = 0; k < 20; ++k) {
      const Eigen::VectorXd z = testing::RandomSimplexPoint(rng, n);
      EXPECT_LE((v - p).dot(z - p), 1e-12);
    }
  }
}

TEST(SolveSimplexQpTest, SinglePositiveNeedsNoIterations) {
  Eigen::MatrixXd k(1, 1);
  k << 0.7;
  Eigen::VectorXd q(1);
  q << 0.3;
  const UserSolution sol = SolveSimplexQp(k, q, 0.01);
  EXPECT_EQ(sol.iterations, 0);
  EXPECT_TRUE(sol.converged());
  EXPECT_EQ(sol.alpha(0), 1.0);
}

TEST(SolveSimplexQpTest, IdentityWithZeroLinearIsUniform) {
  for (int n : {2, 3, 7, 20}) {
    const UserSolution sol = SolveSimplexQp(Eigen::MatrixXd::Identity(n, n),
                                            Eigen::VectorXd::Zero(n), 0.0);
    EXPECT_TRUE(sol.converged());
    EXPECT_LE((sol.alpha.array() - 1.0 / n).abs().maxCoeff(), 1e-9);
  }
}

TEST(SolveSimplexQpTest, MatchesGridSearchOnFiveVariables) {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXd k = testing::RandomPsd(rng, 5);
    const Eigen::VectorXd q = 0.5 * testing::RandomGaussian(rng, 5);
    const double lambda = 0.01 * trial;
    SolverOptions options;
    options.tolerance = 1e-9;
    options.max_iterations = 100000;
    const UserSolution sol = SolveSimplexQp(k, q, lambda, options);
    ASSERT_TRUE(sol.converged());
    const double grid = testing::GridSearchMinimum(k, q, lambda);
    const double value = testing::QpObjective(k, q, lambda, sol.alpha);
    EXPECT_NEAR(value, grid, 1e-4);
    EXPECT_LE(value, grid + 1e-12);
  }
}

TEST(SolveSimplexQpTest, ReportedObjectiveAndGapAreConsistent) {
  Rng rng(2);
  const Eigen::MatrixXd k = testing::RandomPsd(rng, 12);
  const Eigen::VectorXd q = testing::RandomGaussian(rng, 12);
  const UserSolution sol = SolveSimplexQp(k, q, 0.05);
  ASSERT_TRUE(sol.converged());
  EXPECT_LE(sol.final_gap, 1e-6);
  EXPECT_NEAR(sol.objective, testing::QpObjective(k, q, 0.05, sol.alpha),
              1e-12);
}

TEST(SolveSimplexQpTest, ShiftByConstantKeepsTheArgmin) {
  Rng rng(19);
  SolverOptions options;
  options.max_iterations = 100000;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(UniformBelow(rng, 15));
    const Eigen::MatrixXd k = testing::RandomPsd(rng, n);
    const Eigen::VectorXd q = testing::RandomGaussian(rng, n);
    const UserSolution base = SolveSimplexQp(k, q, 0.01, options);
    for (double c : {0.0, 7.3}) {
      const Eigen::MatrixXd ks = k.array() + c;
      const Eigen::VectorXd qs = q.array() + c;
      const UserSolution shifted = SolveSimplexQp(ks, qs, 0.01, options);
      ASSERT_TRUE(shifted.converged());
      EXPECT_LE((base.alpha - shifted.alpha).cwiseAbs().maxCoeff(),
                10 * options.tolerance);
      if (c == 0.0) {
        EXPECT_EQ(base.alpha, shifted.alpha);
      }
    }
  }
}

TEST(SolveSimplexQpTest, TraceIsMonotoneAndIteratesFeasible) {
  Rng rng(23);
  for (bool accelerate : {true, false}) {
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 3 + static_cast<int>(UniformBelow(rng, 30));
      const Eigen::MatrixXd k = testing::RandomPsd(rng, n);
      const Eigen::VectorXd q = testing::RandomGaussian(rng, n);
      SolverOptions options;
      options.accelerate = accelerate;
      options.record_trace = true;
      options.max_iterations = 5000;
      const UserSolution sol = SolveSimplexQp(k, q, 0.01, options);
      ExpectOnSimplex(sol.alpha);
      ASSERT_EQ(sol.trace.size(), static_cast<std::size_t>(sol.iterations) + 1);
      for (std::size_t t = 1; t < sol.trace.size(); ++t) {
        EXPECT_LE(sol.trace[t],
                  sol.trace[t - 1] + 1e-12 * std::max(1.0, std::abs(
                                                               sol.trace[t - 1])));
      }
    }
  }
}

TEST(SolveSimplexQpTest, MaxIterationsIsReported) {
  Rng rng(29);
  const Eigen::MatrixXd k = testing::RandomPsd(rng, 40);
  const Eigen::VectorXd q = testing::RandomGaussian(rng, 40);
  SolverOptions options;
  options.max_iterations = 1;
  options.tolerance = 1e-14;
  const UserSolution sol = SolveSimplexQp(k, q, 0.0, options);
  EXPECT_EQ(sol.status, SolveStatus::kMaxIterations);
  EXPECT_EQ(sol.iterations, 1);
  ExpectOnSimplex(sol.alpha);
}

TEST(GradientTest, MatchesCentralDifferences) {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(UniformBelow(rng, 10));
    BlockSimplexQp qp;
    qp.quadratic = testing::RandomPsd(rng, n);
    qp.ridge = Eigen::VectorXd::Constant(n, 0.01);
    qp.linear = testing::RandomGaussian(rng, n);
    qp.block_sizes = {n};
    const Eigen::VectorXd x = testing::RandomSimplexPoint(rng, n);
    const Eigen::VectorXd numeric = testing::CentralDifferences(
        [&](const Eigen::VectorXd& a) { return Objective(qp, a); }, x, 1e-5);
    const Eigen::VectorXd analytic = Gradient(qp, x);
    EXPECT_LE((numeric - analytic).norm(), 1e-6 * std::max(1.0, analytic.norm()));
  }
}

TEST(SolveBlockSimplexQpTest, EachBlockIsASimplex) {
  Rng rng(37);
  BlockSimplexQp qp;
  qp.quadratic = testing::RandomPsd(rng, 7);
  qp.ridge = Eigen::VectorXd::Constant(7, 0.1);
  qp.linear = testing::RandomGaussian(rng, 7);
  qp.block_sizes = {3, 4};
  const UserSolution sol = SolveBlockSimplexQp(qp);
  EXPECT_TRUE(sol.converged());
  ExpectOnSimplex(sol.alpha.head(3));
  ExpectOnSimplex(sol.alpha.tail(4));
  // No feasible random point does better.
  for (int k = 0; k < 500; ++k) {
    Eigen::VectorXd z(7);
    z << testing::RandomSimplexPoint(rng, 3), testing::RandomSimplexPoint(rng, 4);
    EXPECT_LE(sol.objective, Objective(qp, z) + 1e-12);
  }
}

TEST(SolveSimplexQpTest, RejectsBadInput) {
  const Eigen::MatrixXd k = Eigen::MatrixXd::Identity(2, 2);
  EXPECT_THROW(SolveSimplexQp(k, Eigen::VectorXd::Zero(3), 0.0), ContractError);
  EXPECT_THROW(SolveSimplexQp(k, Eigen::VectorXd::Zero(2), -1.0), ContractError);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(2);
  q(1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(SolveSimplexQp(k, q, 0.0), NumericError);
  EXPECT_THROW(SolveSimplexQp(k, Eigen::VectorXd::Zero(2),
                              std::numeric_limits<double>::infinity()),
               NumericError);
  BlockSimplexQp qp;
  qp.quadratic = k;
  qp.ridge = Eigen::VectorXd::Zero(2);
  qp.linear = Eigen::VectorXd::Zero(2);
  qp.block_sizes = {1, 2};
  EXPECT_THROW(SolveBlockSimplexQp(qp), ContractError);
}

}  // namespace
}  // namespace kcf
