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

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "kcf/errors.h"

namespace kcf {

Eigen::VectorXd ProjectOntoSimplex(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const Eigen::Index n = v.size();
  if (n == 0) throw ContractError("cannot project onto an empty simplex");
  if (n == 1) return Eigen::VectorXd::Ones(1);
  // Sort-based threshold search: theta = (sum of the top r values - 1) / r
  // for the largest r keeping the r-th value above theta.
  std::vector<double> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    cumulative += sorted[r];
    const double candidate = (cumulative - 1.0) / static_cast<double>(r + 1);
    if (sorted[r] - candidate > 0.0) theta = candidate;
  }
  return (v.array() - theta).max(0.0).matrix();
}

double Objective(const BlockSimplexQp& qp,
                 const Eigen::Ref<const Eigen::VectorXd>& alpha) {
  return alpha.dot(qp.quadratic * alpha) +
         alpha.dot(qp.ridge.cwiseProduct(alpha)) - 2.0 * qp.linear.dot(alpha);
}

Eigen::VectorXd Gradient(const BlockSimplexQp& qp,
                         const Eigen::Ref<const Eigen::VectorXd>& alpha) {
  return 2.0 * (qp.quadratic * alpha + qp.ridge.cwiseProduct(alpha) -
                qp.linear);
}

namespace {

constexpr double kMinLipschitz = 1e-3;

struct Block {
  Eigen::Index start;
  Eigen::Index size;
};

void Validate(const BlockSimplexQp& qp) {
  const Eigen::Index n = qp.quadratic.rows();
  if (qp.quadratic.cols() != n || qp.linear.size() != n ||
      qp.ridge.size() != n) {
    throw ContractError("QP dimensions disagree: quadratic " +
                        std::to_string(qp.quadratic.rows()) + "x" +
                        std::to_string(qp.quadratic.cols()) + ", linear " +
                        std::to_string(qp.linear.size()) + ", ridge " +
                        std::to_string(qp.ridge.size()));
  }
  Eigen::Index total = 0;
  for (Eigen::Index size : qp.block_sizes) {
    if (size < 1) throw ContractError("empty simplex block");
    total += size;
  }
  if (total != n || n == 0) {
    throw ContractError("simplex blocks do not cover the QP variables");
  }
  if (!qp.quadratic.allFinite() || !qp.linear.allFinite() ||
      !qp.ridge.allFinite()) {
    throw NumericError("QP input contains NaN or infinity");
  }
  if ((qp.ridge.array() < 0.0).any()) {
    throw ContractError("ridge weights must be non-negative");
  }
}

// Removes the mean so the vector lies in the simplex tangent space.
void Center(Eigen::Ref<Eigen::VectorXd> v) { v.array() -= v.mean(); }

// Largest eigenvalue of the block Hessian restricted to {v : sum(v) = 0},
// by power iteration. Constant shifts of the block vanish on that subspace.
double TangentCurvature(const BlockSimplexQp& qp, const Block& block) {
  if (block.size < 2) return 0.0;
  const auto h = qp.quadratic.block(block.start, block.start, block.size,
                                    block.size);
  const auto ridge = qp.ridge.segment(block.start, block.size);
  Eigen::VectorXd v(block.size);
  // Deterministic start with components along every direction.
  for (Eigen::Index k = 0; k < block.size; ++k) {
    v[k] = std::sin(1.0 + 2.3 * static_cast<double>(k));
  }
  Center(v);
  double norm = v.norm();
  if (norm == 0.0) return 0.0;
  v /= norm;
  double estimate = 0.0;
  for (int iteration = 0; iteration < 60; ++iteration) {
    Eigen::VectorXd w = h * v + ridge.cwiseProduct(v);
    Center(w);
    estimate = v.dot(w);
    norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
  }
  return std::max(estimate, norm);
}

class BlockProjector {
 public:
  explicit BlockProjector(std::vector<Block> blocks)
      : blocks_(std::move(blocks)) {}

  const std::vector<Block>& blocks() const { return blocks_; }

  // P(x - grad ./ step) block by block.
  Eigen::VectorXd Step(const Eigen::VectorXd& x, const Eigen::VectorXd& grad,
                       const std::vector<double>& lipschitz) const {
    Eigen::VectorXd out(x.size());
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const Block& block = blocks_[b];
      out.segment(block.start, block.size) = ProjectOntoSimplex(
          x.segment(block.start, block.size) -
          grad.segment(block.start, block.size) / lipschitz[b]);
    }
    return out;
  }

  // max_b L_b |x_b - P(x_b - g_b / L_b)|_inf.
  double GradientMapping(const Eigen::VectorXd& x, const Eigen::VectorXd& grad,
                         const std::vector<double>& lipschitz) const {
    double gap = 0.0;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const Block& block = blocks_[b];
      if (block.size < 2) continue;
      const Eigen::VectorXd projected = ProjectOntoSimplex(
          x.segment(block.start, block.size) -
          grad.segment(block.start, block.size) / lipschitz[b]);
      gap = std::max(gap, lipschitz[b] *
                               (x.segment(block.start, block.size) - projected)
                                   .lpNorm<Eigen::Infinity>());
    }
    return gap;
  }

 private:
  std::vector<Block> blocks_;
};

}  // namespace

UserSolution SolveBlockSimplexQp(const BlockSimplexQp& qp,
                                 const SolverOptions& options) {
  Validate(qp);
  std::vector<Block> blocks;
  Eigen::Index start = 0;
  for (Eigen::Index size : qp.block_sizes) {
    blocks.push_back({start, size});
    start += size;
  }
  const BlockProjector projector(blocks);
  const Eigen::Index n = qp.quadratic.rows();

  // Per-block step sizes. For several blocks the Hessian is bounded by twice
  // its block diagonal, hence the extra factor. The floor keeps the gradient
  // mapping meaningful when a block has no curvature.
  const double coupling = blocks.size() > 1 ? 2.0 : 1.0;
  std::vector<double> lipschitz;
  for (const Block& block : blocks) {
    const double curvature = TangentCurvature(qp, block);
    lipschitz.push_back(std::max(2.0 * coupling * curvature * 1.01, kMinLipschitz));
  }

  auto hessian_times = [&qp](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return qp.quadratic * v + qp.ridge.cwiseProduct(v);
  };
  auto objective_of = [&qp](const Eigen::VectorXd& v,
                            const Eigen::VectorXd& hv) {
    return v.dot(hv) - 2.0 * qp.linear.dot(v);
  };

  UserSolution solution;
  Eigen::VectorXd x(n);
  for (const Block& block : blocks) {
    x.segment(block.start, block.size)
        .setConstant(1.0 / static_cast<double>(block.size));
  }
  Eigen::VectorXd hx = hessian_times(x);
  double fx = objective_of(x, hx);
  if (options.record_trace) solution.trace.push_back(fx);

  double gap =
      projector.GradientMapping(x, 2.0 * (hx - qp.linear), lipschitz);
  Eigen::VectorXd y = x;
  Eigen::VectorXd hy = hx;
  double momentum = 1.0;
  // A projected step from x itself always descends; rounding can hide the
  // decrease near the optimum, so it is accepted without comparing values.
  bool from_x = true;
  int iteration = 0;

  while (gap > options.tolerance && iteration < options.max_iterations) {
    ++iteration;
    const double fy = objective_of(y, hy);
    const Eigen::VectorXd grad = 2.0 * (hy - qp.linear);
    Eigen::VectorXd z;
    Eigen::VectorXd hz;
    double fz = 0.0;
    // Backtracking on the block-scaled quadratic upper bound.
    for (int attempt = 0;; ++attempt) {
      z = projector.Step(y, grad, lipschitz);
      hz = hessian_times(z);
      fz = objective_of(z, hz);
      const Eigen::VectorXd d = z - y;
      double bound = fy + grad.dot(d);
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        bound += 0.5 * lipschitz[b] *
                 d.segment(blocks[b].start, blocks[b].size).squaredNorm();
      }
      const double slack = 1e-12 * std::max(1.0, std::abs(fy));
      if (fz <= bound + slack || attempt >= 60) break;
      for (double& l : lipschitz) l *= 2.0;
    }

    if (!options.accelerate) {
      x = std::move(z);
      hx = std::move(hz);
      fx = fz;
      y = x;
      hy = hx;
    } else if (fz <= fx || from_x) {
      const double next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      const double beta = (momentum - 1.0) / next;
      y = z + beta * (z - x);
      hy = hz + beta * (hz - hx);
      x = std::move(z);
      hx = std::move(hz);
      fx = fz;
      momentum = next;
      from_x = false;
    } else {
      // The extrapolated step went uphill: drop the momentum.
      y = x;
      hy = hx;
      momentum = 1.0;
      from_x = true;
    }
    if (options.record_trace) solution.trace.push_back(fx);
    gap = projector.GradientMapping(x, 2.0 * (hx - qp.linear), lipschitz);
  }

  solution.alpha = std::move(x);
  solution.iterations = iteration;
  solution.final_gap = gap;
  solution.objective = fx;
  solution.status = gap <= options.tolerance ? SolveStatus::kConverged
                                             : SolveStatus::kMaxIterations;
  return solution;
}

UserSolution SolveSimplexQp(const Eigen::MatrixXd& kernel,
                            const Eigen::VectorXd& q, double lambda_p,
                            const SolverOptions& options) {
  if (!std::isfinite(lambda_p)) throw NumericError("lambda_p is not finite");
  if (lambda_p < 0.0) throw ContractError("lambda_p must be non-negative");
  BlockSimplexQp qp;
  qp.quadratic = kernel;
  qp.ridge = Eigen::VectorXd::Constant(q.size(), lambda_p);
  qp.linear = q;
  qp.block_sizes = {kernel.rows()};
  return SolveBlockSimplexQp(qp, options);
}

}  // namespace kcf
