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

#include "testing/oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace kcf::testing {
namespace {

InteractionMatrix FromCells(const std::vector<std::vector<char>>& cells,
                            std::int32_t m) {
  std::vector<std::pair<UserId, ItemId>> pairs;
  for (std::size_t u = 0; u < cells.size(); ++u) {
    for (ItemId i = 0; i < m; ++i) {
      if (cells[u][i]) pairs.emplace_back(static_cast<UserId>(u), i);
    }
  }
  return InteractionMatrix::FromPairs(static_cast<std::int32_t>(cells.size()),
                                      m, pairs);
}

}  // namespace

InteractionMatrix UniformMatrix(Rng& rng, std::int32_t n, std::int32_t m,
                                double p) {
  std::bernoulli_distribution cell(p);
  std::vector<std::vector<char>> cells(n, std::vector<char>(m, 0));
  for (auto& row : cells) {
    for (auto& c : row) c = cell(rng);
  }
  return FromCells(cells, m);
}

InteractionMatrix RandomSparseMatrix(Rng& rng, std::int32_t n, std::int32_t m,
                                     double p, int min_per_user) {
  std::bernoulli_distribution cell(p);
  std::vector<std::vector<char>> cells(n, std::vector<char>(m, 0));
  std::vector<int> count(n, 0);
  for (std::int32_t u = 0; u < n; ++u) {
    for (ItemId i = 0; i < m; ++i) {
      cells[u][i] = cell(rng);
      count[u] += cells[u][i];
    }
    while (count[u] < std::min(min_per_user, m - 1)) {
      const auto i = static_cast<ItemId>(UniformBelow(rng, m));
      if (!cells[u][i]) {
        cells[u][i] = 1;
        ++count[u];
      }
    }
    while (count[u] > m - 1) {
      const auto i = static_cast<ItemId>(UniformBelow(rng, m));
      if (cells[u][i]) {
        cells[u][i] = 0;
        --count[u];
      }
    }
  }
  for (ItemId i = 0; i < m; ++i) {
    bool rated = false;
    for (std::int32_t u = 0; u < n; ++u) rated = rated || cells[u][i];
    while (!rated) {
      const auto u = static_cast<std::int32_t>(UniformBelow(rng, n));
      if (count[u] < m - 1) {
        cells[u][i] = 1;
        ++count[u];
        rated = true;
      }
    }
  }
  return FromCells(cells, m);
}

InteractionMatrix LongTailMatrix(Rng& rng, std::int32_t n, std::int32_t m,
                                 double ratings_per_user, double skew) {
  std::vector<double> weights(m);
  for (ItemId i = 0; i < m; ++i) weights[i] = std::pow(i + 1.0, -skew);
  std::discrete_distribution<ItemId> pick(weights.begin(), weights.end());
  std::poisson_distribution<int> size(ratings_per_user);
  std::vector<std::vector<char>> cells(n, std::vector<char>(m, 0));
  for (auto& row : cells) {
    const int target = std::clamp(size(rng), 1, m - 1);
    int have = 0;
    while (have < target) {
      const ItemId i = pick(rng);
      if (!row[i]) {
        row[i] = 1;
        ++have;
      }
    }
  }
  return FromCells(cells, m);
}

Eigen::MatrixXd DenseRatings(const InteractionMatrix& mtx) {
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(mtx.num_users(), mtx.num_items());
  for (UserId u = 0; u < mtx.num_users(); ++u) {
    for (ItemId i : mtx.ItemsOf(u)) r(u, i) = 1.0;
  }
  return r;
}

Eigen::MatrixXd NormalizedColumns(const InteractionMatrix& mtx) {
  Eigen::MatrixXd x = DenseRatings(mtx);
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    const double norm = x.col(i).norm();
    if (norm > 0.0) x.col(i) /= norm;
  }
  return x;
}

Eigen::MatrixXd DenseGram(const InteractionMatrix& mtx,
                          const KernelSpec& spec) {
  const Eigen::MatrixXd x = NormalizedColumns(mtx);
  const std::int32_t m = mtx.num_items();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(m, m);
  for (ItemId i = 0; i < m; ++i) {
    if (mtx.Popularity(i) == 0) continue;
    for (ItemId j = 0; j < m; ++j) {
      if (mtx.Popularity(j) == 0) continue;
      double dot = 0.0;
      for (Eigen::Index v = 0; v < x.rows(); ++v) dot += x(v, i) * x(v, j);
      k(i, j) = KernelEval(spec, dot);
    }
  }
  return k;
}

Eigen::VectorXd DirectNegativeCentroid(const InteractionMatrix& mtx,
                                       UserId u) {
  const Eigen::MatrixXd x = NormalizedColumns(mtx);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(mtx.num_users());
  int count = 0;
  for (ItemId i = 0; i < mtx.num_items(); ++i) {
    if (mtx.Contains(u, i)) continue;
    sum += x.col(i);
    ++count;
  }
  return sum / count;
}

Eigen::VectorXd DirectQExact(const InteractionMatrix& mtx,
                             const Eigen::MatrixXd& gram, UserId u) {
  Eigen::VectorXd q = Eigen::VectorXd::Zero(mtx.num_items());
  int count = 0;
  for (ItemId j = 0; j < mtx.num_items(); ++j) {
    if (mtx.Contains(u, j)) continue;
    q += gram.col(j);
    ++count;
  }
  return q / count;
}

Eigen::MatrixXd RandomPsd(Rng& rng, int n) {
  const Eigen::MatrixXd b =
      Eigen::MatrixXd::NullaryExpr(n, n, [&rng]() {
        return std::normal_distribution<double>()(rng);
      });
  return b * b.transpose() / n;
}

Eigen::VectorXd RandomGaussian(Rng& rng, int n) {
  Eigen::VectorXd v(n);
  std::normal_distribution<double> normal;
  for (int k = 0; k < n; ++k) v[k] = normal(rng);
  return v;
}

Eigen::VectorXd RandomSimplexPoint(Rng& rng, int n) {
  std::exponential_distribution<double> exponential(1.0);
  Eigen::VectorXd v(n);
  for (int k = 0; k < n; ++k) v[k] = exponential(rng);
  return v / v.sum();
}

double QpObjective(const Eigen::MatrixXd& k, const Eigen::VectorXd& q,
                   double lambda, const Eigen::VectorXd& alpha) {
  return alpha.dot(k * alpha) + lambda * alpha.squaredNorm() -
         2.0 * alpha.dot(q);
}

namespace {

constexpr int kGridUnits = 1000;

double LatticeObjective(const Eigen::MatrixXd& k, const Eigen::VectorXd& q,
                        double lambda, const std::vector<int>& units) {
  Eigen::VectorXd alpha(static_cast<Eigen::Index>(units.size()));
  for (std::size_t i = 0; i < units.size(); ++i) {
    alpha[static_cast<Eigen::Index>(i)] =
        static_cast<double>(units[i]) / kGridUnits;
  }
  return QpObjective(k, q, lambda, alpha);
}

void Compositions(int remaining, int parts, int step, std::vector<int>& cur,
                  const std::function<void(const std::vector<int>&)>& visit) {
  if (parts == 1) {
    cur.push_back(remaining * step);
    visit(cur);
    cur.pop_back();
    return;
  }
  for (int take = 0; take <= remaining; ++take) {
    cur.push_back(take * step);
    Compositions(remaining - take, parts - 1, step, cur, visit);
    cur.pop_back();
  }
}

}  // namespace

double GridSearchMinimum(const Eigen::MatrixXd& k, const Eigen::VectorXd& q,
                         double lambda) {
  const int n = static_cast<int>(q.size());
  std::vector<int> best;
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<int> cur;
  Compositions(40, n, kGridUnits / 40, cur, [&](const std::vector<int>& p) {
    const double value = LatticeObjective(k, q, lambda, p);
    if (value < best_value) {
      best_value = value;
      best = p;
    }
  });

  constexpr int kRadius = 5;
  for (int step : {kGridUnits / 200, 1}) {
    bool moved = true;
    while (moved) {
      moved = false;
      const std::vector<int> center = best;
      std::vector<int> offset(n - 1, -kRadius);
      while (true) {
        std::vector<int> p = center;
        int shift = 0;
        bool feasible = true;
        for (int i = 0; i < n - 1; ++i) {
          p[i] += offset[i] * step;
          shift += offset[i] * step;
          feasible = feasible && p[i] >= 0;
        }
        p[n - 1] -= shift;
        feasible = feasible && p[n - 1] >= 0;
        if (feasible) {
          const double value = LatticeObjective(k, q, lambda, p);
          if (value < best_value - 1e-15) {
            best_value = value;
            best = p;
            moved = true;
          }
        }
        int d = 0;
        while (d < n - 1 && ++offset[d] > kRadius) offset[d++] = -kRadius;
        if (d == n - 1) break;
      }
    }
  }
  return best_value;
}

Eigen::VectorXd CentralDifferences(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd plus = x;
    Eigen::VectorXd minus = x;
    plus[i] += h;
    minus[i] -= h;
    g[i] = (f(plus) - f(minus)) / (2.0 * h);
  }
  return g;
}

double BruteForceAuc(const std::vector<double>& positive_scores,
                     const std::vector<double>& negative_scores) {
  double correct = 0.0;
  for (double p : positive_scores) {
    for (double n : negative_scores) {
      if (p > n) correct += 1.0;
    }
  }
  return correct / (static_cast<double>(positive_scores.size()) *
                    static_cast<double>(negative_scores.size()));
}

double BruteForceAp(const std::vector<ItemId>& ranked,
                    const std::vector<ItemId>& positives, int n) {
  auto relevant = [&positives](ItemId i) {
    return std::find(positives.begin(), positives.end(), i) != positives.end();
  };
  double sum = 0.0;
  for (int k = 1; k <= n && k <= static_cast<int>(ranked.size()); ++k) {
    if (!relevant(ranked[k - 1])) continue;
    int hits = 0;
    for (int r = 0; r < k; ++r) hits += relevant(ranked[r]);
    sum += static_cast<double>(hits) / k;
  }
  return sum / std::min<double>(static_cast<double>(positives.size()), n);
}

double PairwiseAgreement(const std::vector<double>& a,
                         const std::vector<double>& b) {
  std::int64_t agree = 0;
  std::int64_t total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const int sa = (a[i] > a[j]) - (a[i] < a[j]);
      const int sb = (b[i] > b[j]) - (b[i] < b[j]);
      agree += sa == sb;
      ++total;
    }
  }
  return total == 0 ? 1.0 : static_cast<double>(agree) / total;
}

}  // namespace kcf::testing
