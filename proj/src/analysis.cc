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

#include "kcf/analysis.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "kcf/errors.h"

namespace kcf {

DensityReport EstimateKernelDensity(double p, std::int64_t n, std::int64_t m) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ContractError("rating probability must lie in [0, 1]");
  }
  if (n < 1 || m < 1) throw ContractError("n and m must be positive");
  DensityReport report;
  report.p = p;
  report.n = n;
  report.m = m;
  // 1 - (1 - p^2)^n without cancellation for small p.
  report.p_offdiag =
      p == 1.0 ? 1.0 : -std::expm1(static_cast<double>(n) * std::log1p(-p * p));
  const double md = static_cast<double>(m);
  report.d_k = 1.0 / md + (1.0 - 1.0 / md) * report.p_offdiag;
  return report;
}

double EmpiricalDensity(const GramMatrix& gram) {
  const double m = gram.num_items();
  if (m == 0) return 0.0;
  return static_cast<double>(gram.CountNonZero(1e-12)) / (m * m);
}

std::string_view AxisName(TailAxis axis) {
  return axis == TailAxis::kItemPopularity ? "item_popularity"
                                           : "user_activity";
}

TailFit FitTail(std::span<const std::int64_t> counts, TailAxis axis) {
  std::vector<std::int64_t> ranked;
  for (std::int64_t c : counts) {
    if (c > 0) ranked.push_back(c);
  }
  if (ranked.size() < 3) {
    throw InsufficientDataError(std::string(AxisName(axis)) + ": need at "
                                "least 3 positive counts, got " +
                                std::to_string(ranked.size()));
  }
  std::sort(ranked.begin(), ranked.end(), std::greater<>());
  const double k = static_cast<double>(ranked.size());
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    sx += std::log(static_cast<double>(r + 1));
    sy += std::log(static_cast<double>(ranked[r]));
  }
  const double mx = sx / k;
  const double my = sy / k;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    const double dx = std::log(static_cast<double>(r + 1)) - mx;
    const double dy = std::log(static_cast<double>(ranked[r])) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  TailFit fit;
  fit.axis = axis;
  fit.points = static_cast<std::int64_t>(ranked.size());
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  const double residual = std::max(0.0, syy - fit.exponent * sxy);
  fit.r2 = syy == 0.0 ? 1.0 : 1.0 - residual / syy;
  return fit;
}

namespace {

TailSide FitSide(std::vector<std::int64_t> counts, TailAxis axis) {
  TailSide side;
  for (std::int64_t c : counts) {
    if (c > 0) side.ranked_counts.push_back(c);
  }
  std::sort(side.ranked_counts.begin(), side.ranked_counts.end(),
            std::greater<>());
  try {
    side.fit = FitTail(side.ranked_counts, axis);
  } catch (const InsufficientDataError& e) {
    side.error = e.what();
  }
  return side;
}

}  // namespace

TailReport TailReportFor(const InteractionMatrix& mtx) {
  if (mtx.nnz() == 0) throw EmptyDatasetError("tail report of an empty matrix");
  std::vector<std::int64_t> items(mtx.num_items());
  for (ItemId i = 0; i < mtx.num_items(); ++i) items[i] = mtx.Popularity(i);
  std::vector<std::int64_t> users(mtx.num_users());
  for (UserId u = 0; u < mtx.num_users(); ++u) users[u] = mtx.PositiveCount(u);
  return {FitSide(std::move(items), TailAxis::kItemPopularity),
          FitSide(std::move(users), TailAxis::kUserActivity)};
}

void WriteRankCountTsv(std::span<const std::int64_t> ranked_counts,
                       std::ostream& out) {
  out << "rank\tcount\n";
  for (std::size_t r = 0; r < ranked_counts.size(); ++r) {
    out << r + 1 << '\t' << ranked_counts[r] << '\n';
  }
}

}  // namespace kcf
