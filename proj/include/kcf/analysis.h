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

#ifndef KCF_ANALYSIS_H_
#define KCF_ANALYSIS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kcf/gram.h"
#include "kcf/interaction_matrix.h"

namespace kcf {

struct DensityReport {
  double p = 0.0;
  std::int64_t n = 0;
  std::int64_t m = 0;
  // P(K_ij != 0) for i != j when ratings are independent with probability p.
  double p_offdiag = 0.0;
  // (m + (m^2 - m) p_offdiag) / m^2.
  double d_k = 0.0;
  std::optional<double> empirical;
};

// Throws ContractError unless p in [0, 1], n >= 1 and m >= 1.
DensityReport EstimateKernelDensity(double p, std::int64_t n, std::int64_t m);

// Fraction of the m x m entries with |value| > 1e-12.
double EmpiricalDensity(const GramMatrix& gram);

enum class TailAxis { kItemPopularity, kUserActivity };

std::string_view AxisName(TailAxis axis);

// log(count) = intercept + exponent * log(rank), least squares over the
// positive counts sorted in decreasing order.
struct TailFit {
  TailAxis axis = TailAxis::kItemPopularity;
  double exponent = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::int64_t points = 0;
};

// Throws InsufficientDataError with fewer than three positive counts.
TailFit FitTail(std::span<const std::int64_t> counts,
                TailAxis axis = TailAxis::kItemPopularity);

struct TailSide {
  // Positive counts, decreasing; rank r is position r - 1.
  std::vector<std::int64_t> ranked_counts;
  std::optional<TailFit> fit;
  // Why the fit is missing.
  std::string error;
};

struct TailReport {
  TailSide items;
  TailSide users;
};

// Fits both axes independently; a degenerate axis records its error and
// leaves the other untouched.
TailReport TailReportFor(const InteractionMatrix& mtx);

// "rank\tcount" rows, ranks starting at 1.
void WriteRankCountTsv(std::span<const std::int64_t> ranked_counts,
                       std::ostream& out);

}  // namespace kcf

#endif  // KCF_ANALYSIS_H_
