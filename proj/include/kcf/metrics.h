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

#ifndef KCF_METRICS_H_
#define KCF_METRICS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "kcf/recommend.h"

namespace kcf {

// Items a user can be evaluated on: the catalog minus `excluded`.
std::vector<ItemId> CandidateItems(std::int32_t num_items,
                                   std::span<const ItemId> excluded);

struct UserAuc {
  double value = 0.0;
  // No positives or no negatives among the candidates.
  bool skipped = false;
};

// Fraction of (positive, negative) candidate pairs with a strictly higher
// positive score. Candidates missing from the ranking score -inf. Throws
// ContractError if a positive is not a candidate.
UserAuc AucUser(std::span<const ItemId> positives, const Recommendation& rec,
                std::span<const ItemId> candidates);

struct RankMetric {
  double value = 0.0;
  // The ranking was shorter than the requested cutoff.
  bool truncated = false;
};

// Share of held-out positives among the first min(k, |ranked|) items.
RankMetric PrecisionAtK(const Recommendation& rec,
                        std::span<const ItemId> positives, int k);

// sum_{k <= N, hit at k} P@k / min(|positives|, N).
RankMetric ApAtN(const Recommendation& rec, std::span<const ItemId> positives,
                 int n);

struct UserMetrics {
  UserId user = 0;
  std::int32_t num_positives = 0;
  double auc = 0.0;
  double ap = 0.0;
  bool skipped = false;
  bool truncated = false;

  friend bool operator==(const UserMetrics&, const UserMetrics&) = default;
};

// Candidates are every item outside rec.excluded.
UserMetrics EvaluateUser(const Recommendation& rec,
                         std::span<const ItemId> heldout,
                         std::int32_t num_items, int map_n);

struct MetricsReport {
  int map_n = 500;
  double auc = 0.0;
  // Sample stdev of per-user AUC; defined for two or more users.
  double auc_user_stdev = 0.0;
  bool stdev_defined = false;
  double map_at_n = 0.0;
  std::int64_t n_users = 0;
  std::int64_t n_skipped = 0;
  bool zero_users = true;
  // Set when folds were combined: per-fold mean AUC and their sample stdev.
  std::vector<double> fold_auc;
  std::optional<double> auc_fold_stdev;
  std::vector<UserMetrics> per_user;
  nlohmann::json config = nlohmann::json::object();
};

// Unweighted means over non-skipped users. Order of `users` is irrelevant
// to every statistic; per_user is kept sorted by user id.
MetricsReport Aggregate(std::span<const UserMetrics> users, int map_n);

// Pools the users of every fold and adds the across-fold AUC spread.
MetricsReport CombineFolds(std::span<const MetricsReport> folds);

nlohmann::json MetricsReportToJson(const MetricsReport& report,
                                   bool include_per_user = false);

// user, positives, auc, ap, skipped. `labels` maps dense user ids to the
// original identifiers when given.
void WritePerUserTsv(const MetricsReport& report,
                     const std::vector<std::string>* labels,
                     std::ostream& out);

}  // namespace kcf

#endif  // KCF_METRICS_H_
