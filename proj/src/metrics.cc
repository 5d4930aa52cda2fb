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

#include "kcf/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "kcf/errors.h"

namespace kcf {

std::vector<ItemId> CandidateItems(std::int32_t num_items,
                                   std::span<const ItemId> excluded) {
  std::vector<char> skip(num_items, 0);
  for (ItemId i : excluded) {
    if (i >= 0 && i < num_items) skip[i] = 1;
  }
  std::vector<ItemId> out;
  out.reserve(num_items);
  for (ItemId i = 0; i < num_items; ++i) {
    if (!skip[i]) out.push_back(i);
  }
  return out;
}

namespace {

std::vector<ItemId> SortedUnique(std::span<const ItemId> items) {
  std::vector<ItemId> out(items.begin(), items.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Contains(const std::vector<ItemId>& sorted, ItemId i) {
  return std::binary_search(sorted.begin(), sorted.end(), i);
}

}  // namespace

UserAuc AucUser(std::span<const ItemId> positives, const Recommendation& rec,
                std::span<const ItemId> candidates) {
  const std::vector<ItemId> pos = SortedUnique(positives);
  const std::vector<ItemId> cand = SortedUnique(candidates);
  for (ItemId i : pos) {
    if (!Contains(cand, i)) {
      throw ContractError("positive item " + std::to_string(i) +
                          " is not a candidate");
    }
  }
  if (pos.empty() || pos.size() == cand.size()) return {0.0, true};

  ItemId max_id = cand.back();
  for (const ScoredItem& s : rec.ranked) max_id = std::max(max_id, s.item);
  std::vector<double> score(static_cast<std::size_t>(max_id) + 1,
                            -std::numeric_limits<double>::infinity());
  for (const ScoredItem& s : rec.ranked) {
    if (s.item >= 0) score[s.item] = s.score;
  }

  std::vector<double> negatives;
  negatives.reserve(cand.size() - pos.size());
  for (ItemId i : cand) {
    if (!Contains(pos, i)) negatives.push_back(score[i]);
  }
  std::sort(negatives.begin(), negatives.end());
  std::int64_t correct = 0;
  for (ItemId i : pos) {
    correct += std::lower_bound(negatives.begin(), negatives.end(), score[i]) -
               negatives.begin();
  }
  const double pairs = static_cast<double>(pos.size()) *
                       static_cast<double>(negatives.size());
  return {static_cast<double>(correct) / pairs, false};
}

RankMetric PrecisionAtK(const Recommendation& rec,
                        std::span<const ItemId> positives, int k) {
  if (k < 1) throw ContractError("precision cutoff must be >= 1");
  const std::vector<ItemId> pos = SortedUnique(positives);
  const std::size_t length = std::min<std::size_t>(k, rec.ranked.size());
  RankMetric out;
  out.truncated = length < static_cast<std::size_t>(k);
  if (length == 0) return out;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < length; ++r) {
    hits += Contains(pos, rec.ranked[r].item);
  }
  out.value = static_cast<double>(hits) / static_cast<double>(length);
  return out;
}

RankMetric ApAtN(const Recommendation& rec, std::span<const ItemId> positives,
                 int n) {
  if (n < 1) throw ContractError("AP cutoff must be >= 1");
  const std::vector<ItemId> pos = SortedUnique(positives);
  RankMetric out;
  out.truncated = rec.ranked.size() < static_cast<std::size_t>(n);
  if (pos.empty()) return out;
  const std::size_t length = std::min<std::size_t>(n, rec.ranked.size());
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t r = 0; r < length; ++r) {
    if (!Contains(pos, rec.ranked[r].item)) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(r + 1);
  }
  out.value = sum / static_cast<double>(std::min<std::size_t>(pos.size(), n));
  return out;
}

UserMetrics EvaluateUser(const Recommendation& rec,
                         std::span<const ItemId> heldout,
                         std::int32_t num_items, int map_n) {
  UserMetrics metrics;
  metrics.user = rec.user;
  metrics.num_positives = static_cast<std::int32_t>(heldout.size());
  const UserAuc auc =
      AucUser(heldout, rec, CandidateItems(num_items, rec.excluded));
  metrics.skipped = auc.skipped;
  metrics.auc = auc.value;
  const RankMetric ap = ApAtN(rec, heldout, map_n);
  metrics.ap = ap.value;
  metrics.truncated = ap.truncated;
  return metrics;
}

namespace {

double SampleStdev(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace

MetricsReport Aggregate(std::span<const UserMetrics> users, int map_n) {
  MetricsReport report;
  report.map_n = map_n;
  report.per_user.assign(users.begin(), users.end());
  std::sort(report.per_user.begin(), report.per_user.end(),
            [](const UserMetrics& a, const UserMetrics& b) {
              return a.user < b.user;
            });
  std::vector<double> aucs;
  double ap_sum = 0.0;
  for (const UserMetrics& user : report.per_user) {
    if (user.skipped) {
      ++report.n_skipped;
      continue;
    }
    aucs.push_back(user.auc);
    ap_sum += user.ap;
  }
  report.n_users = static_cast<std::int64_t>(aucs.size());
  report.zero_users = aucs.empty();
  if (!aucs.empty()) {
    double sum = 0.0;
    for (double v : aucs) sum += v;
    report.auc = sum / static_cast<double>(aucs.size());
    report.map_at_n = ap_sum / static_cast<double>(aucs.size());
  }
  report.stdev_defined = aucs.size() >= 2;
  report.auc_user_stdev = SampleStdev(aucs);
  return report;
}

MetricsReport CombineFolds(std::span<const MetricsReport> folds) {
  std::vector<UserMetrics> pooled;
  int map_n = folds.empty() ? 500 : folds.front().map_n;
  std::vector<double> fold_auc;
  for (const MetricsReport& fold : folds) {
    if (fold.map_n != map_n) {
      throw ContractError("cannot combine reports with different N");
    }
    pooled.insert(pooled.end(), fold.per_user.begin(), fold.per_user.end());
    if (!fold.zero_users) fold_auc.push_back(fold.auc);
  }
  MetricsReport report = Aggregate(pooled, map_n);
  if (!folds.empty()) report.config = folds.front().config;
  report.fold_auc = fold_auc;
  if (fold_auc.size() >= 2) report.auc_fold_stdev = SampleStdev(fold_auc);
  return report;
}

nlohmann::json MetricsReportToJson(const MetricsReport& report,
                                   bool include_per_user) {
  nlohmann::json out;
  out["config"] = report.config;
  out["auc"] = report.auc;
  out["auc_user_stdev"] = report.auc_user_stdev;
  out["stdev_defined"] = report.stdev_defined;
  out["map_n"] = report.map_n;
  out["map_at_n"] = report.map_at_n;
  out["n_users"] = report.n_users;
  out["n_skipped"] = report.n_skipped;
  out["zero_users"] = report.zero_users;
  if (!report.fold_auc.empty()) out["fold_auc"] = report.fold_auc;
  if (report.auc_fold_stdev) out["auc_fold_stdev"] = *report.auc_fold_stdev;
  if (include_per_user) {
    nlohmann::json rows = nlohmann::json::array();
    for (const UserMetrics& user : report.per_user) {
      rows.push_back({{"user", user.user},
                      {"positives", user.num_positives},
                      {"auc", user.auc},
                      {"ap", user.ap},
                      {"skipped", user.skipped}});
    }
    out["per_user"] = std::move(rows);
  }
  return out;
}

void WritePerUserTsv(const MetricsReport& report,
                     const std::vector<std::string>* labels,
                     std::ostream& out) {
  out << "user\tpositives\tauc\tap\tskipped\n";
  char buffer[64];
  for (const UserMetrics& user : report.per_user) {
    if (labels != nullptr && user.user < static_cast<UserId>(labels->size())) {
      out << (*labels)[user.user];
    } else {
      out << user.user;
    }
    out << '\t' << user.num_positives;
    std::snprintf(buffer, sizeof(buffer), "\t%.12g\t%.12g\t", user.auc,
                  user.ap);
    out << buffer << (user.skipped ? 1 : 0) << '\n';
  }
}

}  // namespace kcf
