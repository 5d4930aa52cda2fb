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

#include "kcf/folds.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "kcf/hash.h"
#include "kcf/random.h"

namespace kcf {

using nlohmann::json;

std::int32_t FoldPlan::FoldSize(int fold) const {
  return static_cast<std::int32_t>(
      std::count(user_fold.begin(), user_fold.end(), fold));
}

std::uint64_t FoldPlan::Fingerprint() const {
  Fnv1a hash;
  hash.Value(k);
  hash.Value(seed);
  hash.Value(min_ratings);
  hash.Value(dataset_fingerprint);
  hash.Value(num_users);
  hash.Value(num_items);
  hash.Values(std::span<const int>(user_fold));
  for (const auto& items : heldout) {
    hash.Value(static_cast<std::int64_t>(items.size()));
    hash.Values(std::span<const ItemId>(items));
  }
  return hash.digest();
}

FoldPlan MakeFoldPlan(const InteractionMatrix& mtx, int k, std::uint64_t seed,
                      int min_ratings) {
  if (k < 2) throw ConfigError("fold count must be at least 2");
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.min_ratings = min_ratings;
  plan.dataset_fingerprint = mtx.Fingerprint();
  plan.num_users = mtx.num_users();
  plan.num_items = mtx.num_items();
  plan.user_fold.assign(mtx.num_users(), FoldPlan::kAlwaysTrain);
  plan.heldout.assign(mtx.num_users(), {});

  std::vector<UserId> eligible;
  for (UserId u = 0; u < mtx.num_users(); ++u) {
    if (mtx.PositiveCount(u) >= min_ratings) eligible.push_back(u);
  }
  if (static_cast<std::size_t>(k) > eligible.size()) {
    throw ConfigError("fold count " + std::to_string(k) + " exceeds the " +
                      std::to_string(eligible.size()) +
                      " users with at least " + std::to_string(min_ratings) +
                      " ratings");
  }

  Rng rng(seed);
  Shuffle(rng, std::span<UserId>(eligible));
  for (std::size_t pos = 0; pos < eligible.size(); ++pos) {
    plan.user_fold[eligible[pos]] = static_cast<int>(pos % k);
  }

  std::vector<ItemId> scratch;
  for (UserId u = 0; u < mtx.num_users(); ++u) {
    if (plan.user_fold[u] == FoldPlan::kAlwaysTrain) continue;
    const auto items = mtx.ItemsOf(u);
    scratch.assign(items.begin(), items.end());
    const std::size_t take = scratch.size() / 2;
    // Partial Fisher-Yates: the first `take` slots become a uniform subset.
    for (std::size_t pos = 0; pos < take; ++pos) {
      const std::size_t j = pos + UniformBelow(rng, scratch.size() - pos);
      std::swap(scratch[pos], scratch[j]);
    }
    auto& held = plan.heldout[u];
    held.assign(scratch.begin(), scratch.begin() + take);
    std::sort(held.begin(), held.end());
  }
  return plan;
}

FoldSplit ApplyFold(const InteractionMatrix& mtx, const FoldPlan& plan,
                    int fold) {
  if (fold < 0 || fold >= plan.k) {
    throw ContractError("fold " + std::to_string(fold) + " outside [0, " +
                        std::to_string(plan.k) + ")");
  }
  if (plan.dataset_fingerprint != mtx.Fingerprint() ||
      plan.num_users != mtx.num_users() || plan.num_items != mtx.num_items()) {
    throw ContractError("fold plan was built for a different dataset");
  }
  FoldSplit split;
  std::vector<std::pair<UserId, ItemId>> train_pairs;
  train_pairs.reserve(mtx.nnz());
  for (UserId u = 0; u < mtx.num_users(); ++u) {
    const auto items = mtx.ItemsOf(u);
    if (plan.user_fold[u] != fold) {
      for (ItemId i : items) train_pairs.emplace_back(u, i);
      continue;
    }
    const auto& held = plan.heldout[u];
    for (ItemId i : items) {
      if (!std::binary_search(held.begin(), held.end(), i)) {
        train_pairs.emplace_back(u, i);
      }
    }
    split.test.emplace(u, held);
  }
  split.train = InteractionMatrix::FromPairs(mtx.num_users(), mtx.num_items(),
                                             train_pairs);
  return split;
}

std::string FoldPlanToJson(const FoldPlan& plan) {
  json heldout = json::array();
  for (UserId u = 0; u < plan.num_users; ++u) {
    if (plan.user_fold[u] == FoldPlan::kAlwaysTrain) continue;
    heldout.push_back(json::array({u, plan.heldout[u]}));
  }
  json doc = {
      {"format", "kcf-fold-plan"},
      {"version", FoldPlan::kFormatVersion},
      {"k", plan.k},
      {"seed", plan.seed},
      {"min_ratings", plan.min_ratings},
      {"dataset_fingerprint", HexDigest(plan.dataset_fingerprint)},
      {"plan_fingerprint", HexDigest(plan.Fingerprint())},
      {"num_users", plan.num_users},
      {"num_items", plan.num_items},
      {"user_fold", plan.user_fold},
      {"heldout", std::move(heldout)},
  };
  return doc.dump() + "\n";
}

FoldPlan FoldPlanFromJson(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ContractError(std::string("fold plan is not valid JSON: ") +
                        e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "kcf-fold-plan") {
      throw ContractError("not a fold plan file");
    }
    if (doc.at("version").get<int>() != FoldPlan::kFormatVersion) {
      throw ContractError("unsupported fold plan version " +
                          doc.at("version").dump());
    }
    FoldPlan plan;
    plan.k = doc.at("k").get<int>();
    plan.seed = doc.at("seed").get<std::uint64_t>();
    plan.min_ratings = doc.at("min_ratings").get<int>();
    plan.dataset_fingerprint = std::stoull(
        doc.at("dataset_fingerprint").get<std::string>(), nullptr, 16);
    plan.num_users = doc.at("num_users").get<std::int32_t>();
    plan.num_items = doc.at("num_items").get<std::int32_t>();
    plan.user_fold = doc.at("user_fold").get<std::vector<int>>();
    if (static_cast<std::int32_t>(plan.user_fold.size()) != plan.num_users) {
      throw ContractError("user_fold length does not match num_users");
    }
    plan.heldout.assign(plan.num_users, {});
    for (const auto& entry : doc.at("heldout")) {
      const auto u = entry.at(0).get<UserId>();
      if (u < 0 || u >= plan.num_users) {
        throw ContractError("held-out user id out of range");
      }
      plan.heldout[u] = entry.at(1).get<std::vector<ItemId>>();
    }
    const auto stored =
        std::stoull(doc.at("plan_fingerprint").get<std::string>(), nullptr, 16);
    if (stored != plan.Fingerprint()) {
      throw ContractError("fold plan fingerprint mismatch (file corrupted?)");
    }
    return plan;
  } catch (const json::exception& e) {
    throw ContractError(std::string("malformed fold plan: ") + e.what());
  }
}

void SaveFoldPlan(const FoldPlan& plan, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write fold plan: " + path);
  out << FoldPlanToJson(plan);
  if (!out) throw IoError("failed writing fold plan: " + path);
}

FoldPlan LoadFoldPlan(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open fold plan: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FoldPlanFromJson(buffer.str());
}

}  // namespace kcf
