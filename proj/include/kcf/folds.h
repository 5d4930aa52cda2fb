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

#ifndef KCF_FOLDS_H_
#define KCF_FOLDS_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kcf/interaction_matrix.h"

namespace kcf {

// User-split cross validation: eligible users are dealt into k folds; a fold
// user keeps ceil(|I_u|/2) ratings for training and the other floor(|I_u|/2)
// are held out. Users with fewer than `min_ratings` ratings never leave the
// training set.
struct FoldPlan {
  static constexpr int kAlwaysTrain = -1;
  static constexpr int kFormatVersion = 1;

  int k = 0;
  std::uint64_t seed = 0;
  int min_ratings = 5;
  std::uint64_t dataset_fingerprint = 0;
  std::int32_t num_users = 0;
  std::int32_t num_items = 0;
  // Fold id per user, or kAlwaysTrain.
  std::vector<int> user_fold;
  // Held-out items per user, sorted; empty for kAlwaysTrain users.
  std::vector<std::vector<ItemId>> heldout;

  std::int32_t FoldSize(int fold) const;
  // Digest over the whole plan; embedded in downstream artifacts.
  std::uint64_t Fingerprint() const;

  friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

// Deterministic for a fixed (mtx, k, seed). Throws ConfigError when k < 2 or
// k exceeds the number of eligible users.
FoldPlan MakeFoldPlan(const InteractionMatrix& mtx, int k, std::uint64_t seed,
                      int min_ratings = 5);

struct FoldSplit {
  InteractionMatrix train;
  // Held-out items of every user in the fold.
  std::map<UserId, std::vector<ItemId>> test;
};

// Throws ContractError if `fold` is out of range or the plan was made for a
// different matrix.
FoldSplit ApplyFold(const InteractionMatrix& mtx, const FoldPlan& plan,
                    int fold);

// Versioned JSON. Serialization is byte-stable for equal plans.
std::string FoldPlanToJson(const FoldPlan& plan);
FoldPlan FoldPlanFromJson(const std::string& text);
void SaveFoldPlan(const FoldPlan& plan, const std::string& path);
FoldPlan LoadFoldPlan(const std::string& path);

}  // namespace kcf

#endif  // KCF_FOLDS_H_
