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

#include "kcf/interaction_matrix.h"

#include <algorithm>

#include "kcf/hash.h"

namespace kcf {

InteractionMatrix InteractionMatrix::FromPairs(
    std::int32_t num_users, std::int32_t num_items,
    std::span<const std::pair<UserId, ItemId>> pairs) {
  if (num_users < 0 || num_items < 0) {
    throw ContractError("negative matrix dimensions");
  }
  InteractionMatrix mtx;
  mtx.num_users_ = num_users;
  mtx.num_items_ = num_items;
  mtx.user_ptr_.assign(num_users + 1, 0);
  mtx.item_ptr_.assign(num_items + 1, 0);
  for (const auto& [u, i] : pairs) {
    if (u < 0 || u >= num_users || i < 0 || i >= num_items) {
      throw ContractError("interaction (" + std::to_string(u) + ", " +
                          std::to_string(i) + ") outside matrix bounds");
    }
    ++mtx.user_ptr_[u + 1];
    ++mtx.item_ptr_[i + 1];
  }
  for (std::int32_t u = 0; u < num_users; ++u) {
    mtx.user_ptr_[u + 1] += mtx.user_ptr_[u];
  }
  for (std::int32_t i = 0; i < num_items; ++i) {
    mtx.item_ptr_[i + 1] += mtx.item_ptr_[i];
  }

  mtx.items_.resize(pairs.size());
  mtx.users_.resize(pairs.size());
  std::vector<std::int64_t> user_fill(mtx.user_ptr_.begin(),
                                      mtx.user_ptr_.end() - 1);
  std::vector<std::int64_t> item_fill(mtx.item_ptr_.begin(),
                                      mtx.item_ptr_.end() - 1);
  for (const auto& [u, i] : pairs) {
    mtx.items_[user_fill[u]++] = i;
    mtx.users_[item_fill[i]++] = u;
  }
  for (std::int32_t u = 0; u < num_users; ++u) {
    auto begin = mtx.items_.begin() + mtx.user_ptr_[u];
    auto end = mtx.items_.begin() + mtx.user_ptr_[u + 1];
    std::sort(begin, end);
    if (std::adjacent_find(begin, end) != end) {
      throw ContractError("duplicate interaction for user " +
                          std::to_string(u));
    }
  }
  for (std::int32_t i = 0; i < num_items; ++i) {
    std::sort(mtx.users_.begin() + mtx.item_ptr_[i],
              mtx.users_.begin() + mtx.item_ptr_[i + 1]);
  }
  return mtx;
}

bool InteractionMatrix::Contains(UserId u, ItemId i) const {
  const auto items = ItemsOf(u);
  return std::binary_search(items.begin(), items.end(), i);
}

double InteractionMatrix::Density() const {
  if (num_users_ == 0 || num_items_ == 0) return 0.0;
  return static_cast<double>(nnz()) /
         (static_cast<double>(num_users_) * static_cast<double>(num_items_));
}

std::uint64_t InteractionMatrix::Fingerprint() const {
  Fnv1a hash;
  hash.Value(num_users_);
  hash.Value(num_items_);
  hash.Values(std::span<const std::int64_t>(user_ptr_));
  hash.Values(std::span<const ItemId>(items_));
  return hash.digest();
}

InteractionMatrix BuildMatrix(const InteractionSet& set) {
  if (set.records.empty()) throw EmptyDatasetError("interaction set is empty");
  return InteractionMatrix::FromPairs(set.num_users(), set.num_items(),
                                      set.records);
}

}  // namespace kcf
