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

#ifndef KCF_INTERACTION_MATRIX_H_
#define KCF_INTERACTION_MATRIX_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "kcf/errors.h"
#include "kcf/interactions.h"

namespace kcf {

// Binary n x m rating matrix stored twice: compressed rows (items of each
// user, I_u) and compressed columns (users of each item, U_i). Both indices
// are sorted ascending and describe the same set of nonzeros. Immutable once
// built.
class InteractionMatrix {
 public:
  InteractionMatrix() = default;

  // Builds from (user, item) pairs. Pairs must be unique and inside
  // [0, num_users) x [0, num_items); throws ContractError otherwise.
  static InteractionMatrix FromPairs(
      std::int32_t num_users, std::int32_t num_items,
      std::span<const std::pair<UserId, ItemId>> pairs);

  std::int32_t num_users() const { return num_users_; }
  std::int32_t num_items() const { return num_items_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(items_.size()); }

  // I_u, sorted.
  std::span<const ItemId> ItemsOf(UserId u) const {
    return {items_.data() + user_ptr_[u],
            static_cast<std::size_t>(user_ptr_[u + 1] - user_ptr_[u])};
  }
  // U_i, sorted.
  std::span<const UserId> UsersOf(ItemId i) const {
    return {users_.data() + item_ptr_[i],
            static_cast<std::size_t>(item_ptr_[i + 1] - item_ptr_[i])};
  }

  // m_u^+.
  std::int32_t PositiveCount(UserId u) const {
    return static_cast<std::int32_t>(user_ptr_[u + 1] - user_ptr_[u]);
  }
  // m_u^- = m - m_u^+.
  std::int32_t NegativeCount(UserId u) const {
    return num_items_ - PositiveCount(u);
  }
  std::int32_t Popularity(ItemId i) const {
    return static_cast<std::int32_t>(item_ptr_[i + 1] - item_ptr_[i]);
  }
  bool Contains(UserId u, ItemId i) const;

  // nnz / (n * m).
  double Density() const;

  // 64-bit content fingerprint over dimensions and the nonzero pattern.
  std::uint64_t Fingerprint() const;

  friend bool operator==(const InteractionMatrix&,
                         const InteractionMatrix&) = default;

 private:
  std::int32_t num_users_ = 0;
  std::int32_t num_items_ = 0;
  std::vector<std::int64_t> user_ptr_{0};
  std::vector<ItemId> items_;
  std::vector<std::int64_t> item_ptr_{0};
  std::vector<UserId> users_;
};

// Throws EmptyDatasetError if `set` has no records.
InteractionMatrix BuildMatrix(const InteractionSet& set);

}  // namespace kcf

#endif  // KCF_INTERACTION_MATRIX_H_
