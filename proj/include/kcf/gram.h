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

#ifndef KCF_GRAM_H_
#define KCF_GRAM_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kcf/interaction_matrix.h"
#include "kcf/kernel.h"

namespace kcf {

// Normalized item representation x_i = r_i / |r_i| over the by-item view of
// a rating matrix. Items without ratings have no representation and are
// flagged unreachable. Keeps a reference to `matrix`, which must outlive it.
class ItemVectors {
 public:
  explicit ItemVectors(const InteractionMatrix& matrix);

  const InteractionMatrix& matrix() const { return *matrix_; }
  std::int32_t num_items() const { return matrix_->num_items(); }
  // |r_i| = sqrt(|U_i|).
  double Norm(ItemId i) const { return norms_[i]; }
  bool Reachable(ItemId i) const { return matrix_->Popularity(i) > 0; }
  // x_i . x_j = |U_i n U_j| / sqrt(|U_i| |U_j|). One rounding from the
  // integer counts, so x_i . x_i is exactly 1.
  double Cosine(std::int64_t shared, ItemId i, ItemId j) const;
  // Dot product by merging the two user lists.
  double Dot(ItemId i, ItemId j) const;

 private:
  const InteractionMatrix* matrix_;
  std::vector<double> norms_;
};

// Sparse symmetric item x item kernel matrix in compressed rows, indexed by
// the same item ids as the source matrix. Rows of items left out of the
// computation are empty.
class GramMatrix {
 public:
  GramMatrix() = default;
  GramMatrix(KernelSpec spec, std::int32_t num_items,
             std::vector<std::int64_t> row_ptr, std::vector<ItemId> cols,
             std::vector<double> values);

  const KernelSpec& spec() const { return spec_; }
  std::int32_t num_items() const { return num_items_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(cols_.size()); }

  std::span<const ItemId> RowCols(ItemId i) const {
    return {cols_.data() + row_ptr_[i],
            static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
  }
  std::span<const double> RowValues(ItemId i) const {
    return {values_.data() + row_ptr_[i],
            static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
  }
  // Stored value, or 0 for an absent entry.
  double At(ItemId i, ItemId j) const;
  bool HasRow(ItemId i) const { return row_ptr_[i + 1] > row_ptr_[i]; }

  // Principal submatrix over `items` (sorted ascending, unique).
  Eigen::MatrixXd Submatrix(std::span<const ItemId> items) const;

  // Number of stored entries with |value| > tolerance.
  std::int64_t CountNonZero(double tolerance = 1e-12) const;

  // Content digest over dimensions and entries.
  std::uint64_t Fingerprint() const;

  friend bool operator==(const GramMatrix&, const GramMatrix&) = default;

 private:
  KernelSpec spec_;
  std::int32_t num_items_ = 0;
  std::vector<std::int64_t> row_ptr_{0};
  std::vector<ItemId> cols_;
  std::vector<double> values_;
};

// Largest catalog for which a kernel with a non-zero a_0 is materialized
// densely. Above it compute_gram refuses anything that is not reduced.
inline constexpr std::int32_t kDenseGramCap = 2000;

struct GramOptions {
  // Restrict rows and columns to these items (any order). Unset means every
  // reachable item.
  std::optional<std::vector<ItemId>> items;
  int threads = 1;
};

// Sparse gram of the kernel over normalized item vectors. For reduced specs
// (or specs with a_0 = 0) only co-rated pairs are stored: entry (i, j)
// exists iff U_i and U_j intersect, and the diagonal is always present. The
// pairs are found through the by-user index, so no dense m x m buffer is
// touched. Specs with a_0 > 0 that are not reduced store every pair and are
// only accepted up to kDenseGramCap items (ConfigError otherwise).
// Throws UnreachableItemError when an explicit subset names an item without
// ratings.
GramMatrix ComputeGram(const ItemVectors& vectors, const KernelSpec& spec,
                       const GramOptions& options = {});

// Global estimate of the per-user negative kernel mean:
// q~_i = (1/m) sum_j K(x_i, x_j), absent entries counting as zero.
struct QTilde {
  KernelSpec spec;
  std::vector<double> values;
};

// `gram` must have been computed over all items.
QTilde ComputeQTilde(const ItemVectors& vectors, const GramMatrix& gram);

// Exact q_ui = (1/m_u^-) sum_{j not in I_u} K(x_i, x_j) for every item i.
// Throws DegenerateUserError when m_u^- = 0.
std::vector<double> ComputeQExact(const ItemVectors& vectors,
                                  const GramMatrix& gram, UserId u);
// Same, reusing precomputed row means.
std::vector<double> ComputeQExact(const ItemVectors& vectors,
                                  const GramMatrix& gram, const QTilde& qt,
                                  UserId u);

// Binary cache: header, spec string, then (row, col, value) triplets in row
// order. `key` is stored and must match on load.
std::uint64_t GramCacheKey(const InteractionMatrix& matrix,
                           const KernelSpec& spec);
void SaveGram(const GramMatrix& gram, std::uint64_t key,
              const std::string& path);
// Returns nullopt if the file is missing or was written for another key.
std::optional<GramMatrix> LoadGram(const std::string& path,
                                   std::uint64_t expected_key);

}  // namespace kcf

#endif  // KCF_GRAM_H_
