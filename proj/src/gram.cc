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

#include "kcf/gram.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "kcf/hash.h"
#include "kcf/parallel.h"

namespace kcf {

ItemVectors::ItemVectors(const InteractionMatrix& matrix) : matrix_(&matrix) {
  norms_.resize(matrix.num_items());
  for (ItemId i = 0; i < matrix.num_items(); ++i) {
    norms_[i] = std::sqrt(static_cast<double>(matrix.Popularity(i)));
  }
}

double ItemVectors::Cosine(std::int64_t shared, ItemId i, ItemId j) const {
  if (shared == 0) return 0.0;
  const double product = static_cast<double>(matrix_->Popularity(i)) *
                         static_cast<double>(matrix_->Popularity(j));
  return static_cast<double>(shared) / std::sqrt(product);
}

double ItemVectors::Dot(ItemId i, ItemId j) const {
  const auto a = matrix_->UsersOf(i);
  const auto b = matrix_->UsersOf(j);
  std::int64_t shared = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++shared;
      ++ia;
      ++ib;
    }
  }
  return Cosine(shared, i, j);
}

GramMatrix::GramMatrix(KernelSpec spec, std::int32_t num_items,
                       std::vector<std::int64_t> row_ptr,
                       std::vector<ItemId> cols, std::vector<double> values)
    : spec_(spec),
      num_items_(num_items),
      row_ptr_(std::move(row_ptr)),
      cols_(std::move(cols)),
      values_(std::move(values)) {
  if (static_cast<std::int64_t>(row_ptr_.size()) != num_items_ + 1 ||
      cols_.size() != values_.size() ||
      row_ptr_.back() != static_cast<std::int64_t>(cols_.size())) {
    throw ContractError("inconsistent compressed-row gram arrays");
  }
}

double GramMatrix::At(ItemId i, ItemId j) const {
  const auto cols = RowCols(i);
  auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return RowValues(i)[it - cols.begin()];
}

Eigen::MatrixXd GramMatrix::Submatrix(std::span<const ItemId> items) const {
  const auto size = static_cast<Eigen::Index>(items.size());
  Eigen::MatrixXd sub = Eigen::MatrixXd::Zero(size, size);
  for (Eigen::Index a = 0; a < size; ++a) {
    const auto cols = RowCols(items[a]);
    const auto values = RowValues(items[a]);
    // Merge the sorted row against the sorted item list.
    std::size_t pos = 0;
    Eigen::Index b = 0;
    while (pos < cols.size() && b < size) {
      if (cols[pos] < items[b]) {
        ++pos;
      } else if (items[b] < cols[pos]) {
        ++b;
      } else {
        sub(a, b) = values[pos];
        ++pos;
        ++b;
      }
    }
  }
  return sub;
}

std::int64_t GramMatrix::CountNonZero(double tolerance) const {
  return std::count_if(values_.begin(), values_.end(),
                       [tolerance](double v) { return std::abs(v) > tolerance; });
}

std::uint64_t GramMatrix::Fingerprint() const {
  Fnv1a hash;
  hash.Bytes(spec_.ToString());
  hash.Value(num_items_);
  hash.Values(std::span<const std::int64_t>(row_ptr_));
  hash.Values(std::span<const ItemId>(cols_));
  for (double v : values_) hash.Value(std::bit_cast<std::uint64_t>(v));
  return hash.digest();
}

namespace {

struct Row {
  std::vector<ItemId> cols;
  std::vector<double> values;
};

}  // namespace

GramMatrix ComputeGram(const ItemVectors& vectors, const KernelSpec& spec,
                       const GramOptions& options) {
  const DotKernel kernel(spec);
  const InteractionMatrix& mtx = vectors.matrix();
  const std::int32_t m = mtx.num_items();

  std::vector<char> included(m, 0);
  std::vector<ItemId> rows;
  if (options.items) {
    for (ItemId i : *options.items) {
      if (i < 0 || i >= m) throw ContractError("item id out of range");
      if (!vectors.Reachable(i)) {
        throw UnreachableItemError("item " + std::to_string(i) +
                                   " has no ratings");
      }
      included[i] = 1;
    }
  } else {
    for (ItemId i = 0; i < m; ++i) included[i] = vectors.Reachable(i);
  }
  for (ItemId i = 0; i < m; ++i) {
    if (included[i]) rows.push_back(i);
  }

  const bool dense = !spec.reduced && ZeroDegreeTerm(spec) != 0.0;
  if (dense && m > kDenseGramCap) {
    throw ConfigError("kernel " + spec.ToString() +
                      " has a non-zero constant term; reduce it or use at "
                      "most " +
                      std::to_string(kDenseGramCap) + " items");
  }
  const double off_pattern = dense ? kernel(0.0) : 0.0;

  const int threads = std::max(1, options.threads);
  std::vector<std::vector<std::int32_t>> counts(
      threads, std::vector<std::int32_t>(m, 0));
  std::vector<std::vector<ItemId>> touched(threads);
  std::vector<Row> out(rows.size());

  ParallelFor(static_cast<std::int32_t>(rows.size()), threads,
              [&](int worker, std::int32_t k) {
                const ItemId i = rows[k];
                auto& count = counts[worker];
                auto& seen = touched[worker];
                seen.clear();
                for (UserId v : mtx.UsersOf(i)) {
                  for (ItemId j : mtx.ItemsOf(v)) {
                    if (!included[j]) continue;
                    if (count[j]++ == 0) seen.push_back(j);
                  }
                }
                std::sort(seen.begin(), seen.end());
                Row& row = out[k];
                if (dense) {
                  row.cols = rows;
                  row.values.assign(rows.size(), off_pattern);
                  for (ItemId j : seen) {
                    const auto at =
                        std::lower_bound(rows.begin(), rows.end(), j) -
                        rows.begin();
                    row.values[at] = kernel(vectors.Cosine(count[j], i, j));
                  }
                } else {
                  row.cols = seen;
                  row.values.reserve(seen.size());
                  for (ItemId j : seen) {
                    row.values.push_back(
                        kernel(vectors.Cosine(count[j], i, j)));
                  }
                }
                for (ItemId j : seen) count[j] = 0;
              });

  std::vector<std::int64_t> row_ptr(m + 1, 0);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    row_ptr[rows[k] + 1] = static_cast<std::int64_t>(out[k].cols.size());
  }
  for (ItemId i = 0; i < m; ++i) row_ptr[i + 1] += row_ptr[i];
  std::vector<ItemId> cols;
  std::vector<double> values;
  cols.reserve(row_ptr.back());
  values.reserve(row_ptr.back());
  for (Row& row : out) {
    cols.insert(cols.end(), row.cols.begin(), row.cols.end());
    values.insert(values.end(), row.values.begin(), row.values.end());
    row = Row{};
  }
  return GramMatrix(spec, m, std::move(row_ptr), std::move(cols),
                    std::move(values));
}

QTilde ComputeQTilde(const ItemVectors& vectors, const GramMatrix& gram) {
  const std::int32_t m = vectors.num_items();
  if (gram.num_items() != m) {
    throw ContractError("gram and item vectors disagree on the item count");
  }
  QTilde qt{gram.spec(), std::vector<double>(m, 0.0)};
  for (ItemId i = 0; i < m; ++i) {
    if (vectors.Reachable(i) && !gram.HasRow(i)) {
      throw ContractError("q~ needs a gram over all items; row " +
                          std::to_string(i) + " is missing");
    }
    double sum = 0.0;
    for (double v : gram.RowValues(i)) sum += v;
    qt.values[i] = sum / m;
  }
  return qt;
}

namespace {

std::vector<double> PositiveRowSums(const ItemVectors& vectors,
                                    const GramMatrix& gram, UserId u) {
  std::vector<double> sums(vectors.num_items(), 0.0);
  for (ItemId j : vectors.matrix().ItemsOf(u)) {
    const auto cols = gram.RowCols(j);
    const auto values = gram.RowValues(j);
    for (std::size_t k = 0; k < cols.size(); ++k) sums[cols[k]] += values[k];
  }
  return sums;
}

}  // namespace

std::vector<double> ComputeQExact(const ItemVectors& vectors,
                                  const GramMatrix& gram, UserId u) {
  const std::int32_t negatives = vectors.matrix().NegativeCount(u);
  if (negatives == 0) {
    throw DegenerateUserError("user " + std::to_string(u) +
                              " has no negative items");
  }
  std::vector<double> q = PositiveRowSums(vectors, gram, u);
  for (ItemId i = 0; i < vectors.num_items(); ++i) {
    double total = 0.0;
    for (double v : gram.RowValues(i)) total += v;
    q[i] = (total - q[i]) / negatives;
  }
  return q;
}

std::vector<double> ComputeQExact(const ItemVectors& vectors,
                                  const GramMatrix& gram, const QTilde& qt,
                                  UserId u) {
  const std::int32_t negatives = vectors.matrix().NegativeCount(u);
  if (negatives == 0) {
    throw DegenerateUserError("user " + std::to_string(u) +
                              " has no negative items");
  }
  const double m = vectors.num_items();
  std::vector<double> q = PositiveRowSums(vectors, gram, u);
  for (ItemId i = 0; i < vectors.num_items(); ++i) {
    q[i] = (m * qt.values[i] - q[i]) / negatives;
  }
  return q;
}

std::uint64_t GramCacheKey(const InteractionMatrix& matrix,
                           const KernelSpec& spec) {
  Fnv1a hash;
  hash.Value(matrix.Fingerprint());
  hash.Bytes(spec.ToString());
  return hash.digest();
}

namespace {

constexpr char kGramMagic[8] = {'K', 'C', 'F', 'G', 'R', 'A', 'M', '1'};

template <typename T>
void Put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T Get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw IoError("truncated gram cache file");
  return value;
}

}  // namespace

void SaveGram(const GramMatrix& gram, std::uint64_t key,
              const std::string& path) {
  static_assert(std::endian::native == std::endian::little,
                "gram cache format is little-endian");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write gram cache: " + path);
  out.write(kGramMagic, sizeof(kGramMagic));
  Put<std::uint64_t>(out, key);
  const KernelSpec& spec = gram.spec();
  Put<std::uint8_t>(out, static_cast<std::uint8_t>(spec.family));
  Put<double>(out, spec.offset);
  Put<std::int32_t>(out, spec.degree);
  Put<double>(out, spec.gamma);
  Put<std::uint8_t>(out, spec.reduced ? 1 : 0);
  Put<std::int32_t>(out, gram.num_items());
  Put<std::int64_t>(out, gram.nnz());
  for (ItemId i = 0; i < gram.num_items(); ++i) {
    const auto cols = gram.RowCols(i);
    const auto values = gram.RowValues(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      Put<std::int32_t>(out, i);
      Put<std::int32_t>(out, cols[k]);
      Put<double>(out, values[k]);
    }
  }
  if (!out) throw IoError("failed writing gram cache: " + path);
}

std::optional<GramMatrix> LoadGram(const std::string& path,
                                   std::uint64_t expected_key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[sizeof(kGramMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kGramMagic, sizeof(magic)) != 0) {
    throw IoError("not a gram cache file: " + path);
  }
  if (Get<std::uint64_t>(in) != expected_key) return std::nullopt;
  KernelSpec spec;
  spec.family = static_cast<KernelFamily>(Get<std::uint8_t>(in));
  spec.offset = Get<double>(in);
  spec.degree = Get<std::int32_t>(in);
  spec.gamma = Get<double>(in);
  spec.reduced = Get<std::uint8_t>(in) != 0;
  const auto m = Get<std::int32_t>(in);
  const auto nnz = Get<std::int64_t>(in);
  if (m < 0 || nnz < 0) throw IoError("corrupt gram cache header: " + path);
  std::vector<std::int64_t> row_ptr(m + 1, 0);
  std::vector<ItemId> cols(nnz);
  std::vector<double> values(nnz);
  std::int32_t last_row = 0;
  for (std::int64_t k = 0; k < nnz; ++k) {
    const auto row = Get<std::int32_t>(in);
    cols[k] = Get<std::int32_t>(in);
    values[k] = Get<double>(in);
    if (row < last_row || row >= m || cols[k] < 0 || cols[k] >= m) {
      throw IoError("corrupt gram cache triplets: " + path);
    }
    last_row = row;
    ++row_ptr[row + 1];
  }
  for (std::int32_t i = 0; i < m; ++i) row_ptr[i + 1] += row_ptr[i];
  return GramMatrix(spec, m, std::move(row_ptr), std::move(cols),
                    std::move(values));
}

}  // namespace kcf
