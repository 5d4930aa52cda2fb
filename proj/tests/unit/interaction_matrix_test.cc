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

#include <gtest/gtest.h>

#include "testing/oracles.h"

namespace kcf {
namespace {

using Pairs = std::vector<std::pair<UserId, ItemId>>;

TEST(InteractionMatrixTest, BothIndicesAgree) {
  const Pairs pairs = {{0, 2}, {1, 0}, {0, 0}, {2, 2}, {1, 1}};
  const InteractionMatrix mtx = InteractionMatrix::FromPairs(3, 3, pairs);
  EXPECT_EQ(mtx.nnz(), 5);
  const auto items = mtx.ItemsOf(0);
  EXPECT_EQ(std::vector<ItemId>(items.begin(), items.end()),
            (std::vector<ItemId>{0, 2}));
  const auto users = mtx.UsersOf(2);
  EXPECT_EQ(std::vector<UserId>(users.begin(), users.end()),
            (std::vector<UserId>{0, 2}));
  EXPECT_EQ(mtx.Popularity(0), 2);
  EXPECT_EQ(mtx.PositiveCount(1), 2);
  EXPECT_EQ(mtx.NegativeCount(1), 1);
  EXPECT_TRUE(mtx.Contains(2, 2));
  EXPECT_FALSE(mtx.Contains(2, 0));
  EXPECT_DOUBLE_EQ(mtx.Density(), 5.0 / 9.0);
}

TEST(InteractionMatrixTest, RandomMatricesRoundTripThroughBothViews) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const InteractionMatrix mtx = testing::UniformMatrix(rng, 30, 20, 0.2);
    std::int64_t by_item = 0;
    for (ItemId i = 0; i < mtx.num_items(); ++i) {
      for (UserId u : mtx.UsersOf(i)) {
        EXPECT_TRUE(mtx.Contains(u, i));
        ++by_item;
      }
    }
    EXPECT_EQ(by_item, mtx.nnz());
  }
}

TEST(InteractionMatrixTest, RejectsDuplicatesAndOutOfRangePairs) {
  EXPECT_THROW(InteractionMatrix::FromPairs(2, 2, Pairs{{0, 0}, {0, 0}}),
               ContractError);
  EXPECT_THROW(InteractionMatrix::FromPairs(2, 2, Pairs{{2, 0}}),
               ContractError);
  EXPECT_THROW(InteractionMatrix::FromPairs(2, 2, Pairs{{0, -1}}),
               ContractError);
}

TEST(InteractionMatrixTest, FingerprintTracksContent) {
  const InteractionMatrix a = InteractionMatrix::FromPairs(2, 2, Pairs{{0, 1}});
  const InteractionMatrix b = InteractionMatrix::FromPairs(2, 2, Pairs{{0, 1}});
  const InteractionMatrix c = InteractionMatrix::FromPairs(2, 2, Pairs{{1, 1}});
  EXPECT_EQ(a.Fingerprint(), b.Fingerprint());
  EXPECT_NE(a.Fingerprint(), c.Fingerprint());
  EXPECT_EQ(a, b);
}

TEST(BuildMatrixTest, UsesLabelIds) {
  InteractionSet set;
  set.Add("u", "x");
  set.Add("v", "y");
  set.Add("u", "y");
  const InteractionMatrix mtx = BuildMatrix(set);
  EXPECT_EQ(mtx.num_users(), 2);
  EXPECT_EQ(mtx.num_items(), 2);
  EXPECT_TRUE(mtx.Contains(*set.users.Find("u"), *set.items.Find("y")));
  EXPECT_THROW(BuildMatrix(InteractionSet{}), EmptyDatasetError);
}

}  // namespace
}  // namespace kcf
