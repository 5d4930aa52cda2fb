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

#include <filesystem>
#include <set>

#include <gtest/gtest.h>

#include "testing/oracles.h"

namespace kcf {
namespace {

InteractionMatrix SampleMatrix(std::uint64_t seed = 3) {
  Rng rng(seed);
  return testing::RandomSparseMatrix(rng, 60, 40, 0.2, 1);
}

TEST(FoldPlanTest, DeterministicForSeed) {
  const InteractionMatrix mtx = SampleMatrix();
  EXPECT_EQ(MakeFoldPlan(mtx, 5, 11), MakeFoldPlan(mtx, 5, 11));
  EXPECT_NE(MakeFoldPlan(mtx, 5, 11).Fingerprint(),
            MakeFoldPlan(mtx, 5, 12).Fingerprint());
}

TEST(FoldPlanTest, LightUsersAlwaysTrainAndHalfIsHeldOut) {
  const InteractionMatrix mtx = SampleMatrix();
  const FoldPlan plan = MakeFoldPlan(mtx, 5, 1);
  int assigned = 0;
  for (UserId u = 0; u < mtx.num_users(); ++u) {
    const auto items = mtx.ItemsOf(u);
    if (mtx.PositiveCount(u) < 5) {
      EXPECT_EQ(plan.user_fold[u], FoldPlan::kAlwaysTrain);
      EXPECT_TRUE(plan.heldout[u].empty());
      continue;
    }
    ++assigned;
    ASSERT_GE(plan.user_fold[u], 0);
    ASSERT_LT(plan.user_fold[u], 5);
    const auto& held = plan.heldout[u];
    EXPECT_EQ(held.size(), items.size() / 2);
    EXPECT_TRUE(std::is_sorted(held.begin(), held.end()));
    for (ItemId i : held) EXPECT_TRUE(mtx.Contains(u, i));
  }
  int total = 0;
  for (int f = 0; f < 5; ++f) {
    const int size = plan.FoldSize(f);
    EXPECT_LE(std::abs(size - assigned / 5), 1);
    total += size;
  }
  EXPECT_EQ(total, assigned);
}

TEST(FoldPlanTest, RejectsBadFoldCounts) {
  const InteractionMatrix mtx = SampleMatrix();
  EXPECT_THROW(MakeFoldPlan(mtx, 1, 0), ConfigError);
  EXPECT_THROW(MakeFoldPlan(mtx, 10000, 0), ConfigError);
}

TEST(ApplyFoldTest, TrainDropsExactlyTheHeldOutItems) {
  const InteractionMatrix mtx = SampleMatrix();
  const FoldPlan plan = MakeFoldPlan(mtx, 4, 5);
  std::set<UserId> seen;
  for (int fold = 0; fold < 4; ++fold) {
    const FoldSplit split = ApplyFold(mtx, plan, fold);
    EXPECT_EQ(split.train.num_items(), mtx.num_items());
    std::int64_t held = 0;
    for (const auto& [u, items] : split.test) {
      EXPECT_EQ(plan.user_fold[u], fold);
      EXPECT_TRUE(seen.insert(u).second);
      for (ItemId i : items) EXPECT_FALSE(split.train.Contains(u, i));
      EXPECT_EQ(split.train.PositiveCount(u) + items.size(),
                static_cast<std::size_t>(mtx.PositiveCount(u)));
      held += static_cast<std::int64_t>(items.size());
    }
    EXPECT_EQ(split.train.nnz() + held, mtx.nnz());
  }
}

TEST(ApplyFoldTest, RejectsForeignDatasetAndBadFold) {
  const FoldPlan plan = MakeFoldPlan(SampleMatrix(3), 4, 5);
  EXPECT_THROW(ApplyFold(SampleMatrix(4), plan, 0), ContractError);
  EXPECT_THROW(ApplyFold(SampleMatrix(3), plan, 4), ContractError);
}

TEST(FoldPlanJsonTest, RoundTripIsByteStable) {
  const FoldPlan plan = MakeFoldPlan(SampleMatrix(), 5, 9);
  const std::string text = FoldPlanToJson(plan);
  const FoldPlan back = FoldPlanFromJson(text);
  EXPECT_EQ(back, plan);
  EXPECT_EQ(FoldPlanToJson(back), text);
}

TEST(FoldPlanJsonTest, DetectsTampering) {
  const FoldPlan plan = MakeFoldPlan(SampleMatrix(), 5, 9);
  std::string text = FoldPlanToJson(plan);
  const auto pos = text.find("\"seed\":9");
  ASSERT_NE(pos, std::string::npos) << text.substr(0, 200);
  text.replace(pos, 8, "\"seed\":8");
  EXPECT_THROW(FoldPlanFromJson(text), Error);
  EXPECT_THROW(FoldPlanFromJson("{\"format\": \"other\"}"), Error);
  EXPECT_THROW(FoldPlanFromJson("not json"), Error);
}

TEST(FoldPlanJsonTest, SavesAndLoads) {
  const FoldPlan plan = MakeFoldPlan(SampleMatrix(), 3, 2);
  const auto path =
      (std::filesystem::temp_directory_path() / "kcf_plan_test.json").string();
  SaveFoldPlan(plan, path);
  EXPECT_EQ(LoadFoldPlan(path), plan);
  std::filesystem::remove(path);
  EXPECT_THROW(LoadFoldPlan(path), IoError);
}

}  // namespace
}  // namespace kcf
