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

#include "kcf/experiment.h"

#include <filesystem>

#include <gtest/gtest.h>

#include "kcf/errors.h"
#include "kcf/folds.h"
#include "testing/oracles.h"

namespace kcf {
namespace {

MethodConfig Config(Method method) {
  MethodConfig config;
  config.method = method;
  return config;
}

TEST(MethodConfigTest, NamesRoundTrip) {
  for (Method m : {Method::kEcfOmd, Method::kCfKomd, Method::kMsdw,
                   Method::kCfOmdReference}) {
    EXPECT_EQ(ParseMethod(MethodName(m)), m);
  }
  EXPECT_THROW(ParseMethod("bpr"), ConfigError);
  EXPECT_EQ(ParseQSource("exact"), QSource::kExact);
  EXPECT_THROW(ParseQSource("approx"), ConfigError);
}

TEST(MethodConfigTest, ValidationAndEcho) {
  MethodConfig config = Config(Method::kMsdw);
  EXPECT_EQ(config.locality_q, 3.0);
  config.alpha = 1.5;
  EXPECT_THROW(config.Validate(), ConfigError);
  config = Config(Method::kEcfOmd);
  config.lambda_p = -1.0;
  EXPECT_THROW(config.Validate(), ConfigError);
  const nlohmann::json msdw = Config(Method::kMsdw).ToJson();
  EXPECT_TRUE(msdw.contains("alpha"));
  EXPECT_FALSE(msdw.contains("kernel"));
  const nlohmann::json komd = Config(Method::kCfKomd).ToJson();
  EXPECT_EQ(komd["kernel"], KernelSpec::Linear().ToString());
  EXPECT_EQ(komd["q_source"], "tilde");
}

class RunExperimentTest : public ::testing::Test {
 protected:
  void SetUp() override {
    Rng rng(137);
    // Skewed popularity gives every method something to learn.
    matrix_ = testing::LongTailMatrix(rng, 120, 60, 10.0, 1.0);
    plan_ = MakeFoldPlan(matrix_, 5, 3);
  }
  InteractionMatrix matrix_;
  FoldPlan plan_;
};

TEST_F(RunExperimentTest, ThreadCountDoesNotChangeResults) {
  const FoldSplit split = ApplyFold(matrix_, plan_, 1);
  for (Method method : {Method::kEcfOmd, Method::kCfKomd, Method::kMsdw,
                        Method::kCfOmdReference}) {
    ExperimentOptions serial;
    ExperimentOptions parallel;
    parallel.threads = 8;
    const ExperimentResult a =
        RunExperiment(split.train, split.test, Config(method), serial);
    const ExperimentResult b =
        RunExperiment(split.train, split.test, Config(method), parallel);
    EXPECT_EQ(a.recommendations, b.recommendations) << MethodName(method);
    EXPECT_EQ(a.report.per_user, b.report.per_user);
    EXPECT_EQ(a.report.auc, b.report.auc);
    EXPECT_EQ(a.report.map_at_n, b.report.map_at_n);
    EXPECT_EQ(a.warnings, b.warnings);
    EXPECT_FALSE(a.report.zero_users);
    EXPECT_GT(a.report.auc, 0.5);
  }
}

TEST_F(RunExperimentTest, EmptyTestSetIsFlagged) {
  const FoldSplit split = ApplyFold(matrix_, plan_, 0);
  const ExperimentResult result =
      RunExperiment(split.train, {}, Config(Method::kEcfOmd));
  EXPECT_TRUE(result.report.zero_users);
  EXPECT_EQ(result.report.n_users, 0);
  EXPECT_TRUE(result.recommendations.empty());
}

TEST_F(RunExperimentTest, FailingUsersBecomeWarnings) {
  using Pairs = std::vector<std::pair<UserId, ItemId>>;
  // User 1 owns every item and cannot be trained.
  const InteractionMatrix train = InteractionMatrix::FromPairs(
      2, 2, Pairs{{0, 0}, {1, 0}, {1, 1}});
  const std::map<UserId, std::vector<ItemId>> test = {{0, {1}}, {1, {0}}};
  const ExperimentResult result =
      RunExperiment(train, test, Config(Method::kEcfOmd));
  ASSERT_EQ(result.warnings.size(), 1u);
  EXPECT_NE(result.warnings[0].find("user 1"), std::string::npos);
  EXPECT_EQ(result.recommendations.size(), 1u);
}

TEST_F(RunExperimentTest, TimingsCoverSetupAndPerUserPhases) {
  const FoldSplit split = ApplyFold(matrix_, plan_, 2);
  const ExperimentResult result =
      RunExperiment(split.train, split.test, Config(Method::kCfKomd));
  std::vector<std::string> phases;
  for (const PhaseTiming& t : result.timings) phases.push_back(t.phase);
  EXPECT_EQ(phases,
            (std::vector<std::string>{"gram", "q_tilde", "solve", "score"}));
}

TEST_F(RunExperimentTest, GramCacheIsReused) {
  const auto dir = std::filesystem::temp_directory_path() / "kcf_cache_test";
  std::filesystem::remove_all(dir);
  const FoldSplit split = ApplyFold(matrix_, plan_, 0);
  MethodConfig config = Config(Method::kCfKomd);
  config.kernel = KernelSpec::Tanimoto();
  RecommenderOptions options;
  options.cache_dir = dir.string();
  const Recommender first(split.train, config, options);
  EXPECT_FALSE(first.gram_loaded_from_cache());
  const Recommender second(split.train, config, options);
  EXPECT_TRUE(second.gram_loaded_from_cache());
  EXPECT_EQ(*first.gram(), *second.gram());
  const UserId u = split.test.begin()->first;
  EXPECT_EQ(first.Recommend(u).recommendation,
            second.Recommend(u).recommendation);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace kcf
