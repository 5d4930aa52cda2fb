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

#ifndef KCF_EXPERIMENT_H_
#define KCF_EXPERIMENT_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "kcf/cf_omd.h"
#include "kcf/gram.h"
#include "kcf/kernel.h"
#include "kcf/metrics.h"
#include "kcf/recommend.h"
#include "kcf/simplex_qp.h"

namespace kcf {

enum class Method { kEcfOmd, kCfKomd, kMsdw, kCfOmdReference };
enum class QSource { kTilde, kExact };

// "ecf-omd", "cf-komd", "msdw", "cfomd-ref".
std::string_view MethodName(Method method);
Method ParseMethod(std::string_view name);
// "tilde", "exact".
std::string_view QSourceName(QSource source);
QSource ParseQSource(std::string_view name);

struct MethodConfig {
  Method method = Method::kEcfOmd;
  // Only read by cf-komd.
  KernelSpec kernel = KernelSpec::Linear();
  double lambda_p = 0.01;
  QSource q_source = QSource::kTilde;
  // msdw asymmetry and locality exponent.
  double alpha = 0.5;
  double locality_q = 3.0;
  // cfomd-ref ridge on the negative half.
  double lambda_n = 1e8;
  SolverOptions solver;

  // Throws ConfigError for out-of-range values.
  void Validate() const;
  // The fields that matter for `method`.
  nlohmann::json ToJson() const;
};

struct PhaseTiming {
  std::string phase;
  double seconds = 0.0;
};

struct RecommenderOptions {
  int threads = 1;
  // Directory for gram caches; empty disables caching.
  std::string cache_dir;
};

struct UserOutcome {
  Recommendation recommendation;
  int iterations = 0;
  bool converged = true;
  double final_gap = 0.0;
  double solve_seconds = 0.0;
  double score_seconds = 0.0;
};

// Shared read-only state for one training matrix and method: gram and q~
// for cf-komd, the centroid cache for ecf-omd. Recommend() may be called
// from several threads at once.
class Recommender {
 public:
  Recommender(const InteractionMatrix& train, const MethodConfig& config,
              const RecommenderOptions& options = {});

  // Throws the library's errors for users that cannot be trained.
  UserOutcome Recommend(UserId u) const;

  const MethodConfig& config() const { return config_; }
  const std::vector<PhaseTiming>& setup_timings() const { return timings_; }
  bool gram_loaded_from_cache() const { return gram_from_cache_; }
  const GramMatrix* gram() const { return gram_ ? &*gram_ : nullptr; }

 private:
  const InteractionMatrix* train_;
  MethodConfig config_;
  ItemVectors vectors_;
  std::optional<NegativeCentroidCache> cache_;
  std::optional<GramMatrix> gram_;
  std::optional<QTilde> qt_;
  std::vector<PhaseTiming> timings_;
  bool gram_from_cache_ = false;
};

struct ExperimentOptions {
  int threads = 1;
  int map_n = 500;
  std::string cache_dir;
  bool keep_recommendations = true;
};

struct ExperimentResult {
  // In ascending user order; users that failed are missing.
  std::vector<Recommendation> recommendations;
  MetricsReport report;
  // One line per failed or non-converged user, in user order.
  std::vector<std::string> warnings;
  // Setup phases, then "solve" and "score" summed over users.
  std::vector<PhaseTiming> timings;
};

// Trains and scores every test user on `train` and evaluates against the
// held-out items. Per-user failures become warnings.
ExperimentResult RunExperiment(
    const InteractionMatrix& train,
    const std::map<UserId, std::vector<ItemId>>& test,
    const MethodConfig& config, const ExperimentOptions& options = {});

}  // namespace kcf

#endif  // KCF_EXPERIMENT_H_
