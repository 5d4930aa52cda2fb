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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "kcf/errors.h"
#include "kcf/hash.h"
#include "kcf/parallel.h"

namespace kcf {

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kEcfOmd:
      return "ecf-omd";
    case Method::kCfKomd:
      return "cf-komd";
    case Method::kMsdw:
      return "msdw";
    case Method::kCfOmdReference:
      return "cfomd-ref";
  }
  return "unknown";
}

Method ParseMethod(std::string_view name) {
  if (name == "ecf-omd") return Method::kEcfOmd;
  if (name == "cf-komd") return Method::kCfKomd;
  if (name == "msdw") return Method::kMsdw;
  if (name == "cfomd-ref") return Method::kCfOmdReference;
  throw ConfigError("unknown method '" + std::string(name) +
                    "' (expected ecf-omd, cf-komd, msdw or cfomd-ref)");
}

std::string_view QSourceName(QSource source) {
  return source == QSource::kTilde ? "tilde" : "exact";
}

QSource ParseQSource(std::string_view name) {
  if (name == "tilde") return QSource::kTilde;
  if (name == "exact") return QSource::kExact;
  throw ConfigError("unknown q source '" + std::string(name) +
                    "' (expected tilde or exact)");
}

void MethodConfig::Validate() const {
  if (!std::isfinite(lambda_p) || lambda_p < 0.0) {
    throw ConfigError("lambda_p must be a finite value >= 0");
  }
  if (!std::isfinite(lambda_n) || lambda_n < 0.0) {
    throw ConfigError("lambda_n must be a finite value >= 0");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ConfigError("alpha must lie in [0, 1]");
  }
  if (!std::isfinite(locality_q) || locality_q < 1.0) {
    throw ConfigError("locality q must be a finite value >= 1");
  }
  if (!(solver.tolerance > 0.0) || solver.max_iterations < 1) {
    throw ConfigError("solver needs tolerance > 0 and max_iterations >= 1");
  }
  kernel.Validate();
}

nlohmann::json MethodConfig::ToJson() const {
  nlohmann::json out;
  out["method"] = MethodName(method);
  switch (method) {
    case Method::kCfKomd:
      out["kernel"] = kernel.ToString();
      out["q_source"] = QSourceName(q_source);
      [[fallthrough]];
    case Method::kEcfOmd:
      out["lambda_p"] = lambda_p;
      out["tolerance"] = solver.tolerance;
      out["max_iterations"] = solver.max_iterations;
      break;
    case Method::kCfOmdReference:
      out["lambda_p"] = lambda_p;
      out["lambda_n"] = lambda_n;
      out["tolerance"] = solver.tolerance;
      out["max_iterations"] = solver.max_iterations;
      break;
    case Method::kMsdw:
      out["alpha"] = alpha;
      out["locality_q"] = locality_q;
      break;
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

Recommender::Recommender(const InteractionMatrix& train,
                         const MethodConfig& config,
                         const RecommenderOptions& options)
    : train_(&train), config_(config), vectors_(train) {
  config_.Validate();
  switch (config_.method) {
    case Method::kEcfOmd: {
      const auto start = Clock::now();
      cache_.emplace(vectors_);
      timings_.push_back({"centroid_cache", SecondsSince(start)});
      break;
    }
    case Method::kCfKomd: {
      auto start = Clock::now();
      std::string path;
      const std::uint64_t key = GramCacheKey(train, config_.kernel);
      if (!options.cache_dir.empty()) {
        std::filesystem::create_directories(options.cache_dir);
        path = (std::filesystem::path(options.cache_dir) /
                ("gram-" + HexDigest(key) + ".bin"))
                   .string();
        gram_ = LoadGram(path, key);
        gram_from_cache_ = gram_.has_value();
      }
      if (!gram_) {
        GramOptions gram_options;
        gram_options.threads = options.threads;
        gram_ = ComputeGram(vectors_, config_.kernel, gram_options);
        if (!path.empty()) SaveGram(*gram_, key, path);
      }
      timings_.push_back({"gram", SecondsSince(start)});
      start = Clock::now();
      qt_ = ComputeQTilde(vectors_, *gram_);
      timings_.push_back({"q_tilde", SecondsSince(start)});
      break;
    }
    case Method::kCfOmdReference:
      if (train.num_items() > kReferenceItemCap) {
        throw ConfigError("cfomd-ref is limited to " +
                          std::to_string(kReferenceItemCap) + " items, got " +
                          std::to_string(train.num_items()));
      }
      break;
    case Method::kMsdw:
      break;
  }
}

UserOutcome Recommender::Recommend(UserId u) const {
  UserOutcome outcome;
  UserSolution solution;
  auto start = Clock::now();
  switch (config_.method) {
    case Method::kEcfOmd:
      solution =
          TrainUserEcf(vectors_, *cache_, u, config_.lambda_p, config_.solver);
      outcome.solve_seconds = SecondsSince(start);
      start = Clock::now();
      outcome.recommendation = ScoreUserEcf(solution, vectors_, *cache_, u);
      break;
    case Method::kCfKomd: {
      std::vector<double> exact;
      std::span<const double> q = qt_->values;
      if (config_.q_source == QSource::kExact) {
        exact = ComputeQExact(vectors_, *gram_, *qt_, u);
        q = exact;
      }
      solution = TrainUserKomd(vectors_, *gram_, q, u, config_.lambda_p,
                               config_.solver);
      outcome.solve_seconds = SecondsSince(start);
      start = Clock::now();
      outcome.recommendation = ScoreUser(solution, *gram_, q, *train_, u);
      break;
    }
    case Method::kCfOmdReference: {
      const ReferenceSolution ref = CfomdReference(
          *train_, u, config_.lambda_p, config_.lambda_n, config_.solver);
      solution = ref.solution;
      outcome.solve_seconds = SecondsSince(start);
      start = Clock::now();
      outcome.recommendation = RankScores(
          *train_, u,
          std::span<const double>(ref.scores.data(),
                                  static_cast<std::size_t>(ref.scores.size())));
      break;
    }
    case Method::kMsdw:
      outcome.recommendation =
          AsymcRecommend(*train_, config_.alpha, config_.locality_q, u);
      break;
  }
  outcome.score_seconds = SecondsSince(start);
  outcome.iterations = solution.iterations;
  outcome.converged = solution.converged();
  outcome.final_gap = solution.final_gap;
  return outcome;
}

ExperimentResult RunExperiment(
    const InteractionMatrix& train,
    const std::map<UserId, std::vector<ItemId>>& test,
    const MethodConfig& config, const ExperimentOptions& options) {
  RecommenderOptions recommender_options;
  recommender_options.threads = options.threads;
  recommender_options.cache_dir = options.cache_dir;
  const Recommender recommender(train, config, recommender_options);

  std::vector<UserId> users;
  std::vector<const std::vector<ItemId>*> heldout;
  for (const auto& [u, items] : test) {
    users.push_back(u);
    heldout.push_back(&items);
  }
  struct Slot {
    std::optional<UserOutcome> outcome;
    std::optional<UserMetrics> metrics;
    std::string warning;
  };
  std::vector<Slot> slots(users.size());
  ParallelFor(static_cast<std::int32_t>(users.size()), options.threads,
              [&](int, std::int32_t k) {
                Slot& slot = slots[k];
                const UserId u = users[k];
                try {
                  UserOutcome outcome = recommender.Recommend(u);
                  if (!outcome.converged) {
                    char buffer[160];
                    std::snprintf(buffer, sizeof(buffer),
                                  "user %d: solver stopped after %d "
                                  "iterations with gap %.3g",
                                  u, outcome.iterations, outcome.final_gap);
                    slot.warning = buffer;
                  }
                  slot.metrics =
                      EvaluateUser(outcome.recommendation, *heldout[k],
                                   train.num_items(), options.map_n);
                  if (!options.keep_recommendations) {
                    outcome.recommendation = Recommendation{};
                  }
                  slot.outcome = std::move(outcome);
                } catch (const Error& e) {
                  slot.warning =
                      "user " + std::to_string(u) + " skipped: " + e.what();
                }
              });

  ExperimentResult result;
  result.timings = recommender.setup_timings();
  double solve = 0.0;
  double score = 0.0;
  std::vector<UserMetrics> metrics;
  for (Slot& slot : slots) {
    if (!slot.warning.empty()) result.warnings.push_back(slot.warning);
    if (!slot.outcome) continue;
    solve += slot.outcome->solve_seconds;
    score += slot.outcome->score_seconds;
    metrics.push_back(*slot.metrics);
    if (options.keep_recommendations) {
      result.recommendations.push_back(
          std::move(slot.outcome->recommendation));
    }
  }
  result.timings.push_back({"solve", solve});
  result.timings.push_back({"score", score});
  result.report = Aggregate(metrics, options.map_n);
  result.report.config = config.ToJson();
  return result;
}

}  // namespace kcf
