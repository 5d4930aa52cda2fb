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

#include "kcf/cli.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kcf/analysis.h"
#include "kcf/errors.h"
#include "kcf/experiment.h"
#include "kcf/folds.h"
#include "kcf/hash.h"
#include "kcf/interaction_matrix.h"
#include "kcf/interactions.h"
#include "kcf/metrics.h"

namespace kcf {
namespace {

using nlohmann::json;

constexpr char kRecsMagic[] = "# kcf-recommendations 1";

// Artifacts that disagree with each other (plan vs data, recommendations vs
// plan).
class MismatchError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

struct Options {
  std::string data;
  std::string format = "auto";
  bool skip_header = false;
  double threshold = std::numeric_limits<double>::quiet_NaN();
  std::string method = "ecf-omd";
  std::string kernel = "linear";
  double c = 1.0;
  int degree = 2;
  double gamma = 1.0;
  bool no_reduce = false;
  double lambda_p = 0.01;
  double lambda_n = 1e8;
  std::string q_source = "tilde";
  double alpha = 0.5;
  double locality_q = 3.0;
  double tolerance = 1e-6;
  int max_iterations = 1000;
  int folds = 5;
  std::string fold = "all";
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out = ".";
  int top_n = 0;
  int map_n = 500;
  std::string plan;
  std::string recs;
  std::string cache_dir;
  double density_p = std::numeric_limits<double>::quiet_NaN();
};

// Options whose presence is only legal with cf-komd.
struct KernelFlags {
  std::vector<CLI::Option*> options;

  bool AnyGiven() const {
    for (const CLI::Option* option : options) {
      if (option->count() > 0) return true;
    }
    return false;
  }
  std::string Names() const {
    std::string names;
    for (const CLI::Option* option : options) {
      if (option->count() == 0) continue;
      if (!names.empty()) names += ", ";
      names += option->get_name();
    }
    return names;
  }
};

void AddDataOptions(CLI::App* app, Options& o) {
  app->add_option("--data", o.data, "Ratings file")
      ->required()
      ->envname("KCF_DATA");
  app->add_option("--format", o.format,
                  "Field delimiter: auto, tsv, csv, dat (::) or space")
      ->envname("KCF_FORMAT")
      ->capture_default_str();
  app->add_flag("--skip-header", o.skip_header, "Ignore the first data line")
      ->envname("KCF_SKIP_HEADER");
  app->add_option("--threshold", o.threshold,
                  "Keep only ratings >= threshold (default: keep all)")
      ->envname("KCF_THRESHOLD");
}

void AddOutOption(CLI::App* app, Options& o) {
  app->add_option("--out", o.out, "Output directory")
      ->envname("KCF_OUT")
      ->capture_default_str();
}

void AddFoldOptions(CLI::App* app, Options& o) {
  app->add_option("--folds", o.folds, "Number of folds")
      ->envname("KCF_FOLDS")
      ->capture_default_str();
  app->add_option("--seed", o.seed, "Shuffle seed")
      ->envname("KCF_SEED")
      ->capture_default_str();
}

KernelFlags AddMethodOptions(CLI::App* app, Options& o) {
  app->add_option("--method", o.method, "ecf-omd, cf-komd, msdw or cfomd-ref")
      ->envname("KCF_METHOD")
      ->capture_default_str();
  KernelFlags flags;
  flags.options.push_back(
      app->add_option("--kernel", o.kernel,
                      "cf-komd kernel: linear, polynomial, rbf, tanimoto")
          ->envname("KCF_KERNEL"));
  flags.options.push_back(
      app->add_option("--c", o.c, "Polynomial offset")->envname("KCF_C"));
  flags.options.push_back(app->add_option("--degree", o.degree,
                                          "Polynomial degree")
                              ->envname("KCF_DEGREE"));
  flags.options.push_back(
      app->add_option("--gamma", o.gamma, "RBF width")->envname("KCF_GAMMA"));
  flags.options.push_back(
      app->add_flag("--no-reduce", o.no_reduce,
                    "Keep the constant term of the kernel")
          ->envname("KCF_NO_REDUCE"));
  flags.options.push_back(
      app->add_option("--q-source", o.q_source, "tilde or exact")
          ->envname("KCF_Q_SOURCE"));
  app->add_option("--lambda-p", o.lambda_p, "Ridge on positive weights")
      ->envname("KCF_LAMBDA_P")
      ->capture_default_str();
  app->add_option("--lambda-n", o.lambda_n, "cfomd-ref ridge on negatives")
      ->envname("KCF_LAMBDA_N")
      ->capture_default_str();
  app->add_option("--alpha", o.alpha, "msdw asymmetry in [0, 1]")
      ->envname("KCF_ALPHA")
      ->capture_default_str();
  app->add_option("--locality-q", o.locality_q, "msdw locality exponent")
      ->envname("KCF_LOCALITY_Q")
      ->capture_default_str();
  app->add_option("--tolerance", o.tolerance, "Solver tolerance")
      ->envname("KCF_TOLERANCE")
      ->capture_default_str();
  app->add_option("--max-iter", o.max_iterations, "Solver iteration cap")
      ->envname("KCF_MAX_ITER")
      ->capture_default_str();
  app->add_option("--threads", o.threads, "Worker threads")
      ->envname("KCF_THREADS")
      ->capture_default_str();
  app->add_option("--fold", o.fold, "Fold id or 'all'")
      ->envname("KCF_FOLD")
      ->capture_default_str();
  app->add_option("--cache-dir", o.cache_dir, "Gram cache directory")
      ->envname("KCF_CACHE_DIR");
  return flags;
}

void AddMapOption(CLI::App* app, Options& o) {
  app->add_option("--map-n", o.map_n, "Cutoff N of mAP@N")
      ->envname("KCF_MAP_N")
      ->capture_default_str();
}

std::string PlanPath(const Options& o) {
  if (!o.plan.empty()) return o.plan;
  return (std::filesystem::path(o.out) / "plan.json").string();
}

std::string RecsPath(const Options& o) {
  if (!o.recs.empty()) return o.recs;
  return (std::filesystem::path(o.out) / "recommendations.tsv").string();
}

std::string OutPath(const Options& o, const std::string& name) {
  std::filesystem::create_directories(o.out);
  return (std::filesystem::path(o.out) / name).string();
}

TextFormat MakeFormat(const Options& o) {
  TextFormat format;
  if (o.format == "auto") {
    format.delimiter = "";
  } else if (o.format == "tsv") {
    format.delimiter = "\t";
  } else if (o.format == "csv") {
    format.delimiter = ",";
  } else if (o.format == "dat") {
    format.delimiter = "::";
  } else if (o.format == "space") {
    format.delimiter = " ";
  } else {
    throw ConfigError("unknown format '" + o.format +
                      "' (expected auto, tsv, csv, dat or space)");
  }
  format.skip_header = o.skip_header;
  return format;
}

struct Dataset {
  InteractionSet set;
  InteractionMatrix matrix;
};

Dataset LoadDataset(const Options& o) {
  std::optional<double> threshold;
  if (!std::isnan(o.threshold)) threshold = o.threshold;
  Dataset d;
  d.set = LoadInteractions(o.data, MakeFormat(o), threshold);
  d.matrix = BuildMatrix(d.set);
  return d;
}

json DatasetEcho(const Options& o, const Dataset& d) {
  json echo;
  echo["data"] = o.data;
  echo["format"] = o.format;
  if (!std::isnan(o.threshold)) echo["threshold"] = o.threshold;
  echo["dataset_fingerprint"] = HexDigest(d.matrix.Fingerprint());
  echo["users"] = d.matrix.num_users();
  echo["items"] = d.matrix.num_items();
  echo["ratings"] = d.matrix.nnz();
  return echo;
}

// Kernel flags are rejected before any data is read.
MethodConfig MakeMethodConfig(const Options& o, const KernelFlags& flags) {
  MethodConfig config;
  config.method = ParseMethod(o.method);
  if (config.method != Method::kCfKomd && flags.AnyGiven()) {
    throw ConfigError(flags.Names() + " only apply to --method cf-komd");
  }
  KernelSpec spec;
  spec.family = ParseFamily(o.kernel);
  spec.offset = o.c;
  spec.degree = o.degree;
  spec.gamma = o.gamma;
  spec.reduced = !o.no_reduce;
  if (spec.family == KernelFamily::kLinear ||
      spec.family == KernelFamily::kTanimoto) {
    spec.reduced = true;
  }
  config.kernel = spec;
  config.q_source = ParseQSource(o.q_source);
  config.lambda_p = o.lambda_p;
  config.lambda_n = o.lambda_n;
  config.alpha = o.alpha;
  config.locality_q = o.locality_q;
  config.solver.tolerance = o.tolerance;
  config.solver.max_iterations = o.max_iterations;
  config.Validate();
  if (o.threads < 1) throw ConfigError("--threads must be >= 1");
  return config;
}

std::vector<int> SelectFolds(const std::string& fold, int k) {
  std::vector<int> folds;
  if (fold == "all") {
    for (int f = 0; f < k; ++f) folds.push_back(f);
    return folds;
  }
  int value = -1;
  try {
    std::size_t used = 0;
    value = std::stoi(fold, &used);
    if (used != fold.size()) value = -1;
  } catch (const std::exception&) {
    value = -1;
  }
  if (value < 0 || value >= k) {
    throw ConfigError("--fold must be 'all' or an id in [0, " +
                      std::to_string(k) + "), got '" + fold + "'");
  }
  return {value};
}

FoldPlan LoadCheckedPlan(const Options& o, const Dataset& d) {
  FoldPlan plan;
  try {
    plan = LoadFoldPlan(PlanPath(o));
  } catch (const ContractError& e) {
    throw ConfigError("invalid fold plan " + PlanPath(o) + ": " + e.what());
  }
  if (plan.dataset_fingerprint != d.matrix.Fingerprint()) {
    throw MismatchError("fold plan " + PlanPath(o) + " was made for dataset " +
                        HexDigest(plan.dataset_fingerprint) + " but " +
                        o.data + " has fingerprint " +
                        HexDigest(d.matrix.Fingerprint()));
  }
  return plan;
}

class TimingLog {
 public:
  explicit TimingLog(const std::string& path) : out_(path) {
    if (!out_) throw IoError("cannot write timing log: " + path);
  }
  void Record(const std::string& command, int fold, const PhaseTiming& t) {
    json line{{"command", command}, {"phase", t.phase}, {"seconds", t.seconds}};
    if (fold >= 0) line["fold"] = fold;
    out_ << line.dump() << '\n';
  }

 private:
  std::ofstream out_;
};

void WriteJsonFile(const std::string& path, const json& value) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << value.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path);
}

std::string FormatScore(double score) {
  if (std::isinf(score)) return score > 0 ? "inf" : "-inf";
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", score);
  return buffer;
}

std::string SummaryLine(const MetricsReport& r) {
  char buffer[256];
  if (r.auc_fold_stdev) {
    std::snprintf(buffer, sizeof(buffer),
                  "AUC %.4f +/- %.4f (fold stdev)  mAP@%d %.4f  users %lld",
                  r.auc, *r.auc_fold_stdev, r.map_n, r.map_at_n,
                  static_cast<long long>(r.n_users));
  } else {
    std::snprintf(buffer, sizeof(buffer),
                  "AUC %.4f  mAP@%d %.4f  users %lld", r.auc, r.map_n,
                  r.map_at_n, static_cast<long long>(r.n_users));
  }
  return buffer;
}

// --- split -------------------------------------------------------------

int CmdSplit(const Options& o, std::ostream& out) {
  const Dataset d = LoadDataset(o);
  out << "users=" << d.matrix.num_users() << " items=" << d.matrix.num_items()
      << " ratings=" << d.matrix.nnz() << '\n';
  const FoldPlan plan = MakeFoldPlan(d.matrix, o.folds, o.seed);
  const std::string path = o.plan.empty() ? OutPath(o, "plan.json") : o.plan;
  SaveFoldPlan(plan, path);
  out << "wrote " << path << " (k=" << plan.k << ", seed=" << plan.seed;
  for (int f = 0; f < plan.k; ++f) {
    out << (f == 0 ? ", fold sizes " : " ") << plan.FoldSize(f);
  }
  out << ")\n";
  return kExitOk;
}

// --- recommend ---------------------------------------------------------

int CmdRecommend(const Options& o, const KernelFlags& flags, std::ostream& out,
                 std::ostream& err) {
  const MethodConfig config = MakeMethodConfig(o, flags);
  if (o.top_n < 0) throw ConfigError("--top-n must be >= 0 (0 keeps all)");
  const Dataset d = LoadDataset(o);
  const FoldPlan plan = LoadCheckedPlan(o, d);
  const std::vector<int> folds = SelectFolds(o.fold, plan.k);

  json echo = DatasetEcho(o, d);
  echo["command"] = "recommend";
  echo["plan_fingerprint"] = HexDigest(plan.Fingerprint());
  echo["k"] = plan.k;
  echo["seed"] = plan.seed;
  echo["folds"] = folds;
  echo["method"] = config.ToJson();
  echo["top_n"] = o.top_n;

  const std::string path = o.recs.empty() ? OutPath(o, "recommendations.tsv")
                                          : o.recs;
  TimingLog timings(OutPath(o, "timings.jsonl"));
  std::ofstream tsv(path);
  if (!tsv) throw IoError("cannot write recommendations: " + path);
  tsv << kRecsMagic << '\n' << "# config " << echo.dump() << '\n'
      << "user_label\trank\titem_label\tscore\n";

  ExperimentOptions options;
  options.threads = o.threads;
  options.cache_dir = o.cache_dir;
  std::int64_t users = 0;
  for (int fold : folds) {
    const auto start = std::chrono::steady_clock::now();
    const FoldSplit split = ApplyFold(d.matrix, plan, fold);
    ExperimentResult result =
        RunExperiment(split.train, split.test, config, options);
    for (const std::string& warning : result.warnings) {
      err << "warning: fold " << fold << ": " << warning << '\n';
    }
    for (const PhaseTiming& t : result.timings) {
      timings.Record("recommend", fold, t);
    }
    for (Recommendation& rec : result.recommendations) {
      const std::size_t length =
          o.top_n > 0 ? std::min<std::size_t>(o.top_n, rec.ranked.size())
                      : rec.ranked.size();
      const std::string& user = d.set.users.Label(rec.user);
      for (std::size_t r = 0; r < length; ++r) {
        tsv << user << '\t' << r + 1 << '\t'
            << d.set.items.Label(rec.ranked[r].item) << '\t'
            << FormatScore(rec.ranked[r].score) << '\n';
      }
      ++users;
    }
    const double wall = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    timings.Record("recommend", fold, {"fold_total", wall});
  }
  if (!tsv) throw IoError("failed writing recommendations: " + path);
  out << "wrote " << path << " (" << users << " users)\n";
  return kExitOk;
}

// --- eval --------------------------------------------------------------

struct LoadedRecs {
  json config;
  std::map<UserId, std::vector<ScoredItem>> rankings;
};

LoadedRecs ReadRecommendations(const std::string& path, const Dataset& d) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open recommendations: " + path);
  LoadedRecs recs;
  std::string line;
  std::int64_t number = 0;
  bool magic = false;
  bool header = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line == kRecsMagic) magic = true;
      if (line.rfind("# config ", 0) == 0) {
        try {
          recs.config = json::parse(line.substr(9));
        } catch (const json::exception& e) {
          throw ParseError(std::string("bad config echo: ") + e.what(), number);
        }
      }
      continue;
    }
    if (!header) {
      header = true;
      if (line.rfind("user_label\t", 0) == 0) continue;
    }
    std::vector<std::string> fields;
    std::stringstream stream(line);
    std::string field;
    while (std::getline(stream, field, '\t')) fields.push_back(field);
    if (fields.size() != 4) {
      throw ParseError("expected 4 tab-separated fields in " + path, number);
    }
    const auto user = d.set.users.Find(fields[0]);
    const auto item = d.set.items.Find(fields[2]);
    if (!user || !item) {
      throw ParseError("unknown user or item label in " + path, number);
    }
    char* end = nullptr;
    const double score = std::strtod(fields[3].c_str(), &end);
    if (end == fields[3].c_str()) {
      throw ParseError("bad score in " + path, number);
    }
    auto& ranked = recs.rankings[*user];
    const long rank = std::strtol(fields[1].c_str(), nullptr, 10);
    if (rank != static_cast<long>(ranked.size()) + 1) {
      throw ParseError("ranks of user " + fields[0] + " are not consecutive",
                       number);
    }
    ranked.push_back({*item, score});
  }
  if (!magic || recs.config.is_null()) {
    throw ParseError("missing kcf-recommendations header in " + path, 1);
  }
  return recs;
}

int CmdEval(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.map_n < 1) throw ConfigError("--map-n must be >= 1");
  const Dataset d = LoadDataset(o);
  const FoldPlan plan = LoadCheckedPlan(o, d);
  const std::string recs_path = RecsPath(o);
  LoadedRecs recs = ReadRecommendations(recs_path, d);
  const std::string expected = HexDigest(plan.Fingerprint());
  const std::string found = recs.config.value("plan_fingerprint", "");
  if (found != expected) {
    throw MismatchError("recommendations in " + recs_path +
                        " were produced for fold plan " + found + " but " +
                        PlanPath(o) + " has fingerprint " + expected +
                        "; re-run recommend with this plan");
  }
  std::vector<int> folds;
  for (const auto& f : recs.config.at("folds")) folds.push_back(f.get<int>());

  std::vector<MetricsReport> reports;
  std::int64_t missing = 0;
  for (int fold : folds) {
    std::vector<UserMetrics> users;
    for (UserId u = 0; u < plan.num_users; ++u) {
      if (plan.user_fold[u] != fold) continue;
      const std::vector<ItemId>& heldout = plan.heldout[u];
      auto it = recs.rankings.find(u);
      if (it == recs.rankings.end()) {
        ++missing;
        continue;
      }
      Recommendation rec;
      rec.user = u;
      rec.ranked = std::move(it->second);
      for (ItemId i : d.matrix.ItemsOf(u)) {
        if (!std::binary_search(heldout.begin(), heldout.end(), i)) {
          rec.excluded.push_back(i);
        }
      }
      users.push_back(
          EvaluateUser(rec, heldout, d.matrix.num_items(), o.map_n));
    }
    reports.push_back(Aggregate(users, o.map_n));
  }
  if (missing > 0) {
    err << "warning: " << missing
        << " test users have no recommendations and were not evaluated\n";
  }
  MetricsReport report = CombineFolds(reports);
  report.config = recs.config;
  report.config["map_n"] = o.map_n;
  if (report.zero_users) err << "warning: no users were evaluated\n";

  json doc = MetricsReportToJson(report);
  doc["n_missing"] = missing;
  const std::string metrics_path = OutPath(o, "metrics.json");
  WriteJsonFile(metrics_path, doc);
  std::ofstream per_user(OutPath(o, "per_user.tsv"));
  WritePerUserTsv(report, &d.set.users.labels(), per_user);
  out << SummaryLine(report) << '\n';
  return kExitOk;
}

// --- analyze -----------------------------------------------------------

json FitJson(const TailSide& side) {
  if (!side.fit) return json{{"error", side.error}};
  return json{{"exponent", side.fit->exponent},
              {"intercept", side.fit->intercept},
              {"r2", side.fit->r2},
              {"points", side.fit->points}};
}

int CmdAnalyze(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.threads < 1) throw ConfigError("--threads must be >= 1");
  const Dataset d = LoadDataset(o);
  const double p = std::isnan(o.density_p) ? d.matrix.Density() : o.density_p;
  DensityReport density =
      EstimateKernelDensity(p, d.matrix.num_users(), d.matrix.num_items());
  const ItemVectors vectors(d.matrix);
  GramOptions gram_options;
  gram_options.threads = o.threads;
  const auto start = std::chrono::steady_clock::now();
  const GramMatrix gram = ComputeGram(vectors, KernelSpec::Linear(),
                                      gram_options);
  density.empirical = EmpiricalDensity(gram);
  const double gram_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  const TailReport tails = TailReportFor(d.matrix);
  for (const TailSide* side : {&tails.items, &tails.users}) {
    if (!side->fit) err << "warning: " << side->error << '\n';
  }

  json doc;
  doc["config"] = DatasetEcho(o, d);
  doc["config"]["command"] = "analyze";
  doc["density"] = {{"p", density.p},
                    {"n", density.n},
                    {"m", density.m},
                    {"p_offdiag", density.p_offdiag},
                    {"d_k", density.d_k},
                    {"empirical", *density.empirical}};
  doc["tails"] = {{"item_popularity", FitJson(tails.items)},
                  {"user_activity", FitJson(tails.users)}};
  WriteJsonFile(OutPath(o, "analysis.json"), doc);
  {
    std::ofstream tsv(OutPath(o, "item_popularity.tsv"));
    WriteRankCountTsv(tails.items.ranked_counts, tsv);
  }
  {
    std::ofstream tsv(OutPath(o, "user_activity.tsv"));
    WriteRankCountTsv(tails.users.ranked_counts, tsv);
  }
  TimingLog timings(OutPath(o, "timings.jsonl"));
  timings.Record("analyze", -1, {"gram", gram_seconds});

  char buffer[200];
  std::snprintf(buffer, sizeof(buffer),
                "density(R)=%.4f%%  d(K) estimate=%.4f%%  empirical=%.4f%%",
                100.0 * p, 100.0 * density.d_k, 100.0 * *density.empirical);
  out << buffer << '\n';
  for (const TailSide* side : {&tails.items, &tails.users}) {
    if (!side->fit) continue;
    std::snprintf(buffer, sizeof(buffer), "%s: exponent %.4f  r2 %.4f",
                  std::string(AxisName(side->fit->axis)).c_str(),
                  side->fit->exponent, side->fit->r2);
    out << buffer << '\n';
  }
  return kExitOk;
}

// --- run ---------------------------------------------------------------

int CmdRun(const Options& o, const KernelFlags& flags, std::ostream& out,
           std::ostream& err) {
  const MethodConfig config = MakeMethodConfig(o, flags);
  if (o.map_n < 1) throw ConfigError("--map-n must be >= 1");
  const Dataset d = LoadDataset(o);
  const FoldPlan plan = MakeFoldPlan(d.matrix, o.folds, o.seed);
  const std::vector<int> folds = SelectFolds(o.fold, plan.k);

  ExperimentOptions options;
  options.threads = o.threads;
  options.cache_dir = o.cache_dir;
  options.map_n = o.map_n;
  options.keep_recommendations = false;
  TimingLog timings(OutPath(o, "timings.jsonl"));
  std::vector<MetricsReport> reports;
  for (int fold : folds) {
    const FoldSplit split = ApplyFold(d.matrix, plan, fold);
    ExperimentResult result =
        RunExperiment(split.train, split.test, config, options);
    for (const std::string& warning : result.warnings) {
      err << "warning: fold " << fold << ": " << warning << '\n';
    }
    for (const PhaseTiming& t : result.timings) timings.Record("run", fold, t);
    out << "fold " << fold << ": " << SummaryLine(result.report) << '\n';
    reports.push_back(std::move(result.report));
  }
  MetricsReport report = CombineFolds(reports);
  json echo = DatasetEcho(o, d);
  echo["command"] = "run";
  echo["plan_fingerprint"] = HexDigest(plan.Fingerprint());
  echo["k"] = plan.k;
  echo["seed"] = plan.seed;
  echo["folds"] = folds;
  echo["method"] = config.ToJson();
  echo["map_n"] = o.map_n;
  report.config = echo;
  WriteJsonFile(OutPath(o, "metrics.json"), MetricsReportToJson(report));
  out << SummaryLine(report) << '\n';
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Kernel-based collaborative filtering for implicit feedback"};
  app.require_subcommand(1);
  Options o;

  CLI::App* split = app.add_subcommand("split", "Write a k-fold user split");
  AddDataOptions(split, o);
  AddFoldOptions(split, o);
  AddOutOption(split, o);
  split->add_option("--plan", o.plan, "Plan path (default OUT/plan.json)")
      ->envname("KCF_PLAN");

  CLI::App* recommend =
      app.add_subcommand("recommend", "Rank items for the test users");
  AddDataOptions(recommend, o);
  AddOutOption(recommend, o);
  const KernelFlags recommend_flags = AddMethodOptions(recommend, o);
  recommend->add_option("--plan", o.plan, "Plan path (default OUT/plan.json)")
      ->envname("KCF_PLAN");
  recommend->add_option("--recs", o.recs,
                        "Output TSV (default OUT/recommendations.tsv)")
      ->envname("KCF_RECS");
  recommend->add_option("--top-n", o.top_n, "Items per user, 0 for all")
      ->envname("KCF_TOP_N")
      ->capture_default_str();

  CLI::App* eval = app.add_subcommand("eval", "Score recommendations");
  AddDataOptions(eval, o);
  AddOutOption(eval, o);
  AddMapOption(eval, o);
  eval->add_option("--plan", o.plan, "Plan path (default OUT/plan.json)")
      ->envname("KCF_PLAN");
  eval->add_option("--recs", o.recs,
                   "Recommendations TSV (default OUT/recommendations.tsv)")
      ->envname("KCF_RECS");

  CLI::App* analyze =
      app.add_subcommand("analyze", "Kernel sparsity and long-tail fits");
  AddDataOptions(analyze, o);
  AddOutOption(analyze, o);
  analyze->add_option("--threads", o.threads, "Worker threads")
      ->envname("KCF_THREADS")
      ->capture_default_str();
  analyze->add_option("--p", o.density_p,
                      "Rating probability for the estimate (default: density)")
      ->envname("KCF_P");

  CLI::App* run =
      app.add_subcommand("run", "Split, recommend and evaluate in memory");
  AddDataOptions(run, o);
  AddFoldOptions(run, o);
  AddOutOption(run, o);
  AddMapOption(run, o);
  const KernelFlags run_flags = AddMethodOptions(run, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (split->parsed()) return CmdSplit(o, out);
    if (recommend->parsed()) return CmdRecommend(o, recommend_flags, out, err);
    if (eval->parsed()) return CmdEval(o, out, err);
    if (analyze->parsed()) return CmdAnalyze(o, out, err);
    if (run->parsed()) return CmdRun(o, run_flags, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const EmptyDatasetError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  err << "error: no command given\n";
  return kExitUsage;
}

}  // namespace kcf
