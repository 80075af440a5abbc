/*
 * Copyright 2026 The Stagesurv Authors.
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


// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 only
// when every criterion passes.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fmt/format.h"
#include "json.hpp"
#include "oracles.h"
#include "stagesurv/attribution/lime.h"
#include "stagesurv/attribution/players.h"
#include "stagesurv/attribution/shapley.h"
#include "stagesurv/cohort/records.h"
#include "stagesurv/cohort/table.h"
#include "stagesurv/common/csv.h"
#include "stagesurv/learners/logistic.h"
#include "stagesurv/learners/model.h"
#include "stagesurv/learners/symgbdt.h"
#include "stagesurv/pipeline/config.h"
#include "stagesurv/pipeline/run.h"
#include "stagesurv/pipeline/synth.h"
#include "stagesurv/selection/evaluation.h"
#include "stagesurv/selection/metrics.h"
#include "stagesurv/stats/group_stats.h"

namespace {

namespace fs = std::filesystem;
using namespace stagesurv;
using cohort::Stage;
using cohort::SurvivalLabel;
using nlohmann::json;

// Tolerances and budgets.
constexpr double kAucTolerance = 1e-12;
constexpr double kEfficiencyTolerance = 1e-6;
constexpr double kSymmetryTolerance = 1e-9;
constexpr double kKernelTolerance = 1e-6;
constexpr double kPermutationTolerance = 1e-9;
constexpr double kGradientRelTolerance = 1e-5;
constexpr double kMinCvAuc = 0.85;
constexpr double kNullAucHalfWidth = 0.06;
constexpr double kMinLimeR2 = 0.99;
constexpr double kIgnoredWeightRatio = 0.05;
constexpr double kWelchP = 0.3409;
constexpr double kWelchPTolerance = 1e-3;
constexpr double kWelchOracleTolerance = 1e-8;
constexpr size_t kPresenceOnes = 5;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  const char* id;
  const char* name;
  double budget_seconds;  // 0: no time limit.
  std::function<Outcome()> run;
};

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path ScratchDir(std::string_view name) {
  const fs::path dir = fs::temp_directory_path() /
                       fmt::format("stagesurv_acceptance_{}_{}", name, ::getpid());
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> SplitLines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, '\t');) out.push_back(cell);
  return out;
}

// ---------------------------------------------------------------------------
// AC1. Expected labels written out by hand: months x status x cause.

Outcome LabelingOracle() {
  const int months[] = {0, 59, 60, 61, 120};
  const cohort::VitalStatus statuses[] = {cohort::VitalStatus::kAlive,
                                          cohort::VitalStatus::kDead};
  const std::string causes[] = {"Colorectal", "Heart Disease", "Alive"};
  // Rows: months; per row alive{cancer, other, alive}, dead{cancer, other,
  // alive}. S survived, N not survived, E excluded.
  const char* expected[] = {"NEE" "NEE", "NEE" "NEE", "SSS" "EEE", "SSS" "EEE",
                            "SSS" "EEE"};
  const std::vector<std::string> codes = {"Colorectal"};
  const cohort::FeatureSchema schema = cohort::FeatureSchema::Default("Colorectal");
  std::vector<std::string> names = schema.RequiredColumns();
  std::string csv_text = csv::FormatRow(names) + "\n";
  std::vector<char> want;

  size_t cases = 0, mismatches = 0;
  for (size_t m = 0; m < 5; ++m) {
    for (size_t s = 0; s < 2; ++s) {
      for (size_t c = 0; c < 3; ++c) {
        const char e = expected[m][s * 3 + c];
        const char got = [&] {
          switch (cohort::LabelSurvival(months[m], statuses[s], causes[c], codes)) {
            case SurvivalLabel::kSurvived:
              return 'S';
            case SurvivalLabel::kNotSurvived:
              return 'N';
            default:
              return 'E';
          }
        }();
        ++cases;
        mismatches += got == e ? 0 : 1;
        // Same case through CSV parsing and record labeling.
        csv::Row row(schema.size(), "1");
        row.push_back("Localized");
        row.push_back(s == 0 ? "Alive" : "Dead");
        row.push_back(std::to_string(months[m]));
        row.push_back(causes[c]);
        csv_text += csv::FormatRow(row) + "\n";
        want.push_back(e);
      }
    }
  }
  const auto parsed = cohort::ParseDataset(csv_text, schema);
  if (parsed.records.size() != want.size()) {
    return {false, "CSV route dropped rows"};
  }
  for (size_t i = 0; i < want.size(); ++i) {
    const SurvivalLabel label = cohort::LabelSurvival(parsed.records[i], schema);
    const char got = label == SurvivalLabel::kSurvived      ? 'S'
                     : label == SurvivalLabel::kNotSurvived ? 'N'
                                                            : 'E';
    ++cases;
    mismatches += got == want[i] ? 0 : 1;
  }
  return {mismatches == 0, fmt::format("{} mismatches over {} cases", mismatches, cases)};
}

// ---------------------------------------------------------------------------
// AC2

Outcome AucOracle() {
  std::mt19937_64 rng(20260101);
  double worst = 0.0;
  size_t with_ties = 0;
  for (int instance = 0; instance < 100; ++instance) {
    const size_t n = std::uniform_int_distribution<size_t>(2, 200)(rng);
    const double p = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    const int levels = std::uniform_int_distribution<int>(2, 30)(rng);
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    for (size_t i = 0; i < n; ++i) {
      labels[i] = std::bernoulli_distribution(p)(rng) ? 1 : 0;
      scores[i] = std::uniform_int_distribution<int>(0, levels)(rng) / double(levels) +
                  0.05 * labels[i];
    }
    labels[0] = 1;
    labels[1] = 0;
    const double fast = selection::RocAuc(scores, labels);
    const double brute = oracles::BruteForceAuc(scores, labels);
    const double area = selection::ComputeRoc(scores, labels).TrapezoidArea();
    worst = std::max({worst, std::abs(fast - brute), std::abs(area - brute)});
    std::set<double> distinct(scores.begin(), scores.end());
    with_ties += distinct.size() < n ? 1 : 0;
  }
  return {worst <= kAucTolerance,
          fmt::format("max |auc - pair count| = {:.2e} (tolerance {:.0e}); "
                      "{} of 100 instances had ties",
                      worst, kAucTolerance, with_ties)};
}

// ---------------------------------------------------------------------------
// AC3. Each game: a fitted model g over d-2 inputs, exposed as f over d
// players where players 0 and 1 enter only through their mean (symmetric)
// and player d-1 is ignored (dummy).

Outcome ShapleyAxioms() {
  std::mt19937_64 rng(33);
  std::normal_distribution<double> normal;
  double worst_efficiency = 0, worst_symmetry = 0, worst_kernel = 0,
         worst_permutation = 0;
  size_t dummy_nonzero = 0, permutation_checked = 0;
  const learners::Learner kinds[] = {
      learners::Learner::kLogisticRegression, learners::Learner::kRandomForest,
      learners::Learner::kAdaBoost, learners::Learner::kSymGbdt};
  for (int game = 0; game < 20; ++game) {
    const size_t d = 4 + static_cast<size_t>(game % 7);  // 4..10 players.
    const size_t m = d - 2;
    const size_t n = 200;
    Matrix u(n, m);
    std::vector<int> y(n);
    for (size_t i = 0; i < n; ++i) {
      double margin = 0.2;
      for (size_t j = 0; j < m; ++j) {
        u(i, j) = normal(rng);
        margin += (j % 2 == 0 ? 1.0 : -0.7) * u(i, j);
      }
      y[i] = std::bernoulli_distribution(1 / (1 + std::exp(-margin)))(rng) ? 1 : 0;
    }
    learners::ModelConfig config;
    config.learner = kinds[game % 4];
    config.seed = static_cast<uint64_t>(game);
    if (config.learner == learners::Learner::kRandomForest) {
      config.params = {{"n_estimators", int64_t{15}}, {"max_depth", int64_t{4}}};
    } else if (config.learner == learners::Learner::kAdaBoost) {
      config.params = {{"n_estimators", int64_t{15}}};
    } else if (config.learner == learners::Learner::kSymGbdt) {
      config.params = {{"iterations", int64_t{15}}, {"depth", int64_t{3}}};
    }
    const learners::TrainedModel g = learners::Fit(config, u, y);

    auto lift = [&](std::span<const double> inputs) {
      std::vector<double> z(d);
      z[0] = z[1] = inputs[0];
      for (size_t j = 1; j < m; ++j) z[j + 1] = inputs[j];
      z[d - 1] = normal(rng);
      return z;
    };
    const attribution::ModelFn f = [&g, m](std::span<const double> z) {
      std::vector<double> inputs(m);
      inputs[0] = (z[0] + z[1]) / 2;
      for (size_t j = 1; j < m; ++j) inputs[j] = z[j + 1];
      return g.PredictProba(inputs);
    };
    attribution::BackgroundSet background;
    background.rows = Matrix(12, d);
    std::vector<std::vector<double>> background_rows;
    for (size_t b = 0; b < 12; ++b) {
      const auto z = lift(u.row(10 + b));
      std::copy(z.begin(), z.end(), background.rows.row(b).begin());
      background.source_rows.push_back(10 + b);
      background_rows.push_back(z);
    }
    std::vector<std::string> names;
    for (size_t j = 0; j < d; ++j) names.push_back(fmt::format("x{}", j));
    const auto players = attribution::PlayerGroups::Singletons(names);

    const auto x = lift(u.row(static_cast<size_t>(game)));
    const attribution::Attribution exact =
        attribution::ExactShapley(f, x, background, players);
    double sum = 0;
    for (const double c : exact.contributions) sum += c;
    worst_efficiency = std::max(
        worst_efficiency, std::abs(sum - (exact.prediction - exact.baseline)));
    dummy_nonzero += exact.contributions[d - 1] == 0.0 ? 0 : 1;
    worst_symmetry = std::max(
        worst_symmetry, std::abs(exact.contributions[0] - exact.contributions[1]));

    const attribution::Attribution kernel = attribution::KernelShapley(
        f, x, background, players, size_t{1} << d, static_cast<uint64_t>(game));
    for (size_t j = 0; j < d; ++j) {
      worst_kernel = std::max(
          worst_kernel, std::abs(kernel.contributions[j] - exact.contributions[j]));
    }
    if (d <= 7) {
      const auto phi = oracles::PermutationShapley(f, x, background_rows);
      for (size_t j = 0; j < d; ++j) {
        worst_permutation =
            std::max(worst_permutation, std::abs(phi[j] - exact.contributions[j]));
      }
      ++permutation_checked;
    }
  }
  const bool pass = worst_efficiency <= kEfficiencyTolerance && dummy_nonzero == 0 &&
                    worst_symmetry <= kSymmetryTolerance &&
                    worst_kernel <= kKernelTolerance &&
                    worst_permutation <= kPermutationTolerance;
  return {pass,
          fmt::format("20 games: efficiency {:.1e}, dummy nonzero {}, symmetry "
                      "{:.1e}, kernel vs exact {:.1e}, exact vs permutation "
                      "oracle {:.1e} ({} games)",
                      worst_efficiency, dummy_nonzero, worst_symmetry,
                      worst_kernel, worst_permutation, permutation_checked)};
}

// ---------------------------------------------------------------------------
// AC4

double RelativeError(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

Outcome GradientChecks() {
  std::mt19937_64 rng(44);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(-3, 3);
  const size_t n = 80, d = 5;
  Matrix x(n, d);
  std::vector<int> y(n);
  std::vector<double> w(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < d; ++j) x(i, j) = normal(rng);
    y[i] = normal(rng) + x(i, 0) > 0 ? 1 : 0;
    w[i] = 0.5 + std::abs(normal(rng));
  }
  const learners::LogisticObjective objective(x, y, w, 0.7);
  const double h = 1e-6;
  double worst_logistic = 0.0;
  for (int point = 0; point < 20; ++point) {
    std::vector<double> p(d + 1);
    for (double& v : p) v = uniform(rng);
    const auto grad = objective.Gradient(p);
    for (size_t k = 0; k < p.size(); ++k) {
      auto up = p, down = p;
      up[k] += h;
      down[k] -= h;
      const double fd = (objective.Value(up) - objective.Value(down)) / (2 * h);
      worst_logistic = std::max(worst_logistic, RelativeError(grad[k], fd));
    }
  }
  double worst_gbdt = 0.0;
  for (int point = 0; point < 20; ++point) {
    const double f = uniform(rng);
    const int label = point % 2;
    const double weight = 0.5 + std::abs(normal(rng));
    const auto gh = learners::LoglossGradient(f, label, weight);
    const double fd_g = (learners::WeightedLogloss(f + h, label, weight) -
                         learners::WeightedLogloss(f - h, label, weight)) /
                        (2 * h);
    const double fd_h = (learners::LoglossGradient(f + h, label, weight).gradient -
                         learners::LoglossGradient(f - h, label, weight).gradient) /
                        (2 * h);
    worst_gbdt = std::max({worst_gbdt, RelativeError(gh.gradient, fd_g),
                           RelativeError(gh.hessian, fd_h)});
  }
  return {worst_logistic <= kGradientRelTolerance &&
              worst_gbdt <= kGradientRelTolerance,
          fmt::format("max relative error: logistic {:.1e}, SymGBDT gradient "
                      "and hessian {:.1e} (tolerance {:.0e})",
                      worst_logistic, worst_gbdt, kGradientRelTolerance)};
}

// ---------------------------------------------------------------------------
// AC5

Outcome SignalRecovery() {
  const fs::path out = ScratchDir("signal");
  json config_json = {
      {"seed", 2026},
      {"synth", {{"n_per_stage", 5000}}},
      {"learners", {"lr", "gbdt"}},
      {"grids",
       {{"lr", {{"C", {0.01, 0.1, 1.0}}, {"class_weight", {"balanced"}}}},
        {"gbdt",
         {{"iterations", {100, 200}},
          {"depth", {4, 6}},
          {"learning_rate", {0.05, 0.1}},
          {"class_weights", {"[1,1]"}}}}}},
      {"threads", 0},
      {"out", out.string()}};
  const pipeline::RunConfig config = pipeline::RunConfig::FromJson(config_json, "");
  const pipeline::SynthCohort truth =
      pipeline::GenerateSynth(*config.synth, *config.schema);
  const pipeline::RunResult result = pipeline::RunPipeline(config, pipeline::kStepAll);

  bool pass = !result.partial();
  std::vector<std::string> details;
  const std::set<std::string> planted = {"Age", "Tumor Size", "Extension"};
  const auto metric_lines = SplitLines(ReadFile(out / "metrics_table.csv"));
  for (const Stage stage : cohort::kAllStages) {
    const std::string slug(cohort::StageSlug(stage));
    std::vector<std::string> aucs;
    for (size_t i = 1; i < metric_lines.size(); ++i) {
      const auto cells = csv::Parse(metric_lines[0] + "\n" + metric_lines[i]).rows[0];
      if (cells[0] != cohort::StageName(stage)) continue;
      const double auc = std::stod(cells[6]);
      pass = pass && auc >= kMinCvAuc;
      aucs.push_back(fmt::format("{} {:.3f}", cells[1], auc));
    }
    pass = pass && aucs.size() == 2;
    const auto ranking = SplitLines(ReadFile(out / slug / "shap_ranking.tsv"));
    size_t found = 0;
    std::vector<std::string> top;
    for (size_t r = 1; r < ranking.size() && r <= 5; ++r) {
      const std::string feature = SplitTabs(ranking[r])[1];
      top.push_back(feature);
      found += planted.contains(feature) ? 1 : 0;
    }
    pass = pass && found == planted.size();
    details.push_back(fmt::format("{}: oracle {:.3f}, {}, planted in SHAP top 5: {}/3",
                          slug, pipeline::GeneratorOracleAuc(truth, stage),
                          fmt::join(aucs, ", "), found));
  }
  fs::remove_all(out);
  return {pass, fmt::format("{}", fmt::join(details, "; "))};
}

// ---------------------------------------------------------------------------
// AC6

Outcome NullCalibration() {
  const cohort::FeatureSchema schema = cohort::FeatureSchema::Default();
  const auto shared = std::make_shared<const cohort::FeatureSchema>(schema);
  const pipeline::SynthCohort synth =
      pipeline::GenerateSynth(pipeline::SynthSpec::Planted(1500, 66), schema);
  auto labeled = cohort::LabelRecords(cohort::ParseDataset(synth.csv, schema).records,
                                      schema);
  const auto split = cohort::SplitByStage(std::move(labeled.records), schema);

  selection::StagewiseOptions options;
  options.search.seed = 66;
  options.search.threads = 0;
  options.grids = {
      {learners::Learner::kLogisticRegression,
       selection::HyperGrid::FromJson(learners::Learner::kLogisticRegression,
                                      {{"C", {0.1, 1.0}}})},
      {learners::Learner::kRandomForest,
       selection::HyperGrid::FromJson(learners::Learner::kRandomForest,
                                      {{"n_estimators", {50}}, {"max_depth", {5, 8}}})},
      {learners::Learner::kAdaBoost,
       selection::HyperGrid::FromJson(learners::Learner::kAdaBoost,
                                      {{"n_estimators", {50}}})},
      {learners::Learner::kSymGbdt,
       selection::HyperGrid::FromJson(learners::Learner::kSymGbdt,
                                      {{"iterations", {50, 100}}, {"depth", {4}}})}};
  const std::vector<learners::Learner> all(learners::kAllLearners.begin(),
                                           learners::kAllLearners.end());
  std::mt19937_64 rng(606);
  bool pass = true;
  double lo = 1.0, hi = 0.0;
  for (const Stage stage : cohort::kAllStages) {
    const cohort::CohortTable table = cohort::Encode(split[stage], shared);
    std::vector<int> labels = table.labels();
    std::shuffle(labels.begin(), labels.end(), rng);
    const cohort::CohortTable shuffled(table.shared_schema(), table.columns(),
                                       table.rows(), labels, table.stages(),
                                       table.stats(), table.warnings());
    const auto eval = selection::EvaluateStage(shuffled, stage, all, options);
    for (const auto& result : eval.results) {
      const double auc = result.best().mean.auc;
      lo = std::min(lo, auc);
      hi = std::max(hi, auc);
      pass = pass && std::abs(auc - 0.5) <= kNullAucHalfWidth;
    }
  }
  return {pass, fmt::format("3 stages x 4 learners, selected CV AUC in [{:.3f}, "
                            "{:.3f}] (allowed 0.5 +/- {})",
                            lo, hi, kNullAucHalfWidth)};
}

// ---------------------------------------------------------------------------
// AC7

Outcome LimeFidelity() {
  const cohort::FeatureSchema schema = cohort::FeatureSchema::Default();
  const auto shared = std::make_shared<const cohort::FeatureSchema>(schema);
  const pipeline::SynthCohort synth =
      pipeline::GenerateSynth(pipeline::SynthSpec::Planted(800, 77), schema);
  auto labeled = cohort::LabelRecords(cohort::ParseDataset(synth.csv, schema).records,
                                      schema);
  const auto split = cohort::SplitByStage(std::move(labeled.records), schema);
  const cohort::CohortTable table = cohort::Encode(split[Stage::kRegional], shared);
  const auto players = attribution::PlayerGroups::FromTable(table);

  const std::map<std::string, double> truth = {{"Age", 0.9},
                                               {"Tumor Size", -0.6},
                                               {"Extension", 0.4},
                                               {"Grade", -0.3},
                                               {"Regional Nodes Positive", 0.5}};
  std::vector<double> w(table.num_columns(), 0.0);
  for (const auto& [name, beta] : truth) {
    for (const size_t c : table.ColumnsOf(schema.FeatureIndex(name))) w[c] = beta;
  }
  const attribution::ModelFn f = [&w](std::span<const double> z) {
    double s = 0.1;
    for (size_t c = 0; c < z.size(); ++c) s += w[c] * z[c];
    return s;
  };
  const auto stats = attribution::LimeStats::Fit(table.rows(), players);

  bool pass = true;
  double min_r2 = 1.0, worst_ignored = 0.0;
  size_t sign_errors = 0;
  for (size_t instance = 0; instance < 5; ++instance) {
    attribution::LimeOptions options;
    options.n_samples = 5000;
    options.top_k = 5;
    options.seed = 700 + instance;
    const auto top = attribution::LimeExplain(f, table.rows().row(instance),
                                              instance, stats, players, options);
    min_r2 = std::min(min_r2, top.fidelity);
    for (const auto& feature : top.top_features) {
      const auto it = truth.find(feature.name);
      if (it == truth.end() || (feature.weight > 0) != (it->second > 0)) {
        ++sign_errors;
      }
    }
    options.top_k = players.size();
    const auto full = attribution::LimeExplain(f, table.rows().row(instance),
                                               instance, stats, players, options);
    double max_weight = 0.0, max_ignored = 0.0;
    for (const auto& feature : full.top_features) {
      max_weight = std::max(max_weight, std::abs(feature.weight));
      if (!truth.contains(feature.name)) {
        max_ignored = std::max(max_ignored, std::abs(feature.weight));
      }
    }
    worst_ignored = std::max(worst_ignored, max_ignored / max_weight);
    min_r2 = std::min(min_r2, full.fidelity);
  }
  pass = min_r2 >= kMinLimeR2 && sign_errors == 0 &&
         worst_ignored < kIgnoredWeightRatio;
  return {pass, fmt::format("5 cases at n = 5000: min R^2 {:.4f}, sign errors "
                            "{}, max ignored/max weight {:.4f}",
                            min_r2, sign_errors, worst_ignored)};
}

// ---------------------------------------------------------------------------
// AC8

Outcome WelchOracle() {
  const double p = stats::StudentTTwoSidedP(1.0, 10.0);
  const double oracle = oracles::StudentTTwoSidedP(1.0, 10.0);
  bool pass = std::abs(p - kWelchP) <= kWelchPTolerance &&
              std::abs(oracle - kWelchP) <= kWelchPTolerance;
  double worst_oracle = std::abs(p - oracle);
  size_t violations = 0;
  const double dfs[] = {1, 2.5, 5, 10, 30, 100, 1000};
  for (const double df : dfs) {
    double previous = 2.0;
    for (double t = 0.0; t <= 8.0; t += 0.25) {
      const double pt = stats::StudentTTwoSidedP(t, df);
      if (pt != stats::StudentTTwoSidedP(-t, df)) ++violations;
      if (!(pt <= previous)) ++violations;
      if (t > 0 && !(pt < previous)) ++violations;
      previous = pt;
      worst_oracle = std::max(worst_oracle, std::abs(pt - oracles::StudentTTwoSidedP(t, df)));
      const double cdf = stats::StudentTCdf(t, df);
      if (std::abs(cdf + stats::StudentTCdf(-t, df) - 1.0) > 1e-12) ++violations;
    }
  }
  // Welch test itself: swapping samples negates t only.
  const std::vector<double> a = {5.1, 4.8, 6.0, 5.5, 5.9, 6.3};
  const std::vector<double> b = {4.2, 4.9, 4.4, 5.0, 4.1};
  const auto ab = stats::WelchTTest(a, b), ba = stats::WelchTTest(b, a);
  if (ab.t != -ba.t || ab.df != ba.df || ab.p != ba.p) ++violations;
  pass = pass && violations == 0 && worst_oracle <= kWelchOracleTolerance;
  return {pass, fmt::format("p(1, 10) = {:.6f}, oracle {:.6f}; max |p - oracle| on "
                            "grid {:.1e}; {} property violations",
                            p, oracle, worst_oracle, violations)};
}

// ---------------------------------------------------------------------------
// AC9 and AC10 share the CLI runs.

fs::path g_run_a;

int RunCli(const std::string& args) {
  const std::string command = fmt::format("{} {} > /dev/null 2>&1", STAGESURV_CLI, args);
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome Determinism() {
  const fs::path dir = ScratchDir("determinism");
  json config = {
      {"seed", 99},
      {"synth", {{"n_per_stage", 500}, {"excluded_fraction", 0.05},
                 {"incomplete_fraction", 0.02}}},
      {"grids",
       {{"lr", {{"C", {0.1, 1.0}}}},
        {"rf", {{"n_estimators", {30, 60}}, {"max_depth", {6}}}},
        {"ada", {{"n_estimators", {30, 60}}}},
        {"gbdt", {{"iterations", {30, 60}}, {"depth", {4}}}}}},
      {"explain", {{"summary_instances", 40}, {"lime_samples", 2000}}}};
  config["threads"] = 1;
  std::ofstream(dir / "serial.json") << config.dump(2);
  config["threads"] = 4;
  std::ofstream(dir / "concurrent.json") << config.dump(2);

  const int code_a = RunCli(fmt::format("run --config {} --out {}",
                                        (dir / "serial.json").string(),
                                        (dir / "a").string()));
  const int code_b = RunCli(fmt::format("run --config {} --out {}",
                                        (dir / "concurrent.json").string(),
                                        (dir / "b").string()));
  const int code_c = RunCli(fmt::format("run --config {} --out {}",
                                        (dir / "concurrent.json").string(),
                                        (dir / "c").string()));
  if (code_a != 0 || code_b != 0 || code_c != 0) {
    return {false, fmt::format("run exit codes {}, {}, {}", code_a, code_b, code_c)};
  }
  g_run_a = dir / "a";
  const json a = json::parse(ReadFile(dir / "a" / "manifest.json")).at("files");
  const json b = json::parse(ReadFile(dir / "b" / "manifest.json")).at("files");
  const json c = json::parse(ReadFile(dir / "c" / "manifest.json")).at("files");
  size_t differing = 0;
  for (const auto& [name, hash] : a.items()) {
    if (!b.contains(name) || b.at(name) != hash) ++differing;
    if (!c.contains(name) || c.at(name) != hash) ++differing;
  }
  const bool pass = differing == 0 && a.size() == b.size() && a.size() == c.size();
  return {pass, fmt::format("{} hashed files; threads 1 vs 4 vs 4: {} differing",
                            a.size(), differing)};
}

Outcome ReportShapes() {
  if (g_run_a.empty()) return {false, "needs the AC9 run directory"};
  std::vector<std::string> problems;

  const auto metrics = csv::Parse(ReadFile(g_run_a / "metrics_table.csv"));
  if (csv::FormatRow(metrics.header) != "stage,learner,acc,prec,rec,f1,auc,status") {
    problems.push_back("metrics header");
  }
  std::set<std::pair<std::string, std::string>> cells;
  for (const auto& row : metrics.rows) {
    cells.emplace(row[0], row[1]);
    for (size_t k = 2; k < 7; ++k) {
      const double v = std::stod(row[k]);
      if (!(v >= 0.0 && v <= 1.0)) problems.push_back("metric out of [0,1]");
    }
  }
  if (metrics.rows.size() != 12 || cells.size() != 12) {
    problems.push_back(fmt::format("{} metric rows", metrics.rows.size()));
  }
  const std::string text = ReadFile(g_run_a / "metrics_table.txt");
  if (text.rfind(std::string(selection::kMetricsTableTitle), 0) != 0) {
    problems.push_back("metrics title");
  }
  for (const Stage stage : cohort::kAllStages) {
    if (text.find(std::string(cohort::StageName(stage))) == std::string::npos) {
      problems.push_back("stage missing from metrics text");
    }
  }

  const auto group = csv::Parse(ReadFile(g_run_a / "group_stats_table.csv"));
  const std::string expected_header =
      "cancer_type,scope,group,n,Age,Nodes Exam.,Nodes Pos.,Tumor Size,p-Value";
  if (csv::FormatRow(group.header) != expected_header) {
    problems.push_back("statistics header");
  }
  const std::string scopes[] = {"All stages", "Localized", "Regional", "Distant"};
  const std::string groups[] = {"Survivors", "Non-survivors", "p-value"};
  if (group.rows.size() != 12) {
    problems.push_back(fmt::format("{} statistics rows", group.rows.size()));
  } else {
    for (size_t i = 0; i < 12; ++i) {
      if (group.rows[i][1] != scopes[i / 3] || group.rows[i][2] != groups[i % 3]) {
        problems.push_back(fmt::format("statistics row {}", i));
      }
    }
  }
  if (ReadFile(g_run_a / "group_stats_table.txt")
          .rfind(std::string(stats::kGroupStatsTitle), 0) != 0) {
    problems.push_back("statistics title");
  }

  for (const char* name : {"shap_presence.tsv", "lime_presence.tsv"}) {
    const auto lines = SplitLines(ReadFile(g_run_a / name));
    const size_t columns = lines.empty() ? 0 : SplitTabs(lines[0]).size() - 1;
    std::vector<size_t> ones(columns, 0);
    for (size_t r = 1; r < lines.size(); ++r) {
      const auto row = SplitTabs(lines[r]);
      for (size_t c = 0; c < columns; ++c) {
        if (row[c + 1] == "1") {
          ++ones[c];
        } else if (row[c + 1] != "0") {
          problems.push_back(fmt::format("{} cell '{}'", name, row[c + 1]));
        }
      }
    }
    if (columns != 3) problems.push_back(fmt::format("{} has {} columns", name, columns));
    for (const size_t count : ones) {
      if (count != kPresenceOnes) {
        problems.push_back(fmt::format("{} column with {} ones", name, count));
      }
    }
  }
  fs::remove_all(g_run_a.parent_path());
  if (problems.empty()) {
    return {true, "metrics 3 x 4 x 5 with title; statistics 4 blocks x 3 rows; "
                  "presence matrices 5 ones per column"};
  }
  return {false, fmt::format("{}", fmt::join(problems, "; "))};
}

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"AC1", "labeling oracle", 1.0, LabelingOracle},
      {"AC2", "AUC oracle", 5.0, AucOracle},
      {"AC3", "Shapley axioms", 60.0, ShapleyAxioms},
      {"AC4", "gradient checks", 5.0, GradientChecks},
      {"AC5", "signal recovery", 300.0, SignalRecovery},
      {"AC6", "null calibration", 0.0, NullCalibration},
      {"AC7", "LIME fidelity", 0.0, LimeFidelity},
      {"AC8", "Welch test oracle", 0.0, WelchOracle},
      {"AC9", "determinism", 0.0, Determinism},
      {"AC10", "report shape conformance", 0.0, ReportShapes},
  };
  int failed = 0;
  for (const Criterion& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = {false, fmt::format("threw: {}", e.what())};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    bool pass = outcome.pass;
    std::string timing = fmt::format("{:.2f} s", seconds);
    if (criterion.budget_seconds > 0) {
      timing += fmt::format(" of {:.0f} s budget", criterion.budget_seconds);
      pass = pass && seconds < criterion.budget_seconds;
    }
    failed += pass ? 0 : 1;
    fmt::print("{} {} {}: {} [{}]\n", pass ? "PASS" : "FAIL", criterion.id,
               criterion.name, outcome.detail, timing);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", std::size(criteria) - failed,
             std::size(criteria));
  return failed == 0 ? 0 : 1;
}
