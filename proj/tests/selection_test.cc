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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"
#include "stagesurv/common/errors.h"
#include "stagesurv/learners/model.h"
#include "stagesurv/selection/evaluation.h"
#include "stagesurv/selection/folds.h"
#include "stagesurv/selection/grid_search.h"
#include "stagesurv/selection/metrics.h"

namespace stagesurv::selection {
namespace {

using learners::Learner;
using learners::ParamValue;

TEST(FoldsTest, ExactDivisibility) {
  const std::vector<int> labels = {1, 1, 1, 1, 1, 0, 0, 0, 0, 0};
  const FoldPlan plan = StratifiedKFold(labels, 5, 3);
  for (int f = 0; f < 5; ++f) {
    const auto test = plan.TestIndices(f);
    ASSERT_EQ(test.size(), 2u);
    EXPECT_NE(labels[test[0]], labels[test[1]]);
  }
}

TEST(FoldsTest, RoundRobinCounts) {
  const std::vector<int> labels = {1, 1, 1, 1, 1, 1, 1, 0, 0, 0};
  const FoldPlan plan = StratifiedKFold(labels, 3, 4);
  for (int f = 0; f < 3; ++f) {
    int pos = 0, neg = 0;
    for (const size_t i : plan.TestIndices(f)) (labels[i] ? pos : neg)++;
    EXPECT_TRUE(pos == 2 || pos == 3);
    EXPECT_EQ(neg, 1);
  }
  EXPECT_EQ(StratifiedKFold(labels, 3, 4).assignments, plan.assignments);
}

TEST(FoldsTest, ProportionsAndPartition) {
  std::mt19937_64 rng(5);
  std::vector<int> labels(503);
  for (int& y : labels) y = rng() % 10 < 3;
  const FoldPlan plan = StratifiedKFold(labels, 5, 1);
  double global = 0;
  for (const int y : labels) global += y;
  global /= labels.size();
  size_t total = 0;
  for (int f = 0; f < 5; ++f) {
    const auto test = plan.TestIndices(f);
    total += test.size();
    double pos = 0;
    for (const size_t i : test) pos += labels[i];
    EXPECT_LT(std::abs(pos / test.size() - global), 1.0 / test.size());
    EXPECT_EQ(plan.TrainIndices(f).size() + test.size(), labels.size());
  }
  EXPECT_EQ(total, labels.size());
}

TEST(FoldsTest, TooFewMembersNamesTheClass) {
  const std::vector<int> labels = {1, 1, 1, 1, 1, 0, 0};
  try {
    StratifiedKFold(labels, 3, 0);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("class 0"), std::string::npos);
  }
}

TEST(MetricsTest, ConfusionCounts) {
  const std::vector<double> scores = {0.9, 0.7, 0.1};
  const std::vector<int> labels = {1, 0, 0};
  const MetricsRow m = ThresholdedMetrics(scores, labels);
  EXPECT_DOUBLE_EQ(m.accuracy, 2.0 / 3);
  EXPECT_DOUBLE_EQ(m.precision, 0.5);
  EXPECT_DOUBLE_EQ(m.recall, 1.0);
  EXPECT_DOUBLE_EQ(m.f1, 2.0 / 3);
}

TEST(MetricsTest, DegenerateFlags) {
  const std::vector<double> scores = {0.1, 0.2, 0.3};
  const std::vector<int> labels = {1, 0, 1};
  const MetricsRow m = ThresholdedMetrics(scores, labels);
  EXPECT_EQ(m.recall, 0.0);
  EXPECT_TRUE(m.degenerate_precision);
  EXPECT_FALSE(m.degenerate_recall);
  const std::vector<int> negatives = {0, 0, 0};
  EXPECT_TRUE(ThresholdedMetrics(scores, negatives).degenerate_recall);
}

TEST(MetricsTest, RandomInstancesMatchConfusionOracle) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const size_t n = 5 + rng() % 50;
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    for (size_t i = 0; i < n; ++i) {
      scores[i] = (rng() % 11) / 10.0;
      labels[i] = rng() % 2;
    }
    int tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < n; ++i) {
      const bool p = scores[i] >= 0.5;
      tp += p && labels[i];
      fp += p && !labels[i];
      fn += !p && labels[i];
    }
    const MetricsRow m = ThresholdedMetrics(scores, labels);
    EXPECT_DOUBLE_EQ(m.accuracy, 1.0 - static_cast<double>(fp + fn) / n);
    if (tp + fp > 0) {
      EXPECT_DOUBLE_EQ(m.precision, static_cast<double>(tp) / (tp + fp));
    }
    if (tp > 0) {
      EXPECT_NEAR(m.f1, 2.0 * tp / (2.0 * tp + fp + fn), 1e-15);
    }
  }
}

TEST(RocTest, WorkedExamples) {
  const std::vector<double> s = {0.1, 0.4, 0.35, 0.8};
  const std::vector<int> y = {0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(RocAuc(s, y), 0.75);
  const std::vector<double> same = {0.3, 0.3, 0.3, 0.3};
  EXPECT_DOUBLE_EQ(RocAuc(same, y), 0.5);
  const std::vector<double> separated = {0.1, 0.2, 0.8, 0.9};
  EXPECT_DOUBLE_EQ(RocAuc(separated, y), 1.0);
  const std::vector<int> one_class = {1, 1, 1, 1};
  EXPECT_THROW(RocAuc(s, one_class), DataError);
}

TEST(RocTest, MatchesBruteForceWithTies) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const size_t n = 2 + rng() % 199;
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    for (size_t i = 0; i < n; ++i) {
      scores[i] = (rng() % 20) / 19.0;
      labels[i] = rng() % 2;
    }
    labels[0] = 0;
    labels[1] = 1;
    const RocCurve curve = ComputeRoc(scores, labels);
    EXPECT_NEAR(curve.auc, oracles::BruteForceAuc(scores, labels), 1e-12);
    EXPECT_NEAR(curve.TrapezoidArea(), curve.auc, 1e-12);
    EXPECT_EQ(curve.points.front(), (RocPoint{0, 0}));
    EXPECT_EQ(curve.points.back(), (RocPoint{1, 1}));
    // Strictly monotone transform leaves AUC unchanged.
    std::vector<double> transformed(n);
    for (size_t i = 0; i < n; ++i) transformed[i] = std::exp(3 * scores[i]) - 7;
    EXPECT_EQ(RocAuc(transformed, labels), curve.auc);
  }
}

TEST(RocTest, AverageOfIdenticalCurves) {
  const std::vector<double> s = {0.1, 0.4, 0.35, 0.8};
  const std::vector<int> y = {0, 0, 1, 1};
  const RocCurve c = ComputeRoc(s, y);
  const std::vector<RocCurve> curves = {c, c};
  const auto avg = AverageRoc(curves, 11);
  ASSERT_EQ(avg.size(), 12u);
  EXPECT_EQ(avg[0], (RocPoint{0, 0}));
  EXPECT_DOUBLE_EQ(avg[1].tpr, 0.5);  // Top of the vertical step at fpr 0.
  EXPECT_DOUBLE_EQ(avg.back().tpr, 1.0);
}

TEST(GridTest, DefaultSizesAndOrder) {
  EXPECT_EQ(HyperGrid::Default(Learner::kLogisticRegression).size(), 10u);
  EXPECT_EQ(HyperGrid::Default(Learner::kAdaBoost).size(), 18u);
  EXPECT_EQ(HyperGrid::Default(Learner::kRandomForest).size(), 72u);
  EXPECT_EQ(HyperGrid::Default(Learner::kSymGbdt).size(), 108u);
  const auto configs = HyperGrid::Default(Learner::kLogisticRegression).Expand(1);
  EXPECT_EQ(configs[0].Describe(), "C=0.001 class_weight=none");
  EXPECT_EQ(configs[1].Describe(), "C=0.001 class_weight=balanced");
  EXPECT_EQ(configs[9].Describe(), "C=10 class_weight=balanced");
}

TEST(GridTest, JsonForms) {
  const auto listed = HyperGrid::FromJson(
      Learner::kSymGbdt,
      nlohmann::json::parse(R"([{"name":"depth","values":[3]},
                                {"name":"class_weights","values":[[1,3]]}])"));
  EXPECT_EQ(listed.Expand(0)[0].Describe(), "depth=3 class_weights=[1,3]");
  EXPECT_EQ(HyperGrid::FromJson(Learner::kSymGbdt, listed.ToJson()).ToJson(),
            listed.ToJson());
  EXPECT_THROW(HyperGrid::FromJson(Learner::kSymGbdt,
                                   nlohmann::json::parse(R"({"depth":[]})")),
               ConfigError);
}

struct Data {
  Matrix x;
  std::vector<int> y;
};

Data Signal(size_t n, double strength, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;
  Data d{Matrix(n, 4), std::vector<int>(n)};
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < 4; ++j) d.x(i, j) = normal(rng) * (j + 1) + j;
    const double z = strength * (d.x(i, 0) - d.x(i, 1) / 2);
    d.y[i] = uniform(rng) < 1 / (1 + std::exp(-z));
  }
  return d;
}

TEST(GridSearchTest, SingleConfigAndStrictDominance) {
  const Data d = Signal(300, 2.0, 8);
  const FoldPlan plan = StratifiedKFold(d.y, 5, 2);
  const std::vector<size_t> numeric = {0, 1, 2, 3};
  const HyperGrid one(Learner::kLogisticRegression, {{"C", {ParamValue{1.0}}}});
  const GridResult r1 = GridSearch(d.x, d.y, numeric, one, plan, {});
  EXPECT_EQ(r1.configs.size(), 1u);
  EXPECT_EQ(r1.best_index, 0u);
  EXPECT_EQ(r1.best_fold_curves.size(), 5u);

  // Depth-1 forests on a two-feature signal are dominated by depth 4.
  const HyperGrid two(Learner::kSymGbdt,
                      {{"iterations", {ParamValue{int64_t{1}}}},
                       {"depth", {ParamValue{int64_t{1}}, ParamValue{int64_t{4}}}},
                       {"learning_rate", {ParamValue{0.0}, ParamValue{0.3}}}});
  const GridResult r2 = GridSearch(d.x, d.y, numeric, two, plan, {});
  EXPECT_EQ(r2.configs.size(), 4u);
  EXPECT_DOUBLE_EQ(r2.configs[0].mean.auc, 0.5);
  EXPECT_EQ(r2.best().config.Describe(), "iterations=1 depth=4 learning_rate=0.3");
}

TEST(GridSearchTest, TieGoesToFirstInGridOrder) {
  const Data d = Signal(200, 1.0, 9);
  const FoldPlan plan = StratifiedKFold(d.y, 4, 3);
  const HyperGrid grid(Learner::kSymGbdt,
                       {{"learning_rate", {ParamValue{0.0}, ParamValue{0.0}}},
                        {"l2_leaf_reg", {ParamValue{1.0}, ParamValue{2.0}}}});
  const GridResult r = GridSearch(d.x, d.y, {}, grid, plan, {});
  EXPECT_EQ(r.best_index, 0u);
}

TEST(GridSearchTest, FailedConfigsAreExcluded) {
  const Data d = Signal(200, 1.0, 10);
  const FoldPlan plan = StratifiedKFold(d.y, 4, 3);
  const HyperGrid grid(Learner::kLogisticRegression,
                       {{"C", {ParamValue{-1.0}, ParamValue{1.0}}}});
  const GridResult r = GridSearch(d.x, d.y, {}, grid, plan, {});
  EXPECT_TRUE(r.configs[0].failed);
  EXPECT_FALSE(r.configs[0].error.empty());
  EXPECT_EQ(r.best_index, 1u);
  const HyperGrid bad(Learner::kLogisticRegression, {{"C", {ParamValue{-1.0}}}});
  EXPECT_THROW(GridSearch(d.x, d.y, {}, bad, plan, {}), FitError);
}

TEST(GridSearchTest, PrefixReuseAndThreadsDoNotChangeResults) {
  const Data d = Signal(250, 1.5, 11);
  const FoldPlan plan = StratifiedKFold(d.y, 5, 4);
  const std::vector<size_t> numeric = {0, 1, 2, 3};
  for (const Learner learner :
       {Learner::kRandomForest, Learner::kAdaBoost, Learner::kSymGbdt}) {
    const std::string size = std::string(learners::EnsembleSizeParam(learner));
    const HyperGrid grid(learner, {{size, {ParamValue{int64_t{3}}, ParamValue{int64_t{8}}}}});
    GridSearchOptions plain;
    plain.reuse_prefixes = false;
    GridSearchOptions fast;
    fast.threads = 3;
    const GridResult a = GridSearch(d.x, d.y, numeric, grid, plan, plain);
    const GridResult b = GridSearch(d.x, d.y, numeric, grid, plan, fast);
    EXPECT_EQ(GridResultsCsv(std::span(&a, 1)), GridResultsCsv(std::span(&b, 1)));
  }
}

TEST(GridSearchTest, ShuffledLabelsGiveChanceAuc) {
  Data d = Signal(1000, 2.0, 12);
  std::mt19937_64 rng(13);
  std::shuffle(d.y.begin(), d.y.end(), rng);
  const FoldPlan plan = StratifiedKFold(d.y, 5, 5);
  const HyperGrid grid(Learner::kLogisticRegression, {{"C", {ParamValue{1.0}}}});
  const GridResult r = GridSearch(d.x, d.y, {}, grid, plan, {});
  EXPECT_NEAR(r.best().mean.auc, 0.5, 0.06);
}

TEST(MetricsTableTest, Layout) {
  StageEvaluation stage;
  stage.stage = cohort::Stage::kRegional;
  stage.plan.k = 5;
  GridResult r;
  r.learner = Learner::kSymGbdt;
  r.configs.push_back({});
  r.configs[0].mean.auc = 0.9;
  stage.results.push_back(r);
  StageEvaluation skipped;
  skipped.stage = cohort::Stage::kDistant;
  skipped.skipped = true;
  skipped.skip_reason = "too small";
  const std::vector<StageEvaluation> stages = {stage, skipped};
  const std::vector<Learner> learners(learners::kAllLearners.begin(),
                                      learners::kAllLearners.end());
  const MetricsTable table = BuildMetricsTable(stages, learners);
  const std::string csv = table.ToCsv();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
  EXPECT_NE(csv.find("Regional,SymGBDT,0.000000,0.000000,0.000000,0.000000,0.900000,ok"),
            std::string::npos);
  const std::string text = table.ToText();
  EXPECT_NE(text.find(kMetricsTableTitle), std::string::npos);
  EXPECT_NE(text.find("skipped: too small"), std::string::npos);
}

}  // namespace
}  // namespace stagesurv::selection
