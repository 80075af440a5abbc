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

#include "stagesurv/learners/symgbdt.h"

#include <algorithm>
#include <cmath>

#include "fmt/format.h"
#include "stagesurv/common/errors.h"
#include "stagesurv/learners/logistic.h"

namespace stagesurv::learners {
namespace {

double ClampedProbability(double raw_score) {
  return std::clamp(Sigmoid(raw_score), kProbabilityClamp,
                    1.0 - kProbabilityClamp);
}

double SplitScore(double g, double h, double l2) {
  const double denominator = h + l2;
  return denominator > 0 ? g * g / denominator : 0.0;
}

}  // namespace

size_t ObliviousTree::Leaf(std::span<const double> row) const {
  size_t leaf = 0;
  for (size_t level = 0; level < features.size(); ++level) {
    if (row[features[level]] > thresholds[level]) leaf |= size_t{1} << level;
  }
  return leaf;
}

double SymGbdtModel::RawScore(std::span<const double> row) const {
  double score = base_score;
  for (const ObliviousTree& tree : trees) {
    score += learning_rate * tree.Predict(row);
  }
  return score;
}

double SymGbdtModel::PredictProba(std::span<const double> row) const {
  return Sigmoid(RawScore(row));
}

nlohmann::json SymGbdtModel::ToJson() const {
  nlohmann::json tree_json = nlohmann::json::array();
  for (const ObliviousTree& tree : trees) {
    tree_json.push_back({{"features", tree.features},
                         {"thresholds", tree.thresholds},
                         {"leaf_values", tree.leaf_values}});
  }
  return {{"base_score", base_score},
          {"learning_rate", learning_rate},
          {"trees", std::move(tree_json)}};
}

SymGbdtModel SymGbdtModel::FromJson(const nlohmann::json& json) {
  SymGbdtModel model;
  model.base_score = json.at("base_score").get<double>();
  model.learning_rate = json.at("learning_rate").get<double>();
  for (const auto& t : json.at("trees")) {
    ObliviousTree tree{t.at("features").get<std::vector<int32_t>>(),
                       t.at("thresholds").get<std::vector<double>>(),
                       t.at("leaf_values").get<std::vector<double>>()};
    if (tree.thresholds.size() != tree.features.size() ||
        tree.leaf_values.size() != (size_t{1} << tree.features.size())) {
      throw DataError("malformed oblivious tree");
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

double WeightedLogloss(double raw_score, int label, double weight) {
  const double p = ClampedProbability(raw_score);
  return -weight * (label == 1 ? std::log(p) : std::log(1.0 - p));
}

GradientPair LoglossGradient(double raw_score, int label, double weight) {
  const double p = ClampedProbability(raw_score);
  return {weight * (p - label), weight * p * (1.0 - p)};
}

double NewtonLeafValue(double sum_gradient, double sum_hessian, double l2) {
  const double denominator = sum_hessian + l2;
  return denominator > 0 ? -sum_gradient / denominator : 0.0;
}

double InitialRawScore(std::span<const int> labels,
                       std::span<const double> weights) {
  double positive = 0, total = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    total += weights[i];
    if (labels[i] == 1) positive += weights[i];
  }
  const double rate = std::clamp(total > 0 ? positive / total : 0.5,
                                 kBaseRateClamp, 1.0 - kBaseRateClamp);
  return std::log(rate / (1.0 - rate));
}

ObliviousTree GrowObliviousTree(const BinnedFeatures& data,
                                std::span<const double> gradients,
                                std::span<const double> hessians, int depth,
                                double l2) {
  const size_t n = data.rows();
  std::vector<uint32_t> leaf_of(n, 0);
  std::vector<double> leaf_g(1, 0.0), leaf_h(1, 0.0);
  for (size_t i = 0; i < n; ++i) {
    leaf_g[0] += gradients[i];
    leaf_h[0] += hessians[i];
  }

  ObliviousTree tree;
  std::vector<double> hist_g, hist_h, left_g, left_h;
  for (int level = 0; level < depth; ++level) {
    const size_t leaves = leaf_g.size();
    double current = 0;
    for (size_t l = 0; l < leaves; ++l) {
      current += SplitScore(leaf_g[l], leaf_h[l], l2);
    }
    double best_score = current;
    int32_t best_feature = -1;
    uint32_t best_bin = 0;

    for (size_t f = 0; f < data.cols(); ++f) {
      const size_t num_bins = data.num_bins(f);
      if (num_bins < 2) continue;
      const auto bins = data.bins(f);
      // Histogram laid out [bin][leaf].
      hist_g.assign(num_bins * leaves, 0.0);
      hist_h.assign(num_bins * leaves, 0.0);
      for (size_t i = 0; i < n; ++i) {
        const size_t slot = bins[i] * leaves + leaf_of[i];
        hist_g[slot] += gradients[i];
        hist_h[slot] += hessians[i];
      }
      left_g.assign(leaves, 0.0);
      left_h.assign(leaves, 0.0);
      for (uint32_t b = 0; b + 1 < num_bins; ++b) {
        double score = 0;
        const double* hg = hist_g.data() + b * leaves;
        const double* hh = hist_h.data() + b * leaves;
        for (size_t l = 0; l < leaves; ++l) {
          left_g[l] += hg[l];
          left_h[l] += hh[l];
          score += SplitScore(left_g[l], left_h[l], l2) +
                   SplitScore(leaf_g[l] - left_g[l], leaf_h[l] - left_h[l], l2);
        }
        if (score > best_score + 1e-12 * std::abs(best_score)) {
          best_score = score;
          best_feature = static_cast<int32_t>(f);
          best_bin = b;
        }
      }
    }
    if (best_feature < 0) break;

    tree.features.push_back(best_feature);
    tree.thresholds.push_back(data.Threshold(best_feature, best_bin, best_bin + 1));
    const auto bins = data.bins(best_feature);
    std::vector<double> next_g(2 * leaves, 0.0), next_h(2 * leaves, 0.0);
    for (size_t i = 0; i < n; ++i) {
      if (bins[i] > best_bin) leaf_of[i] |= uint32_t{1} << level;
      next_g[leaf_of[i]] += gradients[i];
      next_h[leaf_of[i]] += hessians[i];
    }
    leaf_g.swap(next_g);
    leaf_h.swap(next_h);
  }

  tree.leaf_values.resize(leaf_g.size());
  for (size_t l = 0; l < leaf_g.size(); ++l) {
    tree.leaf_values[l] = NewtonLeafValue(leaf_g[l], leaf_h[l], l2);
  }
  return tree;
}

SymGbdtModel FitSymGbdt(const Matrix& x, std::span<const int> labels,
                        std::span<const double> sample_weights,
                        const SymGbdtParams& params) {
  const size_t n = x.rows();
  if (n == 0) throw FitError("gradient boosting needs at least one sample");
  if (labels.size() != n) throw DimensionError("labels and rows differ");
  if (params.iterations < 0) throw ConfigError("iterations must be >= 0");
  if (params.depth < 1 || params.depth > 16) {
    throw ConfigError(fmt::format("depth must be in [1, 16], got {}", params.depth));
  }
  if (!(params.learning_rate >= 0)) {
    throw ConfigError("learning_rate must be non-negative");
  }
  if (!(params.l2_leaf_reg >= 0)) throw ConfigError("l2_leaf_reg must be >= 0");

  const ClassWeights class_weights =
      ComputeClassWeights(labels, params.class_weights);
  const std::vector<double> weights =
      CombineWeights(labels, class_weights, sample_weights);

  SymGbdtModel model;
  model.learning_rate = params.learning_rate;
  model.base_score = InitialRawScore(labels, weights);

  size_t positives = 0;
  for (const int y : labels) positives += y == 1 ? 1 : 0;
  if (positives == 0 || positives == n) return model;

  const BinnedFeatures data(x);
  std::vector<double> scores(n, model.base_score);
  std::vector<double> gradients(n), hessians(n);
  model.trees.reserve(params.iterations);
  for (int it = 0; it < params.iterations; ++it) {
    for (size_t i = 0; i < n; ++i) {
      const GradientPair gh = LoglossGradient(scores[i], labels[i], weights[i]);
      gradients[i] = gh.gradient;
      hessians[i] = gh.hessian;
    }
    ObliviousTree tree =
        GrowObliviousTree(data, gradients, hessians, params.depth,
                          params.l2_leaf_reg);
    for (size_t i = 0; i < n; ++i) {
      scores[i] += model.learning_rate * tree.Predict(x.row(i));
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

}  // namespace stagesurv::learners
