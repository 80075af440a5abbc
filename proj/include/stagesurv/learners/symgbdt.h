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

#ifndef STAGESURV_LEARNERS_SYMGBDT_H_
#define STAGESURV_LEARNERS_SYMGBDT_H_

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "stagesurv/common/matrix.h"
#include "stagesurv/learners/class_weights.h"
#include "stagesurv/learners/decision_tree.h"

namespace stagesurv::learners {

// Oblivious tree: level l tests x[features[l]] > thresholds[l] and sets bit l
// of the leaf index, so all nodes of a level share one split.
struct ObliviousTree {
  std::vector<int32_t> features;
  std::vector<double> thresholds;
  std::vector<double> leaf_values;  // 2^depth entries.

  int depth() const { return static_cast<int>(features.size()); }
  size_t Leaf(std::span<const double> row) const;
  double Predict(std::span<const double> row) const {
    return leaf_values[Leaf(row)];
  }

  friend bool operator==(const ObliviousTree&, const ObliviousTree&) = default;
};

struct SymGbdtParams {
  int iterations = 100;
  int depth = 6;
  double learning_rate = 0.1;
  double l2_leaf_reg = 3.0;
  ClassWeightSpec class_weights;  // Manual pairs, e.g. "[1,3]".
};

// Raw score F = base_score + sum_t learning_rate * tree_t(x); probability
// logistic(F).
struct SymGbdtModel {
  double base_score = 0.0;
  double learning_rate = 0.1;
  std::vector<ObliviousTree> trees;

  double RawScore(std::span<const double> row) const;
  double PredictProba(std::span<const double> row) const;

  nlohmann::json ToJson() const;
  static SymGbdtModel FromJson(const nlohmann::json& json);
  friend bool operator==(const SymGbdtModel&, const SymGbdtModel&) = default;
};

// Probabilities are clamped to [kProbabilityClamp, 1 - kProbabilityClamp]
// inside the loss and its derivatives.
inline constexpr double kProbabilityClamp = 1e-12;
// Clamp on the weighted positive rate behind the initial score.
inline constexpr double kBaseRateClamp = 1e-6;

// w * logloss(label, logistic(raw_score)).
double WeightedLogloss(double raw_score, int label, double weight);

struct GradientPair {
  double gradient;  // w (p - y)
  double hessian;   // w p (1 - p)
};
GradientPair LoglossGradient(double raw_score, int label, double weight);

// Newton step -G / (H + l2); 0 when the denominator vanishes.
double NewtonLeafValue(double sum_gradient, double sum_hessian, double l2);

// log(p / (1 - p)) of the weighted positive rate, clamped.
double InitialRawScore(std::span<const int> labels,
                       std::span<const double> weights);

// Grows one oblivious tree of at most `depth` levels maximizing
// sum_leaves G^2 / (H + l2). Growth stops early when no split improves it.
ObliviousTree GrowObliviousTree(const BinnedFeatures& data,
                                std::span<const double> gradients,
                                std::span<const double> hessians, int depth,
                                double l2);

// Single-class input yields a constant model at the clamped log-odds.
SymGbdtModel FitSymGbdt(const Matrix& x, std::span<const int> labels,
                        std::span<const double> sample_weights,
                        const SymGbdtParams& params);

}  // namespace stagesurv::learners

#endif  // STAGESURV_LEARNERS_SYMGBDT_H_
