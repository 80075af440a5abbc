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

#ifndef STAGESURV_LEARNERS_DECISION_TREE_H_
#define STAGESURV_LEARNERS_DECISION_TREE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "stagesurv/common/matrix.h"
#include "stagesurv/common/random.h"

namespace stagesurv::learners {

// Training matrix re-expressed as, per column, the sorted distinct values and
// each row's rank among them. Every split candidate is a midpoint between two
// consecutive distinct values, so working on ranks is exact.
class BinnedFeatures {
 public:
  explicit BinnedFeatures(const Matrix& x);

  size_t rows() const { return rows_; }
  size_t cols() const { return values_.size(); }
  size_t num_bins(size_t col) const { return values_[col].size(); }
  std::span<const uint32_t> bins(size_t col) const {
    return {bins_.data() + col * rows_, rows_};
  }
  double value(size_t col, uint32_t bin) const { return values_[col][bin]; }

  // Split point between bins `lower` < `upper`: their midpoint, or the lower
  // value when the midpoint rounds up to the upper one. A row goes left iff
  // its value <= threshold, iff its bin <= lower.
  double Threshold(size_t col, uint32_t lower, uint32_t upper) const;

 private:
  size_t rows_ = 0;
  std::vector<std::vector<double>> values_;
  std::vector<uint32_t> bins_;  // Column-major.
};

struct TreeNode {
  int32_t feature = -1;  // -1 marks a leaf.
  double threshold = 0.0;
  int32_t left = -1;
  int32_t right = -1;
  // Positive-class probability; the negative class gets 1 - value.
  double value = 0.5;
  double samples = 0;  // Training samples reaching the node (with multiplicity).
};

// Binary classification tree. Rows with x[feature] <= threshold go left.
class DecisionTree {
 public:
  DecisionTree() = default;
  explicit DecisionTree(std::vector<TreeNode> nodes);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  int depth() const { return depth_; }
  double PredictProba(std::span<const double> row) const;
  // Index of the leaf reached by `row`.
  int32_t Leaf(std::span<const double> row) const;

  nlohmann::json ToJson() const;
  static DecisionTree FromJson(const nlohmann::json& json);

  friend bool operator==(const DecisionTree& a, const DecisionTree& b);

 private:
  std::vector<TreeNode> nodes_;
  int depth_ = 0;
};

struct TreeGrowthParams {
  int max_depth = 3;
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  // Candidate features examined per node; 0 means all.
  int max_features = 0;
};

// Grows a CART tree by weighted Gini impurity. `weights[i]` is the full
// training weight of row i (class weight, sample weight and multiplicity
// combined); `counts[i]` its multiplicity (empty = 1 each). Rows with zero
// count are absent. When max_features limits the candidates they are drawn
// from `rng` per node. Ties go to the lowest feature index, then the lowest
// threshold.
DecisionTree GrowClassificationTree(const BinnedFeatures& data,
                                    std::span<const int> labels,
                                    std::span<const double> weights,
                                    std::span<const uint32_t> counts,
                                    const TreeGrowthParams& params, Rng* rng);

}  // namespace stagesurv::learners

#endif  // STAGESURV_LEARNERS_DECISION_TREE_H_
