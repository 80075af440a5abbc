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

#include "stagesurv/learners/decision_tree.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fmt/format.h"
#include "stagesurv/common/errors.h"

namespace stagesurv::learners {

BinnedFeatures::BinnedFeatures(const Matrix& x)
    : rows_(x.rows()), values_(x.cols()), bins_(x.rows() * x.cols()) {
  std::vector<double> column;
  for (size_t c = 0; c < x.cols(); ++c) {
    column = x.column(c);
    for (const double v : column) {
      if (!std::isfinite(v)) {
        throw FitError(fmt::format("non-finite value in feature column {}", c));
      }
    }
    std::vector<double> distinct = column;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());
    uint32_t* out = bins_.data() + c * rows_;
    for (size_t r = 0; r < rows_; ++r) {
      out[r] = static_cast<uint32_t>(
          std::lower_bound(distinct.begin(), distinct.end(), column[r]) -
          distinct.begin());
    }
    values_[c] = std::move(distinct);
  }
}

double BinnedFeatures::Threshold(size_t col, uint32_t lower,
                                 uint32_t upper) const {
  const double a = values_[col][lower];
  const double b = values_[col][upper];
  const double mid = a + (b - a) / 2;
  return mid < b ? mid : a;
}

DecisionTree::DecisionTree(std::vector<TreeNode> nodes)
    : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw FitError("decision tree without nodes");
  // Depth by walking from the root; children always follow their parent.
  std::vector<int> level(nodes_.size(), 0);
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& node = nodes_[i];
    if (node.feature < 0) continue;
    for (const int32_t child : {node.left, node.right}) {
      if (child <= static_cast<int32_t>(i) ||
          child >= static_cast<int32_t>(nodes_.size())) {
        throw FitError("decision tree has an invalid child index");
      }
      level[child] = level[i] + 1;
      depth_ = std::max(depth_, level[child]);
    }
  }
}

int32_t DecisionTree::Leaf(std::span<const double> row) const {
  int32_t index = 0;
  while (nodes_[index].feature >= 0) {
    const TreeNode& node = nodes_[index];
    index = row[node.feature] <= node.threshold ? node.left : node.right;
  }
  return index;
}

double DecisionTree::PredictProba(std::span<const double> row) const {
  return nodes_[Leaf(row)].value;
}

nlohmann::json DecisionTree::ToJson() const {
  nlohmann::json out;
  std::vector<int32_t> feature, left, right;
  std::vector<double> threshold, value, samples;
  for (const TreeNode& node : nodes_) {
    feature.push_back(node.feature);
    threshold.push_back(node.threshold);
    left.push_back(node.left);
    right.push_back(node.right);
    value.push_back(node.value);
    samples.push_back(node.samples);
  }
  out["feature"] = feature;
  out["threshold"] = threshold;
  out["left"] = left;
  out["right"] = right;
  out["value"] = value;
  out["samples"] = samples;
  return out;
}

DecisionTree DecisionTree::FromJson(const nlohmann::json& json) {
  const auto feature = json.at("feature").get<std::vector<int32_t>>();
  const auto threshold = json.at("threshold").get<std::vector<double>>();
  const auto left = json.at("left").get<std::vector<int32_t>>();
  const auto right = json.at("right").get<std::vector<int32_t>>();
  const auto value = json.at("value").get<std::vector<double>>();
  const auto samples = json.at("samples").get<std::vector<double>>();
  const size_t n = feature.size();
  if (threshold.size() != n || left.size() != n || right.size() != n ||
      value.size() != n || samples.size() != n) {
    throw DataError("tree arrays differ in length");
  }
  std::vector<TreeNode> nodes(n);
  for (size_t i = 0; i < n; ++i) {
    nodes[i] = {feature[i], threshold[i], left[i], right[i], value[i],
                samples[i]};
  }
  return DecisionTree(std::move(nodes));
}

bool operator==(const DecisionTree& a, const DecisionTree& b) {
  if (a.nodes_.size() != b.nodes_.size()) return false;
  for (size_t i = 0; i < a.nodes_.size(); ++i) {
    const TreeNode& x = a.nodes_[i];
    const TreeNode& y = b.nodes_[i];
    if (x.feature != y.feature || x.threshold != y.threshold ||
        x.left != y.left || x.right != y.right || x.value != y.value ||
        x.samples != y.samples) {
      return false;
    }
  }
  return true;
}

namespace {

// Sum of squared class weights over total weight; maximizing the children's
// sum is equivalent to maximizing the weighted Gini decrease.
double GiniScore(double w0, double w1) {
  const double w = w0 + w1;
  return w > 0 ? (w0 * w0 + w1 * w1) / w : 0.0;
}

struct BinStats {
  uint32_t bin;
  double w0;
  double w1;
  double count;
};

class TreeGrower {
 public:
  TreeGrower(const BinnedFeatures& data, std::span<const int> labels,
             std::span<const double> weights, std::span<const uint32_t> counts,
             const TreeGrowthParams& params, Rng* rng)
      : data_(data),
        labels_(labels),
        weights_(weights),
        counts_(counts),
        params_(params),
        rng_(rng) {}

  DecisionTree Grow() {
    std::vector<uint32_t> rows;
    for (uint32_t r = 0; r < data_.rows(); ++r) {
      if (Count(r) > 0) rows.push_back(r);
    }
    Build(rows, 0);
    return DecisionTree(std::move(nodes_));
  }

 private:
  struct Split {
    int32_t feature = -1;
    uint32_t lower_bin = 0;
    double threshold = 0.0;
  };

  double Count(uint32_t r) const {
    return counts_.empty() ? 1.0 : static_cast<double>(counts_[r]);
  }

  int32_t Build(std::vector<uint32_t>& rows, int depth) {
    double w0 = 0, w1 = 0, count = 0;
    for (const uint32_t r : rows) {
      (labels_[r] == 1 ? w1 : w0) += weights_[r];
      count += Count(r);
    }
    const int32_t index = static_cast<int32_t>(nodes_.size());
    TreeNode node;
    node.value = (w0 + w1) > 0 ? w1 / (w0 + w1) : 0.5;
    node.samples = count;
    nodes_.push_back(node);

    if (depth >= params_.max_depth || count < params_.min_samples_split ||
        count < 2.0 * params_.min_samples_leaf || !(w0 > 0) || !(w1 > 0)) {
      return index;
    }
    const Split split = FindSplit(rows, w0, w1);
    if (split.feature < 0) return index;

    const auto bins = data_.bins(split.feature);
    std::vector<uint32_t> left, right;
    for (const uint32_t r : rows) {
      (bins[r] <= split.lower_bin ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int32_t left_index = Build(left, depth + 1);
    const int32_t right_index = Build(right, depth + 1);
    nodes_[index].feature = split.feature;
    nodes_[index].threshold = split.threshold;
    nodes_[index].left = left_index;
    nodes_[index].right = right_index;
    return index;
  }

  std::vector<int32_t> CandidateFeatures() {
    const int32_t d = static_cast<int32_t>(data_.cols());
    std::vector<int32_t> features(d);
    std::iota(features.begin(), features.end(), 0);
    const int32_t m = params_.max_features;
    if (m <= 0 || m >= d || rng_ == nullptr) return features;
    for (int32_t i = 0; i < m; ++i) {
      std::uniform_int_distribution<int32_t> pick(i, d - 1);
      std::swap(features[i], features[pick(*rng_)]);
    }
    features.resize(m);
    std::sort(features.begin(), features.end());
    return features;
  }

  // Per-bin class weights and counts of `rows` on one feature, ascending.
  void Histogram(std::span<const uint32_t> bins, size_t num_bins,
                 const std::vector<uint32_t>& rows) {
    stats_.clear();
    if (num_bins <= 4 * rows.size()) {
      dense_.assign(num_bins, BinStats{0, 0, 0, 0});
      for (const uint32_t r : rows) {
        BinStats& s = dense_[bins[r]];
        (labels_[r] == 1 ? s.w1 : s.w0) += weights_[r];
        s.count += Count(r);
      }
      for (uint32_t b = 0; b < num_bins; ++b) {
        if (dense_[b].count > 0) {
          dense_[b].bin = b;
          stats_.push_back(dense_[b]);
        }
      }
      return;
    }
    sorted_.clear();
    for (const uint32_t r : rows) sorted_.emplace_back(bins[r], r);
    std::sort(sorted_.begin(), sorted_.end());
    for (const auto& [bin, r] : sorted_) {
      if (stats_.empty() || stats_.back().bin != bin) {
        stats_.push_back({bin, 0, 0, 0});
      }
      BinStats& s = stats_.back();
      (labels_[r] == 1 ? s.w1 : s.w0) += weights_[r];
      s.count += Count(r);
    }
  }

  Split FindSplit(const std::vector<uint32_t>& rows, double w0, double w1) {
    double total_count = 0;
    for (const uint32_t r : rows) total_count += Count(r);
    const double min_leaf = params_.min_samples_leaf;

    Split best;
    double best_score = GiniScore(w0, w1);
    for (const int32_t f : CandidateFeatures()) {
      const size_t num_bins = data_.num_bins(f);
      if (num_bins < 2) continue;
      Histogram(data_.bins(f), num_bins, rows);
      double l0 = 0, l1 = 0, lc = 0;
      for (size_t k = 0; k + 1 < stats_.size(); ++k) {
        l0 += stats_[k].w0;
        l1 += stats_[k].w1;
        lc += stats_[k].count;
        if (lc < min_leaf || total_count - lc < min_leaf) continue;
        const double score = GiniScore(l0, l1) + GiniScore(w0 - l0, w1 - l1);
        if (score > best_score + 1e-12 * std::abs(best_score)) {
          best_score = score;
          best.feature = f;
          best.lower_bin = stats_[k].bin;
          best.threshold = data_.Threshold(f, stats_[k].bin, stats_[k + 1].bin);
        }
      }
    }
    return best;
  }

  const BinnedFeatures& data_;
  std::span<const int> labels_;
  std::span<const double> weights_;
  std::span<const uint32_t> counts_;
  const TreeGrowthParams& params_;
  Rng* rng_;
  std::vector<TreeNode> nodes_;
  std::vector<BinStats> stats_;
  std::vector<BinStats> dense_;
  std::vector<std::pair<uint32_t, uint32_t>> sorted_;
};

}  // namespace

DecisionTree GrowClassificationTree(const BinnedFeatures& data,
                                    std::span<const int> labels,
                                    std::span<const double> weights,
                                    std::span<const uint32_t> counts,
                                    const TreeGrowthParams& params, Rng* rng) {
  if (labels.size() != data.rows() || weights.size() != data.rows() ||
      (!counts.empty() && counts.size() != data.rows())) {
    throw DimensionError("tree inputs differ in length");
  }
  TreeGrower grower(data, labels, weights, counts, params, rng);
  return grower.Grow();
}

}  // namespace stagesurv::learners
