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

#include "stagesurv/selection/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "fmt/format.h"
#include "stagesurv/common/errors.h"

namespace stagesurv::selection {
namespace {

void CheckInputs(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw DimensionError(fmt::format("{} scores for {} labels", scores.size(),
                                     labels.size()));
  }
  if (scores.empty()) throw DataError("no scores to evaluate");
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      throw DataError(fmt::format("score {} is not finite", i));
    }
    if (labels[i] != 0 && labels[i] != 1) {
      throw DataError(fmt::format("label {} at row {} is not 0/1", labels[i], i));
    }
  }
}

struct TieGroup {
  uint64_t positives = 0;
  uint64_t negatives = 0;
};

// Groups of equal score in descending score order.
std::vector<TieGroup> GroupByScore(std::span<const double> scores,
                                   std::span<const int> labels) {
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] > scores[b]; });
  std::vector<TieGroup> groups;
  for (size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || scores[order[i]] != scores[order[i - 1]]) groups.emplace_back();
    (labels[order[i]] == 1 ? groups.back().positives : groups.back().negatives)++;
  }
  return groups;
}

std::pair<uint64_t, uint64_t> ClassCounts(std::span<const TieGroup> groups) {
  uint64_t pos = 0, neg = 0;
  for (const TieGroup& g : groups) {
    pos += g.positives;
    neg += g.negatives;
  }
  if (pos == 0 || neg == 0) {
    throw DataError("AUC is undefined when only one class is present");
  }
  return {pos, neg};
}

}  // namespace

MetricsRow ThresholdedMetrics(std::span<const double> scores,
                              std::span<const int> labels, double threshold) {
  CheckInputs(scores, labels);
  size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (labels[i] == 1) {
      (predicted ? tp : fn)++;
    } else {
      (predicted ? fp : tn)++;
    }
  }
  MetricsRow row;
  row.threshold = threshold;
  row.accuracy = static_cast<double>(tp + tn) / scores.size();
  if (tp + fp == 0) {
    row.degenerate_precision = true;
  } else {
    row.precision = static_cast<double>(tp) / (tp + fp);
  }
  if (tp + fn == 0) {
    row.degenerate_recall = true;
  } else {
    row.recall = static_cast<double>(tp) / (tp + fn);
  }
  if (row.precision + row.recall > 0) {
    row.f1 = 2 * row.precision * row.recall / (row.precision + row.recall);
  }
  return row;
}

MetricsRow MeanMetrics(std::span<const MetricsRow> rows) {
  MetricsRow mean;
  if (rows.empty()) return mean;
  mean.threshold = rows.front().threshold;
  for (const MetricsRow& r : rows) {
    mean.accuracy += r.accuracy;
    mean.precision += r.precision;
    mean.recall += r.recall;
    mean.f1 += r.f1;
    mean.auc += r.auc;
    mean.degenerate_precision |= r.degenerate_precision;
    mean.degenerate_recall |= r.degenerate_recall;
  }
  const double n = static_cast<double>(rows.size());
  mean.accuracy /= n;
  mean.precision /= n;
  mean.recall /= n;
  mean.f1 /= n;
  mean.auc /= n;
  return mean;
}

double RocCurve::TrapezoidArea() const {
  double area = 0;
  for (size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) *
            (points[i].tpr + points[i - 1].tpr) / 2;
  }
  return area;
}

double RocCurve::TprAt(double fpr) const {
  // Last point with fpr <= target; points are sorted by (fpr, tpr).
  auto it = std::upper_bound(points.begin(), points.end(), fpr,
                             [](double f, const RocPoint& p) { return f < p.fpr; });
  if (it == points.begin()) return 0.0;
  const RocPoint& lo = *(it - 1);
  if (it == points.end() || lo.fpr == fpr) return lo.tpr;
  const RocPoint& hi = *it;
  return lo.tpr + (hi.tpr - lo.tpr) * (fpr - lo.fpr) / (hi.fpr - lo.fpr);
}

double RocAuc(std::span<const double> scores, std::span<const int> labels) {
  CheckInputs(scores, labels);
  const auto groups = GroupByScore(scores, labels);
  const auto [pos, neg] = ClassCounts(groups);
  // 2 * (wins + ties / 2): each negative beats no positive above it and ties
  // with the positives in its own group.
  unsigned __int128 twice_wins = 0;
  uint64_t positives_above = 0;
  for (const TieGroup& g : groups) {
    twice_wins += static_cast<unsigned __int128>(g.negatives) *
                  (2 * positives_above + g.positives);
    positives_above += g.positives;
  }
  return static_cast<double>(twice_wins) /
         (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
}

RocCurve ComputeRoc(std::span<const double> scores, std::span<const int> labels) {
  CheckInputs(scores, labels);
  const auto groups = GroupByScore(scores, labels);
  const auto [pos, neg] = ClassCounts(groups);
  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  uint64_t tp = 0, fp = 0;
  for (const TieGroup& g : groups) {
    tp += g.positives;
    fp += g.negatives;
    curve.points.push_back({static_cast<double>(fp) / neg,
                            static_cast<double>(tp) / pos});
  }
  curve.auc = RocAuc(scores, labels);
  return curve;
}

std::vector<RocPoint> AverageRoc(std::span<const RocCurve> curves,
                                 size_t grid_points) {
  if (curves.empty()) throw DataError("no ROC curves to average");
  if (grid_points < 2) throw ConfigError("ROC grid needs at least 2 points");
  std::vector<RocPoint> out;
  out.push_back({0.0, 0.0});
  for (size_t i = 0; i < grid_points; ++i) {
    const double fpr = static_cast<double>(i) / (grid_points - 1);
    double tpr = 0;
    for (const RocCurve& c : curves) tpr += c.TprAt(fpr);
    out.push_back({fpr, tpr / curves.size()});
  }
  return out;
}

}  // namespace stagesurv::selection
