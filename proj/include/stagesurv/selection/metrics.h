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

#ifndef STAGESURV_SELECTION_METRICS_H_
#define STAGESURV_SELECTION_METRICS_H_

#include <span>
#include <utility>
#include <vector>

namespace stagesurv::selection {

inline constexpr double kDefaultThreshold = 0.5;

// Positive class = survived (label 1); a row is predicted positive when its
// score is >= threshold.
struct MetricsRow {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auc = 0.0;
  double threshold = kDefaultThreshold;
  // Set when the ratio had a zero denominator and was reported as 0.
  bool degenerate_precision = false;
  bool degenerate_recall = false;
};

// Accuracy, precision, recall and F1; auc is left at 0.
MetricsRow ThresholdedMetrics(std::span<const double> scores,
                              std::span<const int> labels,
                              double threshold = kDefaultThreshold);

// Unweighted mean of each metric; flags are or-ed.
MetricsRow MeanMetrics(std::span<const MetricsRow> rows);

struct RocPoint {
  double fpr;
  double tpr;
  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

struct RocCurve {
  // From (0,0) to (1,1), one point per distinct score, highest first.
  std::vector<RocPoint> points;
  double auc = 0.0;

  double TrapezoidArea() const;
  // TPR at `fpr` by linear interpolation, taking the top of a vertical
  // segment.
  double TprAt(double fpr) const;
};

// Mann-Whitney AUC, (wins + ties / 2) / (n_pos n_neg), counted exactly in
// integers. Throws DataError for single-class labels or non-finite scores.
double RocAuc(std::span<const double> scores, std::span<const int> labels);
RocCurve ComputeRoc(std::span<const double> scores, std::span<const int> labels);

// Vertical average of fold curves on an evenly spaced FPR grid of
// `grid_points` values in [0, 1], with (0, 0) prepended.
std::vector<RocPoint> AverageRoc(std::span<const RocCurve> curves,
                                 size_t grid_points = 101);

}  // namespace stagesurv::selection

#endif  // STAGESURV_SELECTION_METRICS_H_
