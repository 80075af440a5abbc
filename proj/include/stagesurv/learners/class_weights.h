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

#ifndef STAGESURV_LEARNERS_CLASS_WEIGHTS_H_
#define STAGESURV_LEARNERS_CLASS_WEIGHTS_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stagesurv::learners {

enum class ClassWeightMode { kUniform, kBalanced, kBalancedSubsample, kManual };

// A class-weight setting as it appears on a grid axis: "none", "balanced",
// "balanced_subsample" or a manual pair written "[1,3]".
struct ClassWeightSpec {
  ClassWeightMode mode = ClassWeightMode::kUniform;
  double manual_w0 = 1.0;
  double manual_w1 = 1.0;

  static ClassWeightSpec Parse(std::string_view text);
  std::string ToString() const;
};

struct ClassWeights {
  double w0 = 1.0;
  double w1 = 1.0;
  ClassWeightMode mode = ClassWeightMode::kUniform;

  double operator[](int label) const { return label == 1 ? w1 : w0; }
};

// balanced (and balanced_subsample, on the full set): w_c = n / (2 n_c).
// Throws FitError when a balanced mode sees only one class.
ClassWeights ComputeClassWeights(std::span<const int> labels,
                                 const ClassWeightSpec& spec);

// Balanced weights from (possibly fractional) class totals.
ClassWeights BalancedWeights(double count0, double count1);

// Per-sample training weights: class weight times the caller's sample weight
// rescaled to mean 1 (empty `sample_weights` means all ones). Rescaling makes
// every learner invariant to a global positive factor on sample weights.
std::vector<double> CombineWeights(std::span<const int> labels,
                                   const ClassWeights& class_weights,
                                   std::span<const double> sample_weights);

}  // namespace stagesurv::learners

#endif  // STAGESURV_LEARNERS_CLASS_WEIGHTS_H_
