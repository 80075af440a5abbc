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

#ifndef STAGESURV_LEARNERS_LOGISTIC_H_
#define STAGESURV_LEARNERS_LOGISTIC_H_

#include <span>
#include <vector>

#include "json.hpp"
#include "stagesurv/common/matrix.h"
#include "stagesurv/learners/class_weights.h"

namespace stagesurv::learners {

// Numerically safe logistic function.
double Sigmoid(double z);
// log(1 + exp(z)) without overflow.
double Softplus(double z);

struct LogisticModel {
  std::vector<double> coefficients;
  double intercept = 0.0;

  double Margin(std::span<const double> row) const;
  double PredictProba(std::span<const double> row) const;

  nlohmann::json ToJson() const;
  static LogisticModel FromJson(const nlohmann::json& json);
  friend bool operator==(const LogisticModel&, const LogisticModel&) = default;
};

// 1/2 |beta|^2 + C * sum_i w_i * log(1 + exp(-s_i (beta.x_i + b))) with
// s_i = +1 for label 1 and -1 for label 0. The intercept is unpenalized.
// Parameters are packed as [beta_0 .. beta_{d-1}, b].
class LogisticObjective {
 public:
  LogisticObjective(const Matrix& x, std::span<const int> labels,
                    std::span<const double> weights, double c);

  size_t num_params() const { return x_.cols() + 1; }
  double Value(std::span<const double> params) const;
  std::vector<double> Gradient(std::span<const double> params) const;

 private:
  const Matrix& x_;
  std::span<const int> labels_;
  std::span<const double> weights_;
  double c_;
};

struct LogisticFitInfo {
  int iterations = 0;
  double gradient_max_norm = 0.0;
  bool converged = false;
};

inline constexpr double kLogisticTolerance = 1e-6;
inline constexpr int kLogisticMaxIterations = 1000;

// Damped Newton on LogisticObjective with per-sample `weights` already
// combined. Stops when the gradient max-norm drops below kLogisticTolerance
// or after kLogisticMaxIterations.
LogisticModel FitLogisticWeighted(const Matrix& x, std::span<const int> labels,
                                  std::span<const double> weights, double c,
                                  LogisticFitInfo* info = nullptr);

// Throws FitError when a class is missing or a feature value is not finite.
LogisticModel FitLogistic(const Matrix& x, std::span<const int> labels,
                          std::span<const double> sample_weights,
                          const ClassWeightSpec& class_weight, double c,
                          LogisticFitInfo* info = nullptr);

}  // namespace stagesurv::learners

#endif  // STAGESURV_LEARNERS_LOGISTIC_H_
