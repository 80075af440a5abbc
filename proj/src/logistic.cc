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

#include "stagesurv/learners/logistic.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "fmt/format.h"
#include "stagesurv/common/errors.h"

namespace stagesurv::learners {

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double Softplus(double z) {
  if (z > 0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double LogisticModel::Margin(std::span<const double> row) const {
  double m = intercept;
  for (size_t j = 0; j < coefficients.size(); ++j) {
    m += coefficients[j] * row[j];
  }
  return m;
}

double LogisticModel::PredictProba(std::span<const double> row) const {
  return Sigmoid(Margin(row));
}

nlohmann::json LogisticModel::ToJson() const {
  return {{"coefficients", coefficients}, {"intercept", intercept}};
}

LogisticModel LogisticModel::FromJson(const nlohmann::json& json) {
  return {json.at("coefficients").get<std::vector<double>>(),
          json.at("intercept").get<double>()};
}

LogisticObjective::LogisticObjective(const Matrix& x,
                                     std::span<const int> labels,
                                     std::span<const double> weights, double c)
    : x_(x), labels_(labels), weights_(weights), c_(c) {
  if (labels.size() != x.rows() || weights.size() != x.rows()) {
    throw DimensionError("logistic inputs differ in length");
  }
}

double LogisticObjective::Value(std::span<const double> params) const {
  const size_t d = x_.cols();
  double penalty = 0;
  for (size_t j = 0; j < d; ++j) penalty += params[j] * params[j];
  double loss = 0;
  for (size_t i = 0; i < x_.rows(); ++i) {
    const auto row = x_.row(i);
    double m = params[d];
    for (size_t j = 0; j < d; ++j) m += params[j] * row[j];
    const double s = labels_[i] == 1 ? 1.0 : -1.0;
    loss += weights_[i] * Softplus(-s * m);
  }
  return 0.5 * penalty + c_ * loss;
}

std::vector<double> LogisticObjective::Gradient(
    std::span<const double> params) const {
  const size_t d = x_.cols();
  std::vector<double> grad(params.begin(), params.end());
  grad[d] = 0.0;
  for (size_t i = 0; i < x_.rows(); ++i) {
    const auto row = x_.row(i);
    double m = params[d];
    for (size_t j = 0; j < d; ++j) m += params[j] * row[j];
    const double s = labels_[i] == 1 ? 1.0 : -1.0;
    // d/dm softplus(-s m) = -s * sigmoid(-s m)
    const double coef = -c_ * weights_[i] * s * Sigmoid(-s * m);
    for (size_t j = 0; j < d; ++j) grad[j] += coef * row[j];
    grad[d] += coef;
  }
  return grad;
}

LogisticModel FitLogisticWeighted(const Matrix& x, std::span<const int> labels,
                                  std::span<const double> weights, double c,
                                  LogisticFitInfo* info) {
  if (!(c > 0) || !std::isfinite(c)) {
    throw ConfigError(fmt::format("C must be positive, got {}", c));
  }
  for (const double v : x.data()) {
    if (!std::isfinite(v)) throw FitError("non-finite feature value");
  }
  const LogisticObjective objective(x, labels, weights, c);
  const size_t d = x.cols();
  const size_t p = d + 1;
  std::vector<double> theta(p, 0.0);
  double value = objective.Value(theta);

  LogisticFitInfo local;
  Eigen::MatrixXd hessian(p, p);
  Eigen::VectorXd gradient(p);
  std::vector<double> candidate(p);
  for (local.iterations = 0; local.iterations < kLogisticMaxIterations;
       ++local.iterations) {
    const std::vector<double> grad = objective.Gradient(theta);
    local.gradient_max_norm = 0;
    for (size_t j = 0; j < p; ++j) {
      gradient(j) = grad[j];
      local.gradient_max_norm =
          std::max(local.gradient_max_norm, std::abs(grad[j]));
    }
    if (local.gradient_max_norm < kLogisticTolerance) {
      local.converged = true;
      break;
    }

    hessian.setZero();
    for (size_t j = 0; j < d; ++j) hessian(j, j) = 1.0;
    Eigen::VectorXd features(p);
    for (size_t i = 0; i < x.rows(); ++i) {
      const auto row = x.row(i);
      double m = theta[d];
      for (size_t j = 0; j < d; ++j) {
        m += theta[j] * row[j];
        features(j) = row[j];
      }
      features(d) = 1.0;
      const double q = Sigmoid(m);
      const double curvature = c * weights[i] * q * (1.0 - q);
      if (curvature > 0) {
        hessian.selfadjointView<Eigen::Lower>().rankUpdate(features,
                                                           curvature);
      }
    }
    hessian.triangularView<Eigen::StrictlyUpper>() =
        hessian.triangularView<Eigen::StrictlyLower>().transpose();
    // The intercept row can be flat when every margin saturates.
    hessian(d, d) += 1e-12;
    const Eigen::VectorXd step = hessian.ldlt().solve(-gradient);
    const double slope = gradient.dot(step);
    if (!step.allFinite() || slope >= 0) break;

    double t = 1.0;
    double next = value;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
      for (size_t j = 0; j < p; ++j) candidate[j] = theta[j] + t * step(j);
      next = objective.Value(candidate);
      if (next <= value + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // Stalled at floating-point resolution.
    theta.swap(candidate);
    value = next;
  }
  if (info != nullptr) *info = local;
  LogisticModel model;
  model.coefficients.assign(theta.begin(), theta.begin() + d);
  model.intercept = theta[d];
  return model;
}

LogisticModel FitLogistic(const Matrix& x, std::span<const int> labels,
                          std::span<const double> sample_weights,
                          const ClassWeightSpec& class_weight, double c,
                          LogisticFitInfo* info) {
  if (labels.size() != x.rows()) {
    throw DimensionError("labels and rows differ in length");
  }
  size_t positives = 0;
  for (const int y : labels) positives += y == 1 ? 1 : 0;
  if (positives == 0 || positives == labels.size()) {
    throw FitError("logistic regression needs samples of both classes");
  }
  const ClassWeights weights = ComputeClassWeights(labels, class_weight);
  const std::vector<double> combined =
      CombineWeights(labels, weights, sample_weights);
  return FitLogisticWeighted(x, labels, combined, c, info);
}

}  // namespace stagesurv::learners
