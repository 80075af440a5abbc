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

#include "stagesurv/learners/class_weights.h"

#include <charconv>
#include <cmath>

#include "fmt/format.h"
#include "stagesurv/common/errors.h"

namespace stagesurv::learners {
namespace {

double ParseWeight(std::string_view text, std::string_view whole) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !(value > 0) || !std::isfinite(value)) {
    throw ConfigError(fmt::format("invalid class weights \"{}\"", whole));
  }
  return value;
}

}  // namespace

ClassWeightSpec ClassWeightSpec::Parse(std::string_view text) {
  if (text == "none" || text == "None" || text == "uniform") {
    return {ClassWeightMode::kUniform, 1.0, 1.0};
  }
  if (text == "balanced") return {ClassWeightMode::kBalanced, 1.0, 1.0};
  if (text == "balanced_subsample") {
    return {ClassWeightMode::kBalancedSubsample, 1.0, 1.0};
  }
  if (text.size() >= 2 && text.front() == '[' && text.back() == ']') {
    const std::string_view inner = text.substr(1, text.size() - 2);
    const size_t comma = inner.find(',');
    if (comma != std::string_view::npos) {
      return {ClassWeightMode::kManual, ParseWeight(inner.substr(0, comma), text),
              ParseWeight(inner.substr(comma + 1), text)};
    }
  }
  throw ConfigError(fmt::format("invalid class weights \"{}\"", text));
}

std::string ClassWeightSpec::ToString() const {
  switch (mode) {
    case ClassWeightMode::kUniform:
      return "none";
    case ClassWeightMode::kBalanced:
      return "balanced";
    case ClassWeightMode::kBalancedSubsample:
      return "balanced_subsample";
    case ClassWeightMode::kManual:
      return fmt::format("[{},{}]", manual_w0, manual_w1);
  }
  return "?";
}

ClassWeights BalancedWeights(double count0, double count1) {
  if (!(count0 > 0) || !(count1 > 0)) {
    throw FitError("balanced class weights need both classes present");
  }
  const double n = count0 + count1;
  return {n / (2.0 * count0), n / (2.0 * count1), ClassWeightMode::kBalanced};
}

ClassWeights ComputeClassWeights(std::span<const int> labels,
                                 const ClassWeightSpec& spec) {
  switch (spec.mode) {
    case ClassWeightMode::kUniform:
      return {1.0, 1.0, ClassWeightMode::kUniform};
    case ClassWeightMode::kManual:
      return {spec.manual_w0, spec.manual_w1, ClassWeightMode::kManual};
    case ClassWeightMode::kBalanced:
    case ClassWeightMode::kBalancedSubsample: {
      double count1 = 0;
      for (const int y : labels) count1 += y == 1 ? 1 : 0;
      ClassWeights weights =
          BalancedWeights(static_cast<double>(labels.size()) - count1, count1);
      weights.mode = spec.mode;
      return weights;
    }
  }
  return {};
}

std::vector<double> CombineWeights(std::span<const int> labels,
                                   const ClassWeights& class_weights,
                                   std::span<const double> sample_weights) {
  const size_t n = labels.size();
  std::vector<double> out(n);
  double scale = 1.0;
  if (!sample_weights.empty()) {
    if (sample_weights.size() != n) {
      throw DimensionError("sample weights and labels differ in length");
    }
    double total = 0;
    for (const double w : sample_weights) {
      if (!(w >= 0) || !std::isfinite(w)) {
        throw FitError("sample weights must be finite and non-negative");
      }
      total += w;
    }
    if (!(total > 0)) throw FitError("sample weights sum to zero");
    scale = static_cast<double>(n) / total;
  }
  for (size_t i = 0; i < n; ++i) {
    const double sw = sample_weights.empty() ? 1.0 : sample_weights[i] * scale;
    out[i] = class_weights[labels[i]] * sw;
  }
  return out;
}

}  // namespace stagesurv::learners
