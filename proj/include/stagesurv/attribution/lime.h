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

#ifndef STAGESURV_ATTRIBUTION_LIME_H_
#define STAGESURV_ATTRIBUTION_LIME_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "stagesurv/attribution/players.h"
#include "stagesurv/common/matrix.h"

namespace stagesurv::attribution {

// Training-set statistics driving perturbations.
struct LimeStats {
  std::vector<double> column_std;  // Population std per column; 1 if zero.
  // Per player: category frequencies over its indicator columns (nominal
  // players only).
  std::vector<std::vector<double>> category_frequency;

  static LimeStats Fit(const Matrix& x, const PlayerGroups& players);
};

struct LimeOptions {
  size_t n_samples = 5000;
  size_t top_k = 5;
  double kernel_width_factor = 0.75;  // sigma = factor * sqrt(players).
  double ridge = 1.0;
  uint64_t seed = 0;
};

struct WeightedFeature {
  std::string name;
  double weight;
};

struct LocalExplanation {
  size_t instance = 0;
  double prediction = 0.0;
  // Kernel-weighted mean model output over the perturbations.
  double baseline = 0.0;
  double intercept = 0.0;
  std::vector<WeightedFeature> top_features;  // By descending |weight|.
  double fidelity = 0.0;  // Weighted R^2 of the final surrogate, >= 0.
  bool degenerate = false;       // Model output constant over the sample.
  bool widened_kernel = false;   // Kernel width was doubled.

  nlohmann::json ToJson() const;
};

// Local linear surrogate around x. Continuous players get Gaussian noise
// with the training std; nominal players are redrawn from the training
// category frequencies. Regressors are (z - x) / std for continuous players
// and "same category as x" for nominal ones. Sample weights are
// exp(-D^2 / sigma^2) with D the distance in standardized units (a changed
// category counts 1). The K largest |coefficients| of a full weighted ridge
// fit are refitted alone. Throws ConfigError when n_samples < 10 K, FitError
// when every weight stays below 1e-12 after doubling the width once.
LocalExplanation LimeExplain(const ModelFn& f, std::span<const double> x,
                             size_t instance, const LimeStats& stats,
                             const PlayerGroups& players,
                             const LimeOptions& options);

// Row with the lowest score; the first such row on ties. Throws DataError
// when empty.
size_t SelectLimeCase(std::span<const double> scores);

// Rows ordered by ascending score, ties by index.
std::vector<size_t> LowestScoring(std::span<const double> scores, size_t count);

// Top-k players by how many explanations list them; ties by summed |weight|,
// then by name.
std::vector<std::string> AggregateTopFeatures(
    std::span<const LocalExplanation> explanations, size_t k);

}  // namespace stagesurv::attribution

#endif  // STAGESURV_ATTRIBUTION_LIME_H_
