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

#ifndef STAGESURV_ATTRIBUTION_SHAPLEY_H_
#define STAGESURV_ATTRIBUTION_SHAPLEY_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stagesurv/attribution/players.h"
#include "stagesurv/cohort/table.h"

namespace stagesurv::attribution {

struct Attribution {
  std::vector<double> contributions;  // One per player.
  double baseline = 0.0;              // v(empty): mean output over background.
  double prediction = 0.0;            // f(x).
  // Kernel estimate needed the ridge fallback.
  bool ridge_fallback = false;
};

inline constexpr size_t kMaxExactPlayers = 12;
inline constexpr double kKernelRidge = 1e-8;

// Shapley values by enumerating all 2^d coalitions of the interventional
// game. Throws ConfigError above kMaxExactPlayers players.
Attribution ExactShapley(const ModelFn& f, std::span<const double> x,
                         const BackgroundSet& background,
                         const PlayerGroups& players);

// Shapley-kernel weighted regression under the efficiency constraint
// sum(phi) = f(x) - v(empty). When n_samples covers all 2^d - 2 proper
// coalitions they are enumerated with exact kernel weights; otherwise
// coalition sizes are drawn in proportion to their kernel mass, each draw
// paired with its complement. Throws ConfigError when n_samples < 2d + 2.
Attribution KernelShapley(const ModelFn& f, std::span<const double> x,
                          const BackgroundSet& background,
                          const PlayerGroups& players, size_t n_samples,
                          uint64_t seed);

struct ShapOptions {
  size_t kernel_samples = 512;
  size_t max_instances = 100;  // Explained rows, subsampled when exceeded.
  uint64_t seed = 0;
  int threads = 1;
};

// Attributions of a row subsample, ranked per player by mean |phi|.
struct ShapSummary {
  std::vector<std::string> players;
  std::vector<size_t> instances;  // Explained table rows, ascending.
  std::vector<std::vector<double>> phi;     // [instance][player]
  std::vector<std::vector<double>> values;  // Min-max normalized feature value.
  std::vector<double> mean_abs;             // Per player.
  std::vector<size_t> ranking;              // Player indices, best first.
  std::vector<bool> ridge_fallback;         // Per instance.

  std::vector<std::string> Top(size_t k) const;
  // rank, feature, mean_abs_phi
  std::string RankingTsv() const;
  // instance, feature, normalized_value, phi
  std::string BeeswarmTsv() const;
};

// Ranks players by mean |phi|, ties by player order.
std::vector<size_t> RankByMeanAbs(std::span<const double> mean_abs);

// Explains up to options.max_instances rows of `table` (a seeded subsample
// when there are more) with KernelShapley. The beeswarm value of a numeric or
// ordinal feature is its raw value, of a nominal feature the index of its
// active category; values are min-max scaled over the explained rows
// (0.5 when constant). Per-instance streams keep the result independent of
// options.threads.
ShapSummary SummarizeShap(const ModelFn& f, const cohort::CohortTable& table,
                          const BackgroundSet& background,
                          const PlayerGroups& players,
                          const ShapOptions& options);

}  // namespace stagesurv::attribution

#endif  // STAGESURV_ATTRIBUTION_SHAPLEY_H_
