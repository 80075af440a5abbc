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

#ifndef STAGESURV_SELECTION_FOLDS_H_
#define STAGESURV_SELECTION_FOLDS_H_

#include <cstdint>
#include <span>
#include <vector>

namespace stagesurv::selection {

inline constexpr int kDefaultFolds = 5;

struct FoldPlan {
  int k = kDefaultFolds;
  std::vector<int> assignments;  // Fold of each row, in [0, k).
  uint64_t seed = 0;

  std::vector<size_t> TrainIndices(int fold) const;
  std::vector<size_t> TestIndices(int fold) const;
};

// Shuffles each class and deals it round-robin over the folds; the dealing
// position carries over from class 0 into class 1 so fold sizes stay within
// one of each other. Throws DataError naming a class with fewer than k rows,
// ConfigError for k < 2.
FoldPlan StratifiedKFold(std::span<const int> labels, int k, uint64_t seed);

}  // namespace stagesurv::selection

#endif  // STAGESURV_SELECTION_FOLDS_H_
