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

#include "stagesurv/selection/folds.h"

#include <algorithm>
#include <numeric>

#include "fmt/format.h"
#include "stagesurv/common/errors.h"
#include "stagesurv/common/random.h"

namespace stagesurv::selection {

std::vector<size_t> FoldPlan::TrainIndices(int fold) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] != fold) out.push_back(i);
  }
  return out;
}

std::vector<size_t> FoldPlan::TestIndices(int fold) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] == fold) out.push_back(i);
  }
  return out;
}

FoldPlan StratifiedKFold(std::span<const int> labels, int k, uint64_t seed) {
  if (k < 2) throw ConfigError(fmt::format("k must be at least 2, got {}", k));
  std::vector<size_t> by_class[2];
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw DataError(fmt::format("label {} at row {} is not 0/1", labels[i], i));
    }
    by_class[labels[i]].push_back(i);
  }
  for (int c = 0; c < 2; ++c) {
    if (by_class[c].size() < static_cast<size_t>(k)) {
      throw DataError(fmt::format(
          "class {} ({}) has {} rows, fewer than k = {} folds", c,
          c == 1 ? "survived" : "not survived", by_class[c].size(), k));
    }
  }

  FoldPlan plan{k, std::vector<int>(labels.size(), 0), seed};
  Rng rng = MakeRng(seed, kStreamFolds);
  size_t position = 0;
  for (auto& members : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (const size_t row : members) {
      plan.assignments[row] = static_cast<int>(position % k);
      ++position;
    }
  }
  return plan;
}

}  // namespace stagesurv::selection
