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

#ifndef STAGESURV_COMMON_RANDOM_H_
#define STAGESURV_COMMON_RANDOM_H_

#include <cstdint>
#include <random>

namespace stagesurv {

using Rng = std::mt19937_64;

// Fixed stream offsets. Every randomized component draws from
// DeriveSeed(root, offset + index) so that serial and concurrent execution
// consume identical streams.
inline constexpr uint64_t kStreamFolds = 0x1000;
inline constexpr uint64_t kStreamForest = 0x2000'0000;
inline constexpr uint64_t kStreamBackground = 0x3000;
inline constexpr uint64_t kStreamKernelShap = 0x4000'0000;
inline constexpr uint64_t kStreamLime = 0x5000'0000;
inline constexpr uint64_t kStreamSynth = 0x6000;
inline constexpr uint64_t kStreamSummaryRows = 0x7000;
inline constexpr uint64_t kStreamStage = 0x8000;

// SplitMix64 finalizer applied to (root, stream).
inline uint64_t DeriveSeed(uint64_t root, uint64_t stream) {
  uint64_t z = root + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline Rng MakeRng(uint64_t root, uint64_t stream) {
  return Rng(DeriveSeed(root, stream));
}

}  // namespace stagesurv

#endif  // STAGESURV_COMMON_RANDOM_H_
