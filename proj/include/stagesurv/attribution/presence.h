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

#ifndef STAGESURV_ATTRIBUTION_PRESENCE_H_
#define STAGESURV_ATTRIBUTION_PRESENCE_H_

#include <string>
#include <vector>

namespace stagesurv::attribution {

// One cancer x stage cell: its top features and the number of features the
// ranking was drawn from.
struct PresenceColumn {
  std::string label;  // "Colorectal Localized"
  std::vector<std::string> features;
  size_t feature_count = 0;
};

// Binary features x columns grid.
struct PresenceMatrix {
  std::vector<std::string> columns;
  std::vector<std::string> features;  // Descending presence count, then name.
  std::vector<std::vector<int>> cells;  // [feature][column]

  // Header "feature" followed by the column labels.
  std::string ToTsv() const;
};

inline constexpr size_t kPresenceTopK = 5;

// Throws ConfigError when a list does not hold exactly
// min(top_k, feature_count) names or names a feature twice.
PresenceMatrix BuildPresenceMatrix(const std::vector<PresenceColumn>& columns,
                                   size_t top_k = kPresenceTopK);

}  // namespace stagesurv::attribution

#endif  // STAGESURV_ATTRIBUTION_PRESENCE_H_
