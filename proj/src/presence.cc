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

#include "stagesurv/attribution/presence.h"

#include <algorithm>
#include <map>
#include <set>

#include "fmt/format.h"
#include "stagesurv/common/errors.h"

namespace stagesurv::attribution {

PresenceMatrix BuildPresenceMatrix(const std::vector<PresenceColumn>& columns,
                                   size_t top_k) {
  std::map<std::string, size_t> counts;
  for (const PresenceColumn& column : columns) {
    const size_t expected = std::min(top_k, column.feature_count);
    if (column.features.size() != expected) {
      throw ConfigError(fmt::format("column {} lists {} features, expected {}",
                                    column.label, column.features.size(), expected));
    }
    std::set<std::string> seen;
    for (const std::string& f : column.features) {
      if (!seen.insert(f).second) {
        throw ConfigError(fmt::format("column {} lists {} twice", column.label, f));
      }
      counts[f]++;
    }
  }
  PresenceMatrix out;
  for (const PresenceColumn& column : columns) out.columns.push_back(column.label);
  for (const auto& [name, count] : counts) out.features.push_back(name);
  // counts iterates alphabetically, so a stable sort keeps names ordered
  // within equal counts.
  std::stable_sort(out.features.begin(), out.features.end(),
                   [&](const std::string& a, const std::string& b) {
                     return counts[a] > counts[b];
                   });
  for (const std::string& f : out.features) {
    std::vector<int> row;
    for (const PresenceColumn& column : columns) {
      row.push_back(std::find(column.features.begin(), column.features.end(), f) !=
                            column.features.end()
                        ? 1
                        : 0);
    }
    out.cells.push_back(std::move(row));
  }
  return out;
}

std::string PresenceMatrix::ToTsv() const {
  std::string out = "feature";
  for (const std::string& c : columns) out += "\t" + c;
  out += "\n";
  for (size_t i = 0; i < features.size(); ++i) {
    out += features[i];
    for (const int v : cells[i]) out += fmt::format("\t{}", v);
    out += "\n";
  }
  return out;
}

}  // namespace stagesurv::attribution
