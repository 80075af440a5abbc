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

#ifndef STAGESURV_ATTRIBUTION_PLAYERS_H_
#define STAGESURV_ATTRIBUTION_PLAYERS_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stagesurv/cohort/table.h"
#include "stagesurv/common/matrix.h"

namespace stagesurv::attribution {

// Model output for one encoded row. Must be reentrant.
using ModelFn = std::function<double(std::span<const double>)>;

// Encoded columns that are switched on and off together. A nominal
// feature's indicator columns form one player.
struct Player {
  std::string name;
  std::vector<size_t> columns;
  bool nominal = false;
};

class PlayerGroups {
 public:
  // Throws ConfigError unless every column in [0, num_columns) belongs to
  // exactly one player.
  PlayerGroups(std::vector<Player> players, size_t num_columns);

  // One player per column.
  static PlayerGroups Singletons(std::vector<std::string> names);
  // One player per schema feature, in schema order.
  static PlayerGroups FromTable(const cohort::CohortTable& table);

  size_t size() const { return players_.size(); }
  size_t num_columns() const { return player_of_.size(); }
  const Player& operator[](size_t i) const { return players_[i]; }
  const std::vector<Player>& players() const { return players_; }
  size_t player_of(size_t column) const { return player_of_[column]; }
  std::vector<std::string> names() const;

 private:
  std::vector<Player> players_;
  std::vector<size_t> player_of_;
};

// Reference rows for interventional masking, drawn without replacement.
struct BackgroundSet {
  Matrix rows;
  std::vector<size_t> source_rows;
  uint64_t seed = 0;

  // min(size, x.rows()) distinct rows in ascending row order.
  static BackgroundSet Sample(const Matrix& x, size_t size, uint64_t seed);
};

inline constexpr size_t kDefaultBackgroundSize = 100;

// Mean of f over background rows after copying the coalition's columns
// from x. `in_coalition` is indexed by player.
double CoalitionValue(const ModelFn& f, std::span<const double> x,
                      const BackgroundSet& background,
                      const PlayerGroups& players,
                      const std::vector<bool>& in_coalition);

}  // namespace stagesurv::attribution

#endif  // STAGESURV_ATTRIBUTION_PLAYERS_H_
