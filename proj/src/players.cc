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

#include "stagesurv/attribution/players.h"

#include <algorithm>
#include <cstdint>
#include <numeric>

#include "fmt/format.h"
#include "stagesurv/common/errors.h"
#include "stagesurv/common/random.h"

namespace stagesurv::attribution {

PlayerGroups::PlayerGroups(std::vector<Player> players, size_t num_columns)
    : players_(std::move(players)), player_of_(num_columns, SIZE_MAX) {
  if (players_.empty()) throw ConfigError("no players to attribute to");
  for (size_t p = 0; p < players_.size(); ++p) {
    if (players_[p].columns.empty()) {
      throw ConfigError(fmt::format("player {} has no columns", players_[p].name));
    }
    for (const size_t c : players_[p].columns) {
      if (c >= num_columns || player_of_[c] != SIZE_MAX) {
        throw ConfigError(fmt::format("column {} is out of range or shared", c));
      }
      player_of_[c] = p;
    }
  }
  for (size_t c = 0; c < num_columns; ++c) {
    if (player_of_[c] == SIZE_MAX) {
      throw ConfigError(fmt::format("column {} belongs to no player", c));
    }
  }
}

PlayerGroups PlayerGroups::Singletons(std::vector<std::string> names) {
  std::vector<Player> players;
  for (size_t c = 0; c < names.size(); ++c) {
    players.push_back({std::move(names[c]), {c}, false});
  }
  return PlayerGroups(std::move(players), players.size());
}

PlayerGroups PlayerGroups::FromTable(const cohort::CohortTable& table) {
  std::vector<Player> players;
  const auto& features = table.schema().features();
  for (size_t f = 0; f < features.size(); ++f) {
    auto columns = table.ColumnsOf(f);
    if (columns.empty()) continue;
    players.push_back({features[f].name, std::move(columns),
                       features[f].kind == cohort::FeatureKind::kNominal});
  }
  return PlayerGroups(std::move(players), table.num_columns());
}

std::vector<std::string> PlayerGroups::names() const {
  std::vector<std::string> out;
  for (const Player& p : players_) out.push_back(p.name);
  return out;
}

BackgroundSet BackgroundSet::Sample(const Matrix& x, size_t size, uint64_t seed) {
  if (x.rows() == 0) throw DataError("cannot draw a background from no rows");
  std::vector<size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), 0);
  if (size < rows.size()) {
    Rng rng = MakeRng(seed, kStreamBackground);
    // Partial Fisher-Yates.
    for (size_t i = 0; i < size; ++i) {
      std::uniform_int_distribution<size_t> pick(i, rows.size() - 1);
      std::swap(rows[i], rows[pick(rng)]);
    }
    rows.resize(size);
    std::sort(rows.begin(), rows.end());
  }
  return {x.SelectRows(rows), rows, seed};
}

double CoalitionValue(const ModelFn& f, std::span<const double> x,
                      const BackgroundSet& background,
                      const PlayerGroups& players,
                      const std::vector<bool>& in_coalition) {
  std::vector<size_t> from_x;
  for (size_t p = 0; p < players.size(); ++p) {
    if (!in_coalition[p]) continue;
    for (const size_t c : players[p].columns) from_x.push_back(c);
  }
  const Matrix& bg = background.rows;
  std::vector<double> z(bg.cols());
  double total = 0;
  for (size_t r = 0; r < bg.rows(); ++r) {
    const auto row = bg.row(r);
    std::copy(row.begin(), row.end(), z.begin());
    for (const size_t c : from_x) z[c] = x[c];
    total += f(z);
  }
  return total / static_cast<double>(bg.rows());
}

}  // namespace stagesurv::attribution
