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

#include "stagesurv/attribution/shapley.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "Eigen/Dense"
#include "fmt/format.h"
#include "stagesurv/common/errors.h"
#include "stagesurv/common/parallel.h"
#include "stagesurv/common/random.h"

namespace stagesurv::attribution {
namespace {

std::vector<bool> MaskToCoalition(uint64_t mask, size_t d) {
  std::vector<bool> in(d);
  for (size_t p = 0; p < d; ++p) in[p] = (mask >> p) & 1;
  return in;
}

double Binomial(size_t n, size_t k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                  std::lgamma(n - k + 1.0));
}

// Shapley kernel weight of one coalition of size s among d players.
double KernelWeight(size_t d, size_t s) {
  return (d - 1.0) / (Binomial(d, s) * s * (d - s));
}

std::string FormatValue(double v) { return fmt::format("{:.6g}", v); }

}  // namespace

Attribution ExactShapley(const ModelFn& f, std::span<const double> x,
                         const BackgroundSet& background,
                         const PlayerGroups& players) {
  const size_t d = players.size();
  if (d > kMaxExactPlayers) {
    throw ConfigError(fmt::format(
        "exact Shapley enumeration supports at most {} players, got {}; use "
        "KernelShapley",
        kMaxExactPlayers, d));
  }
  if (x.size() != players.num_columns()) {
    throw DimensionError("row length does not match the player groups");
  }
  const uint64_t n_masks = uint64_t{1} << d;
  std::vector<double> value(n_masks);
  for (uint64_t mask = 0; mask < n_masks; ++mask) {
    value[mask] = CoalitionValue(f, x, background, players, MaskToCoalition(mask, d));
  }
  // weight[s] = s! (d - s - 1)! / d!
  std::vector<double> weight(d);
  for (size_t s = 0; s < d; ++s) weight[s] = 1.0 / (d * Binomial(d - 1, s));

  Attribution out;
  out.contributions.assign(d, 0.0);
  for (size_t i = 0; i < d; ++i) {
    const uint64_t bit = uint64_t{1} << i;
    double phi = 0;
    for (uint64_t mask = 0; mask < n_masks; ++mask) {
      if (mask & bit) continue;
      phi += weight[std::popcount(mask)] * (value[mask | bit] - value[mask]);
    }
    out.contributions[i] = phi;
  }
  out.baseline = value[0];
  out.prediction = f(x);
  return out;
}

Attribution KernelShapley(const ModelFn& f, std::span<const double> x,
                          const BackgroundSet& background,
                          const PlayerGroups& players, size_t n_samples,
                          uint64_t seed) {
  const size_t d = players.size();
  if (x.size() != players.num_columns()) {
    throw DimensionError("row length does not match the player groups");
  }
  if (n_samples < 2 * d + 2) {
    throw ConfigError(fmt::format("kernel Shapley needs at least {} samples for {} "
                                  "players, got {}", 2 * d + 2, d, n_samples));
  }
  if (d > 62) throw ConfigError("kernel Shapley supports at most 62 players");

  Attribution out;
  out.baseline = CoalitionValue(f, x, background, players, std::vector<bool>(d, false));
  out.prediction = f(x);
  const double delta = out.prediction - out.baseline;
  if (d == 1) {
    out.contributions = {delta};
    return out;
  }

  // Coalition mask -> regression weight.
  std::map<uint64_t, double> coalitions;
  const uint64_t full = (uint64_t{1} << d) - 1;
  const bool enumerate = d < 62 && n_samples >= full - 1;
  if (enumerate) {
    for (uint64_t mask = 1; mask < full; ++mask) {
      coalitions[mask] = KernelWeight(d, std::popcount(mask));
    }
  } else {
    // Size s carries kernel mass (d - 1) / (s (d - s)).
    std::vector<double> size_mass(d - 1);
    for (size_t s = 1; s < d; ++s) size_mass[s - 1] = (d - 1.0) / (s * (d - s));
    std::discrete_distribution<size_t> pick_size(size_mass.begin(), size_mass.end());
    Rng rng(seed);
    std::vector<size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    for (size_t drawn = 0; drawn + 1 < n_samples; drawn += 2) {
      const size_t s = pick_size(rng) + 1;
      for (size_t i = 0; i < s; ++i) {
        std::uniform_int_distribution<size_t> pick(i, d - 1);
        std::swap(order[i], order[pick(rng)]);
      }
      uint64_t mask = 0;
      for (size_t i = 0; i < s; ++i) mask |= uint64_t{1} << order[i];
      coalitions[mask] += 1.0;
      coalitions[full ^ mask] += 1.0;
    }
  }

  // Eliminate the last player: phi_last = delta - sum(others).
  const size_t m = coalitions.size();
  Eigen::MatrixXd design(m, d - 1);
  Eigen::VectorXd target(m), weights(m);
  size_t row = 0;
  for (const auto& [mask, w] : coalitions) {
    const double z_last = (mask >> (d - 1)) & 1;
    for (size_t i = 0; i + 1 < d; ++i) design(row, i) = ((mask >> i) & 1) - z_last;
    target(row) = CoalitionValue(f, x, background, players, MaskToCoalition(mask, d)) -
                  out.baseline - z_last * delta;
    weights(row) = w;
    ++row;
  }
  const Eigen::MatrixXd weighted = weights.asDiagonal() * design;
  Eigen::MatrixXd normal = design.transpose() * weighted;
  const Eigen::VectorXd rhs = weighted.transpose() * target;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(normal);
  qr.setThreshold(1e-12);
  Eigen::VectorXd phi;
  if (qr.rank() < static_cast<Eigen::Index>(d - 1)) {
    normal.diagonal().array() += kKernelRidge;
    phi = normal.ldlt().solve(rhs);
    out.ridge_fallback = true;
  } else {
    phi = qr.solve(rhs);
  }
  out.contributions.assign(d, 0.0);
  double sum = 0;
  for (size_t i = 0; i + 1 < d; ++i) {
    out.contributions[i] = phi(i);
    sum += phi(i);
  }
  out.contributions[d - 1] = delta - sum;
  return out;
}

std::vector<size_t> RankByMeanAbs(std::span<const double> mean_abs) {
  std::vector<size_t> order(mean_abs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return mean_abs[a] > mean_abs[b];
  });
  return order;
}

std::vector<std::string> ShapSummary::Top(size_t k) const {
  std::vector<std::string> out;
  for (size_t i = 0; i < std::min(k, ranking.size()); ++i) {
    out.push_back(players[ranking[i]]);
  }
  return out;
}

std::string ShapSummary::RankingTsv() const {
  std::string out = "rank\tfeature\tmean_abs_phi\n";
  for (size_t i = 0; i < ranking.size(); ++i) {
    out += fmt::format("{}\t{}\t{}\n", i + 1, players[ranking[i]],
                       FormatValue(mean_abs[ranking[i]]));
  }
  return out;
}

std::string ShapSummary::BeeswarmTsv() const {
  std::string out = "instance\tfeature\tnormalized_value\tphi\n";
  for (size_t i = 0; i < instances.size(); ++i) {
    for (const size_t p : ranking) {
      out += fmt::format("{}\t{}\t{}\t{}\n", instances[i], players[p],
                         FormatValue(values[i][p]), FormatValue(phi[i][p]));
    }
  }
  return out;
}

ShapSummary SummarizeShap(const ModelFn& f, const cohort::CohortTable& table,
                          const BackgroundSet& background,
                          const PlayerGroups& players,
                          const ShapOptions& options) {
  const size_t n = table.num_rows();
  if (n == 0) throw DataError("no rows to explain");
  if (players.num_columns() != table.num_columns()) {
    throw DimensionError("player groups do not match the table columns");
  }
  ShapSummary out;
  out.players = players.names();
  out.instances.resize(n);
  std::iota(out.instances.begin(), out.instances.end(), 0);
  if (options.max_instances < n) {
    Rng rng = MakeRng(options.seed, kStreamSummaryRows);
    for (size_t i = 0; i < options.max_instances; ++i) {
      std::uniform_int_distribution<size_t> pick(i, n - 1);
      std::swap(out.instances[i], out.instances[pick(rng)]);
    }
    out.instances.resize(options.max_instances);
    std::sort(out.instances.begin(), out.instances.end());
  }

  const size_t m = out.instances.size();
  const size_t d = players.size();
  out.phi.assign(m, {});
  out.ridge_fallback.assign(m, false);
  ParallelFor(m, options.threads, [&](size_t i) {
    const size_t r = out.instances[i];
    const Attribution a =
        KernelShapley(f, table.rows().row(r), background, players,
                      options.kernel_samples,
                      DeriveSeed(options.seed, kStreamKernelShap + r));
    out.phi[i] = a.contributions;
    out.ridge_fallback[i] = a.ridge_fallback;
  });

  out.mean_abs.assign(d, 0.0);
  for (size_t i = 0; i < m; ++i) {
    for (size_t p = 0; p < d; ++p) out.mean_abs[p] += std::abs(out.phi[i][p]);
  }
  for (double& v : out.mean_abs) v /= static_cast<double>(m);
  out.ranking = RankByMeanAbs(out.mean_abs);

  // Feature values, then min-max scaling per player.
  out.values.assign(m, std::vector<double>(d, 0.0));
  for (size_t p = 0; p < d; ++p) {
    const Player& player = players[p];
    for (size_t i = 0; i < m; ++i) {
      const size_t r = out.instances[i];
      double v = 0;
      if (player.nominal) {
        v = -1;
        for (size_t j = 0; j < player.columns.size(); ++j) {
          if (table.rows()(r, player.columns[j]) > 0.5) v = static_cast<double>(j);
        }
      } else {
        v = table.RawValue(r, player.columns.front());
      }
      out.values[i][p] = v;
    }
    double lo = INFINITY, hi = -INFINITY;
    for (size_t i = 0; i < m; ++i) {
      lo = std::min(lo, out.values[i][p]);
      hi = std::max(hi, out.values[i][p]);
    }
    for (size_t i = 0; i < m; ++i) {
      out.values[i][p] = hi > lo ? (out.values[i][p] - lo) / (hi - lo) : 0.5;
    }
  }
  return out;
}

}  // namespace stagesurv::attribution
