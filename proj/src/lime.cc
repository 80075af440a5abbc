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

#include "stagesurv/attribution/lime.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "Eigen/Dense"
#include "fmt/format.h"
#include "stagesurv/common/errors.h"
#include "stagesurv/common/random.h"

namespace stagesurv::attribution {
namespace {

constexpr double kMinKernelWeight = 1e-12;

struct RidgeFit {
  Eigen::VectorXd coef;
  double intercept = 0.0;
};

// Weighted ridge with an unpenalized intercept, by weighted centering.
RidgeFit WeightedRidge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& w, double lambda) {
  const double total = w.sum();
  const Eigen::RowVectorXd x_mean = (w.transpose() * x) / total;
  const double y_mean = w.dot(y) / total;
  const Eigen::MatrixXd xc = x.rowwise() - x_mean;
  const Eigen::VectorXd yc = y.array() - y_mean;
  Eigen::MatrixXd normal = xc.transpose() * w.asDiagonal() * xc;
  normal.diagonal().array() += lambda;
  RidgeFit fit;
  fit.coef = normal.ldlt().solve(xc.transpose() * (w.asDiagonal() * yc));
  fit.intercept = y_mean - x_mean.dot(fit.coef);
  return fit;
}

// Index of the active indicator in a nominal player's columns, -1 if none.
int ActiveCategory(std::span<const double> row, const Player& player) {
  for (size_t j = 0; j < player.columns.size(); ++j) {
    if (row[player.columns[j]] > 0.5) return static_cast<int>(j);
  }
  return -1;
}

}  // namespace

LimeStats LimeStats::Fit(const Matrix& x, const PlayerGroups& players) {
  if (x.rows() == 0) throw DataError("LIME statistics need training rows");
  LimeStats stats;
  const double n = static_cast<double>(x.rows());
  for (size_t c = 0; c < x.cols(); ++c) {
    double mean = 0, var = 0;
    for (size_t r = 0; r < x.rows(); ++r) mean += x(r, c);
    mean /= n;
    for (size_t r = 0; r < x.rows(); ++r) var += (x(r, c) - mean) * (x(r, c) - mean);
    const double std = std::sqrt(var / n);
    stats.column_std.push_back(std > 0 ? std : 1.0);
  }
  stats.category_frequency.resize(players.size());
  for (size_t p = 0; p < players.size(); ++p) {
    if (!players[p].nominal) continue;
    std::vector<double> counts(players[p].columns.size(), 0.0);
    double seen = 0;
    for (size_t r = 0; r < x.rows(); ++r) {
      const int active = ActiveCategory(x.row(r), players[p]);
      if (active >= 0) {
        counts[active] += 1;
        seen += 1;
      }
    }
    for (double& c : counts) c = seen > 0 ? c / seen : 1.0 / counts.size();
    stats.category_frequency[p] = std::move(counts);
  }
  return stats;
}

nlohmann::json LocalExplanation::ToJson() const {
  nlohmann::json features = nlohmann::json::array();
  for (const WeightedFeature& f : top_features) {
    features.push_back({{"feature", f.name}, {"weight", f.weight}});
  }
  return {{"instance", instance},
          {"prediction", prediction},
          {"baseline", baseline},
          {"intercept", intercept},
          {"top_features", std::move(features)},
          {"fidelity", fidelity},
          {"degenerate", degenerate},
          {"widened_kernel", widened_kernel}};
}

LocalExplanation LimeExplain(const ModelFn& f, std::span<const double> x,
                             size_t instance, const LimeStats& stats,
                             const PlayerGroups& players,
                             const LimeOptions& options) {
  const size_t d = players.size();
  const size_t n = options.n_samples;
  if (x.size() != players.num_columns() || stats.column_std.size() != x.size()) {
    throw DimensionError("row length does not match the LIME statistics");
  }
  if (options.top_k == 0) throw ConfigError("LIME top_k must be positive");
  if (n < 10 * options.top_k) {
    throw ConfigError(fmt::format("LIME needs at least {} samples for K = {}, got {}",
                                  10 * options.top_k, options.top_k, n));
  }

  // Sample 0 is x itself.
  Rng rng(options.seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd regressors(n, d);
  Eigen::VectorXd distance2(n), outputs(n);
  std::vector<double> z(x.begin(), x.end());
  std::vector<std::discrete_distribution<int>> pick_category(d);
  std::vector<int> x_category(d, -1);
  for (size_t p = 0; p < d; ++p) {
    if (!players[p].nominal) continue;
    const auto& freq = stats.category_frequency[p];
    pick_category[p] = std::discrete_distribution<int>(freq.begin(), freq.end());
    x_category[p] = ActiveCategory(x, players[p]);
  }
  for (size_t s = 0; s < n; ++s) {
    std::copy(x.begin(), x.end(), z.begin());
    double d2 = 0;
    for (size_t p = 0; p < d; ++p) {
      const Player& player = players[p];
      if (player.nominal) {
        int category = x_category[p];
        if (s > 0) {
          category = pick_category[p](rng);
          for (size_t j = 0; j < player.columns.size(); ++j) {
            z[player.columns[j]] = static_cast<int>(j) == category ? 1.0 : 0.0;
          }
        }
        const bool same = category == x_category[p];
        regressors(s, p) = same ? 1.0 : 0.0;
        d2 += same ? 0.0 : 1.0;
      } else {
        double r2 = 0, shift = 0;
        for (const size_t c : player.columns) {
          const double e = s > 0 ? normal(rng) : 0.0;
          z[c] = x[c] + e * stats.column_std[c];
          r2 += e * e;
          shift += e;
        }
        regressors(s, p) = shift;
        d2 += r2;
      }
    }
    distance2(s) = d2;
    outputs(s) = f(z);
  }

  LocalExplanation out;
  out.instance = instance;
  out.prediction = outputs(0);
  double sigma = options.kernel_width_factor * std::sqrt(static_cast<double>(d));
  Eigen::VectorXd weights;
  for (int attempt = 0;; ++attempt) {
    weights = (-distance2.array() / (sigma * sigma)).exp();
    if ((weights.array() >= kMinKernelWeight).any()) break;
    if (attempt == 1) {
      throw FitError("every LIME perturbation weight is below 1e-12");
    }
    sigma *= 2;
    out.widened_kernel = true;
  }
  const double total_weight = weights.sum();
  out.baseline = weights.dot(outputs) / total_weight;

  const RidgeFit full = WeightedRidge(regressors, outputs, weights, options.ridge);
  std::vector<size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return std::abs(full.coef(a)) > std::abs(full.coef(b));
  });
  order.resize(std::min(options.top_k, d));

  Eigen::MatrixXd selected(n, order.size());
  for (size_t j = 0; j < order.size(); ++j) selected.col(j) = regressors.col(order[j]);
  const RidgeFit local = WeightedRidge(selected, outputs, weights, options.ridge);
  out.intercept = local.intercept;
  std::vector<size_t> by_weight(order.size());
  std::iota(by_weight.begin(), by_weight.end(), 0);
  std::stable_sort(by_weight.begin(), by_weight.end(), [&](size_t a, size_t b) {
    return std::abs(local.coef(a)) > std::abs(local.coef(b));
  });
  for (const size_t j : by_weight) {
    out.top_features.push_back({players[order[j]].name, local.coef(j)});
  }

  const Eigen::VectorXd fitted =
      (selected * local.coef).array() + local.intercept;
  const double ss_res = weights.dot((outputs - fitted).array().square().matrix());
  const double ss_tot =
      weights.dot((outputs.array() - out.baseline).square().matrix());
  if (ss_tot <= 0) {
    out.degenerate = true;
    out.fidelity = 0.0;
  } else {
    out.fidelity = std::max(0.0, 1.0 - ss_res / ss_tot);
  }
  return out;
}

size_t SelectLimeCase(std::span<const double> scores) {
  if (scores.empty()) throw DataError("no rows to select a LIME case from");
  return static_cast<size_t>(std::min_element(scores.begin(), scores.end()) -
                             scores.begin());
}

std::vector<size_t> LowestScoring(std::span<const double> scores, size_t count) {
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  order.resize(std::min(count, order.size()));
  return order;
}

std::vector<std::string> AggregateTopFeatures(
    std::span<const LocalExplanation> explanations, size_t k) {
  struct Tally {
    size_t count = 0;
    double weight = 0;
  };
  std::map<std::string, Tally> tally;
  for (const LocalExplanation& e : explanations) {
    for (const WeightedFeature& f : e.top_features) {
      tally[f.name].count++;
      tally[f.name].weight += std::abs(f.weight);
    }
  }
  std::vector<std::pair<std::string, Tally>> items(tally.begin(), tally.end());
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second.count != b.second.count) return a.second.count > b.second.count;
    return a.second.weight > b.second.weight;
  });
  std::vector<std::string> out;
  for (size_t i = 0; i < std::min(k, items.size()); ++i) out.push_back(items[i].first);
  return out;
}

}  // namespace stagesurv::attribution
