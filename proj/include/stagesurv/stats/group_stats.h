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

#ifndef STAGESURV_STATS_GROUP_STATS_H_
#define STAGESURV_STATS_GROUP_STATS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stagesurv/cohort/table.h"

namespace stagesurv::stats {

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
  // Both samples have zero variance: p is 1 for equal means, 0 otherwise.
  bool degenerate = false;
};

// Two-sided Welch t-test with Welch-Satterthwaite degrees of freedom.
// Swapping the samples negates t only. Throws DataError when a sample has
// fewer than 2 values.
WelchResult WelchTTest(std::span<const double> a, std::span<const double> b);

// Student-t distribution through the regularized incomplete beta function.
double StudentTCdf(double t, double df);
double StudentTTwoSidedP(double t, double df);

// 4 decimals; below 1e-4 as "<0.0001".
std::string FormatPValue(double p);

struct GroupComparison {
  std::string feature;
  std::string label;  // Report header.
  size_t n_survivors = 0;
  size_t n_nonsurvivors = 0;
  double mean_survivors = 0.0;
  double mean_nonsurvivors = 0.0;
  // Unset when a group has fewer than 2 rows.
  std::optional<WelchResult> test;
};

// Survivors vs non-survivors on each numeric schema feature, in raw units.
std::vector<GroupComparison> CompareGroups(const cohort::CohortTable& table);

// One block of the survivor comparison report.
struct GroupStatsBlock {
  std::string cancer_type;
  std::string scope;  // "All stages", "Localized", ...
  std::vector<GroupComparison> comparisons;
};

inline constexpr std::string_view kGroupStatsTitle =
    "Comparison of mean values between survivors and non-survivors";

// Rows Survivors / Non-survivors / p-value per block; the p-Value column
// carries the largest p of the block's features.
std::string GroupStatsCsv(std::span<const GroupStatsBlock> blocks);
std::string GroupStatsText(std::span<const GroupStatsBlock> blocks);

}  // namespace stagesurv::stats

#endif  // STAGESURV_STATS_GROUP_STATS_H_
