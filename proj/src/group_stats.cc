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

#include "stagesurv/stats/group_stats.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "boost/math/special_functions/beta.hpp"
#include "fmt/format.h"
#include "stagesurv/common/csv.h"
#include "stagesurv/common/errors.h"

namespace stagesurv::stats {
namespace {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // Sample variance, n - 1.
};

Moments SampleMoments(std::span<const double> x) {
  Moments m;
  for (const double v : x) m.mean += v;
  m.mean /= static_cast<double>(x.size());
  for (const double v : x) m.variance += (v - m.mean) * (v - m.mean);
  m.variance /= static_cast<double>(x.size() - 1);
  return m;
}

double Mean(std::span<const double> x) {
  double s = 0;
  for (const double v : x) s += v;
  return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

std::optional<double> BlockMaxP(const GroupStatsBlock& block) {
  std::optional<double> worst;
  for (const GroupComparison& c : block.comparisons) {
    if (!c.test) return std::nullopt;
    worst = std::max(worst.value_or(0.0), c.test->p);
  }
  return worst;
}

}  // namespace

double StudentTCdf(double t, double df) {
  if (!(df > 0)) throw DataError(fmt::format("degrees of freedom must be positive, got {}", df));
  if (std::isnan(t)) throw DataError("t statistic is NaN");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  // P(|T| > |t|) = I_{df/(df+t^2)}(df/2, 1/2).
  const double tail = 0.5 * boost::math::ibeta(df / 2, 0.5, df / (df + t * t));
  return t > 0 ? 1.0 - tail : tail;
}

double StudentTTwoSidedP(double t, double df) {
  if (!(df > 0)) throw DataError(fmt::format("degrees of freedom must be positive, got {}", df));
  if (std::isnan(t)) throw DataError("t statistic is NaN");
  if (std::isinf(t)) return 0.0;
  return std::min(1.0, boost::math::ibeta(df / 2, 0.5, df / (df + t * t)));
}

WelchResult WelchTTest(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw DataError(fmt::format("Welch test needs 2+ values per sample, got {} and {}",
                                a.size(), b.size()));
  }
  const Moments ma = SampleMoments(a), mb = SampleMoments(b);
  const double va = ma.variance / a.size(), vb = mb.variance / b.size();
  const double diff = ma.mean - mb.mean;
  WelchResult r;
  if (va + vb == 0) {
    r.degenerate = true;
    r.df = static_cast<double>(a.size() + b.size() - 2);
    if (diff == 0) {
      r.t = 0;
      r.p = 1;
    } else {
      r.t = diff > 0 ? std::numeric_limits<double>::infinity()
                     : -std::numeric_limits<double>::infinity();
      r.p = 0;
    }
    return r;
  }
  r.t = diff / std::sqrt(va + vb);
  r.df = (va + vb) * (va + vb) /
         (va * va / (a.size() - 1.0) + vb * vb / (b.size() - 1.0));
  r.p = StudentTTwoSidedP(r.t, r.df);
  return r;
}

std::string FormatPValue(double p) {
  if (p < 1e-4) return "<0.0001";
  return fmt::format("{:.4f}", p);
}

std::vector<GroupComparison> CompareGroups(const cohort::CohortTable& table) {
  std::vector<GroupComparison> out;
  const auto& features = table.schema().features();
  for (size_t f = 0; f < features.size(); ++f) {
    if (features[f].kind != cohort::FeatureKind::kNumeric) continue;
    const auto columns = table.ColumnsOf(f);
    if (columns.size() != 1) continue;
    std::vector<double> survivors, nonsurvivors;
    for (size_t r = 0; r < table.num_rows(); ++r) {
      const double v = table.RawValue(r, columns.front());
      (table.labels()[r] == 1 ? survivors : nonsurvivors).push_back(v);
    }
    GroupComparison c;
    c.feature = features[f].name;
    c.label = std::string(features[f].display_name());
    c.n_survivors = survivors.size();
    c.n_nonsurvivors = nonsurvivors.size();
    c.mean_survivors = Mean(survivors);
    c.mean_nonsurvivors = Mean(nonsurvivors);
    if (survivors.size() >= 2 && nonsurvivors.size() >= 2) {
      c.test = WelchTTest(survivors, nonsurvivors);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::string GroupStatsCsv(std::span<const GroupStatsBlock> blocks) {
  std::vector<std::string> labels;
  if (!blocks.empty()) {
    for (const auto& c : blocks.front().comparisons) labels.push_back(c.label);
  }
  csv::Row header = {"cancer_type", "scope", "group", "n"};
  header.insert(header.end(), labels.begin(), labels.end());
  header.push_back("p-Value");
  std::string out = csv::FormatRow(header) + "\n";
  for (const GroupStatsBlock& block : blocks) {
    const auto& cs = block.comparisons;
    const auto row = [&](std::string group, std::string n, auto cell, std::string p) {
      csv::Row fields = {block.cancer_type, block.scope, std::move(group), std::move(n)};
      for (const GroupComparison& c : cs) fields.push_back(cell(c));
      fields.push_back(std::move(p));
      out += csv::FormatRow(fields) + "\n";
    };
    const std::string n_surv = cs.empty() ? "0" : std::to_string(cs.front().n_survivors);
    const std::string n_non = cs.empty() ? "0" : std::to_string(cs.front().n_nonsurvivors);
    const auto worst = BlockMaxP(block);
    row("Survivors", n_surv,
        [](const GroupComparison& c) { return fmt::format("{:.4f}", c.mean_survivors); }, "");
    row("Non-survivors", n_non,
        [](const GroupComparison& c) { return fmt::format("{:.4f}", c.mean_nonsurvivors); },
        worst ? FormatPValue(*worst) : "unavailable");
    row("p-value", "",
        [](const GroupComparison& c) {
          return c.test ? FormatPValue(c.test->p) : std::string("unavailable");
        },
        worst ? FormatPValue(*worst) : "unavailable");
  }
  return out;
}

std::string GroupStatsText(std::span<const GroupStatsBlock> blocks) {
  constexpr int kName = 14, kScope = 12, kGroup = 15, kCell = 12;
  std::string out = fmt::format("{}\n\n", kGroupStatsTitle);
  std::vector<std::string> labels;
  if (!blocks.empty()) {
    for (const auto& c : blocks.front().comparisons) labels.push_back(c.label);
  }
  out += fmt::format("{:<{}}{:<{}}{:<{}}", "Cancer type", kName, "Stage", kScope,
                     "Group", kGroup);
  for (const std::string& l : labels) out += fmt::format("{:>{}}", l, kCell);
  out += fmt::format("{:>{}}\n", "p-Value", kCell);
  for (const GroupStatsBlock& block : blocks) {
    const auto worst = BlockMaxP(block);
    const auto line = [&](const std::string& name, const std::string& scope,
                          const std::string& group, auto cell, const std::string& p) {
      out += fmt::format("{:<{}}{:<{}}{:<{}}", name, kName, scope, kScope, group, kGroup);
      for (const GroupComparison& c : block.comparisons) {
        out += fmt::format("{:>{}}", cell(c), kCell);
      }
      out += fmt::format("{:>{}}\n", p, kCell);
    };
    line(block.cancer_type, block.scope, "Survivors",
         [](const GroupComparison& c) { return fmt::format("{:.1f}", c.mean_survivors); }, "");
    line("", "", "Non-survivors",
         [](const GroupComparison& c) { return fmt::format("{:.1f}", c.mean_nonsurvivors); },
         worst ? FormatPValue(*worst) : "n/a");
    line("", "", "  p per feature",
         [](const GroupComparison& c) {
           return c.test ? FormatPValue(c.test->p) : std::string("n/a");
         },
         "");
  }
  out += "\np-Value: largest two-sided Welch p among the block's features.\n";
  return out;
}

}  // namespace stagesurv::stats
