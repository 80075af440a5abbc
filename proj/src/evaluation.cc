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

#include "stagesurv/selection/evaluation.h"

#include <algorithm>

#include "fmt/format.h"
#include "stagesurv/common/csv.h"
#include "stagesurv/common/errors.h"
#include "stagesurv/common/random.h"

namespace stagesurv::selection {

using cohort::Stage;
using learners::Learner;

HyperGrid StagewiseOptions::GridFor(Learner learner) const {
  const auto it = grids.find(learner);
  return it != grids.end() ? it->second : HyperGrid::Default(learner);
}

StageEvaluation EvaluateStage(const cohort::CohortTable& table, Stage stage,
                              std::span<const Learner> learners,
                              const StagewiseOptions& options) {
  StageEvaluation out;
  out.stage = stage;
  try {
    out.plan = StratifiedKFold(table.labels(), options.k,
                               DeriveSeed(options.search.seed,
                                          static_cast<uint64_t>(stage)));
  } catch (const DataError& e) {
    out.skipped = true;
    out.skip_reason = e.what();
    return out;
  }
  for (const Learner learner : learners) {
    out.results.push_back(
        GridSearch(table, options.GridFor(learner), out.plan, options.search));
  }
  return out;
}

std::vector<StageEvaluation> EvaluateStagewise(
    const std::array<const cohort::CohortTable*, 3>& stages,
    std::span<const Learner> learners, const StagewiseOptions& options) {
  std::vector<StageEvaluation> out;
  for (const Stage stage : cohort::kAllStages) {
    const cohort::CohortTable* table = stages[static_cast<size_t>(stage)];
    if (table == nullptr) {
      StageEvaluation skipped;
      skipped.stage = stage;
      skipped.skipped = true;
      skipped.skip_reason = "no cohort for this stage";
      out.push_back(std::move(skipped));
      continue;
    }
    out.push_back(EvaluateStage(*table, stage, learners, options));
  }
  return out;
}

MetricsTable BuildMetricsTable(std::span<const StageEvaluation> stages,
                               std::span<const Learner> learners) {
  MetricsTable table;
  table.learners.assign(learners.begin(), learners.end());
  for (const StageEvaluation& s : stages) {
    MetricsTable::Row row{s.stage, std::nullopt, {}};
    if (s.skipped) row.skipped = s.skip_reason;
    if (!s.skipped) table.k = s.plan.k;
    for (const Learner learner : learners) {
      const auto it = std::find_if(s.results.begin(), s.results.end(),
                                   [&](const GridResult& r) { return r.learner == learner; });
      if (it == s.results.end()) {
        row.cells.emplace_back();
      } else {
        row.cells.emplace_back(it->best().mean);
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string MetricsTable::ToCsv() const {
  std::string out = "stage,learner,acc,prec,rec,f1,auc,status\n";
  for (const Row& row : rows) {
    for (size_t l = 0; l < learners.size(); ++l) {
      const auto& cell = row.cells[l];
      csv::Row fields = {std::string(cohort::StageName(row.stage)),
                         std::string(learners::LearnerName(learners[l]))};
      if (cell) {
        for (const double v : {cell->accuracy, cell->precision, cell->recall,
                               cell->f1, cell->auc}) {
          fields.push_back(fmt::format("{:.6f}", v));
        }
        std::string status = "ok";
        if (cell->degenerate_precision) status = "degenerate_precision";
        if (cell->degenerate_recall) {
          status = status == "ok" ? "degenerate_recall"
                                  : "degenerate_precision;degenerate_recall";
        }
        fields.push_back(status);
      } else {
        fields.insert(fields.end(), 5, "");
        fields.push_back(row.skipped ? "skipped" : "missing");
      }
      out += csv::FormatRow(fields) + "\n";
    }
  }
  return out;
}

std::string MetricsTable::ToText() const {
  constexpr int kStageWidth = 11;
  constexpr int kCell = 7;
  constexpr int kGroup = 5 * kCell;
  std::string out = fmt::format("{} ({}-fold cross-validation means, threshold {})\n\n",
                                kMetricsTableTitle, k, kDefaultThreshold);
  out += fmt::format("{:<{}}", "", kStageWidth);
  for (const Learner learner : learners) {
    out += fmt::format(" {:^{}}", LearnerName(learner), kGroup);
  }
  out += "\n";
  out += fmt::format("{:<{}}", "Stage", kStageWidth);
  for (size_t l = 0; l < learners.size(); ++l) {
    out += " ";
    for (const char* metric : {"Acc", "Prec", "Rec", "F1", "AUC"}) {
      out += fmt::format("{:>{}}", metric, kCell);
    }
  }
  out += "\n";
  bool any_degenerate = false;
  for (const Row& row : rows) {
    out += fmt::format("{:<{}}", cohort::StageName(row.stage), kStageWidth);
    if (row.skipped) {
      out += fmt::format(" skipped: {}\n", *row.skipped);
      continue;
    }
    for (const auto& cell : row.cells) {
      out += " ";
      if (!cell) {
        for (int m = 0; m < 5; ++m) out += fmt::format("{:>{}}", "-", kCell);
        continue;
      }
      const auto value = [&](double v, bool flag) {
        any_degenerate |= flag;
        return fmt::format("{:>{}}", fmt::format("{:.3f}{}", v, flag ? "*" : ""), kCell);
      };
      out += value(cell->accuracy, false);
      out += value(cell->precision, cell->degenerate_precision);
      out += value(cell->recall, cell->degenerate_recall);
      out += value(cell->f1, false);
      out += value(cell->auc, false);
    }
    out += "\n";
  }
  if (any_degenerate) {
    out += "\n* a fold had no predicted (precision) or actual (recall) positives; "
           "that fold counts as 0\n";
  }
  return out;
}

}  // namespace stagesurv::selection
