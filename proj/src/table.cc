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

#include "stagesurv/cohort/table.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "fmt/format.h"
#include "stagesurv/common/errors.h"

namespace stagesurv::cohort {
namespace {

double ParseNumber(const std::string& text, const std::string& feature) {
  double value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw DataError(
        fmt::format("unparseable number \"{}\" in \"{}\"", text, feature));
  }
  return value;
}

}  // namespace

CohortTable::CohortTable(std::shared_ptr<const FeatureSchema> schema,
                         std::vector<EncodedColumn> columns, Matrix rows,
                         std::vector<int> labels, std::vector<Stage> stages,
                         EncodingStats stats, std::vector<std::string> warnings)
    : schema_(std::move(schema)),
      columns_(std::move(columns)),
      rows_(std::move(rows)),
      labels_(std::move(labels)),
      stages_(std::move(stages)),
      stats_(std::move(stats)),
      warnings_(std::move(warnings)) {
  if (rows_.rows() != labels_.size() || rows_.rows() != stages_.size() ||
      rows_.cols() != columns_.size()) {
    throw DimensionError("cohort table parts disagree in size");
  }
}

std::vector<size_t> CohortTable::ColumnsOf(size_t feature) const {
  std::vector<size_t> out;
  for (size_t c = 0; c < columns_.size(); ++c) {
    if (columns_[c].feature == feature) out.push_back(c);
  }
  return out;
}

std::vector<size_t> CohortTable::NumericColumns() const {
  std::vector<size_t> out;
  for (size_t c = 0; c < columns_.size(); ++c) {
    if (schema_->features()[columns_[c].feature].kind == FeatureKind::kNumeric)
      out.push_back(c);
  }
  return out;
}

std::vector<std::string> CohortTable::ColumnNames() const {
  std::vector<std::string> out;
  for (const auto& column : columns_) out.push_back(column.name);
  return out;
}

double CohortTable::RawValue(size_t row, size_t column) const {
  const double value = rows_(row, column);
  const auto& stats = stats_.numeric[columns_[column].feature];
  if (!stats) return value;
  return value * stats->std + stats->mean;
}

CohortTable Encode(std::span<const LabeledRecord> records,
                   std::shared_ptr<const FeatureSchema> schema,
                   const EncodingStats* fit_stats) {
  const auto& features = schema->features();
  const size_t num_features = features.size();
  std::vector<std::string> warnings;

  EncodingStats stats;
  if (fit_stats != nullptr) {
    if (fit_stats->categories.size() != num_features ||
        fit_stats->numeric.size() != num_features) {
      throw DimensionError("encoding stats do not match the schema");
    }
    stats = *fit_stats;
  } else {
    if (records.empty()) throw DataError("cannot fit an encoding on no records");
    stats.categories.resize(num_features);
    stats.numeric.resize(num_features);
    for (size_t f = 0; f < num_features; ++f) {
      if (features[f].kind == FeatureKind::kNominal) {
        std::set<std::string> seen;
        for (const auto& r : records) seen.insert(r.record.values[f]);
        stats.categories[f].assign(seen.begin(), seen.end());
      } else if (features[f].kind == FeatureKind::kNumeric) {
        const double n = static_cast<double>(records.size());
        double mean = 0;
        for (const auto& r : records) {
          mean += ParseNumber(r.record.values[f], features[f].name);
        }
        mean /= n;
        double ss = 0;
        for (const auto& r : records) {
          const double d =
              ParseNumber(r.record.values[f], features[f].name) - mean;
          ss += d * d;
        }
        double std = std::sqrt(ss / n);
        if (!(std > 0)) {
          warnings.push_back(fmt::format(
              "numeric feature \"{}\" has zero variance; std clamped to 1",
              features[f].name));
          std = 1.0;
        }
        stats.numeric[f] = ColumnStats{mean, std};
      }
    }
  }

  std::vector<EncodedColumn> columns;
  std::vector<size_t> first_column(num_features);
  for (size_t f = 0; f < num_features; ++f) {
    first_column[f] = columns.size();
    if (features[f].kind == FeatureKind::kNominal) {
      for (const auto& category : stats.categories[f]) {
        columns.push_back(
            {f, fmt::format("{}={}", features[f].name, category), category});
      }
    } else {
      columns.push_back({f, features[f].name, std::nullopt});
    }
  }

  Matrix rows(records.size(), columns.size());
  std::vector<int> labels(records.size());
  std::vector<Stage> stages(records.size());
  for (size_t r = 0; r < records.size(); ++r) {
    const RawRecord& record = records[r].record;
    if (record.values.size() != num_features) {
      throw DimensionError(fmt::format(
          "record on line {} has {} values, schema has {}", record.line,
          record.values.size(), num_features));
    }
    for (size_t f = 0; f < num_features; ++f) {
      const std::string& cell = record.values[f];
      switch (features[f].kind) {
        case FeatureKind::kNominal: {
          const auto& cats = stats.categories[f];
          const auto it = std::lower_bound(cats.begin(), cats.end(), cell);
          if (it != cats.end() && *it == cell) {
            rows(r, first_column[f] + (it - cats.begin())) = 1.0;
          }
          break;
        }
        case FeatureKind::kNumeric: {
          const ColumnStats& s = *stats.numeric[f];
          rows(r, first_column[f]) =
              (ParseNumber(cell, features[f].name) - s.mean) / s.std;
          break;
        }
        case FeatureKind::kOrdinal:
          rows(r, first_column[f]) = ParseNumber(cell, features[f].name);
          break;
      }
    }
    labels[r] = records[r].survived ? 1 : 0;
    const auto stage = schema->MapStage(record.stage_code);
    if (!stage) {
      throw DataError(fmt::format("unmapped stage code \"{}\" on line {}",
                                  record.stage_code, record.line));
    }
    stages[r] = *stage;
  }
  return CohortTable(std::move(schema), std::move(columns), std::move(rows),
                     std::move(labels), std::move(stages), std::move(stats),
                     std::move(warnings));
}

std::optional<double> PearsonCorrelation(std::span<const double> x,
                                         std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DimensionError("correlation inputs differ in length");
  }
  const size_t n = x.size();
  if (n < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, syy = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0) || !(syy > 0)) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::string CorrelationMatrix::ToTsv() const {
  std::string out = "feature";
  for (const auto& name : names) out += "\t" + name;
  out += "\n";
  for (size_t i = 0; i < names.size(); ++i) {
    out += names[i];
    for (size_t j = 0; j < names.size(); ++j) {
      out += values[i][j] ? fmt::format("\t{:.6f}", *values[i][j]) : "\tNA";
    }
    out += "\n";
  }
  return out;
}

CorrelationMatrix ComputeCorrelation(const CohortTable& table,
                                     std::span<const size_t> features) {
  CorrelationMatrix out;
  std::vector<std::vector<double>> columns;
  for (const size_t f : features) {
    const auto cols = table.ColumnsOf(f);
    if (cols.size() != 1) {
      throw DimensionError(fmt::format(
          "feature \"{}\" does not map to a single column",
          table.schema().features()[f].name));
    }
    out.names.push_back(table.schema().features()[f].name);
    columns.push_back(table.rows().column(cols.front()));
  }
  const size_t k = columns.size();
  out.values.assign(k, std::vector<std::optional<double>>(k));
  for (size_t i = 0; i < k; ++i) {
    const bool defined = PearsonCorrelation(columns[i], columns[i]).has_value();
    if (defined) out.values[i][i] = 1.0;
    for (size_t j = i + 1; j < k; ++j) {
      const auto r = PearsonCorrelation(columns[i], columns[j]);
      out.values[i][j] = r;
      out.values[j][i] = r;
    }
  }
  return out;
}

CorrelationMatrix ComputeCorrelation(const CohortTable& table) {
  std::vector<size_t> numeric;
  for (size_t f = 0; f < table.schema().size(); ++f) {
    if (table.schema().features()[f].kind == FeatureKind::kNumeric)
      numeric.push_back(f);
  }
  return ComputeCorrelation(table, numeric);
}

}  // namespace stagesurv::cohort
