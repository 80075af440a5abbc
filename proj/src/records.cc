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

#include "stagesurv/cohort/records.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "fmt/format.h"
#include "stagesurv/common/csv.h"
#include "stagesurv/common/errors.h"

namespace stagesurv::cohort {
namespace {

std::string_view Trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  return text;
}

bool ParsesAsNumber(std::string_view text) {
  text = Trim(text);
  double value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size() &&
         std::isfinite(value);
}

std::optional<VitalStatus> ParseVitalStatus(std::string_view text) {
  std::string lower;
  for (const char c : Trim(text)) {
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (lower == "alive") return VitalStatus::kAlive;
  if (lower == "dead") return VitalStatus::kDead;
  return std::nullopt;
}

}  // namespace

std::string ParseResult::Report() const {
  std::string out;
  for (const auto& row : dropped) {
    out += fmt::format("dropped line {}: {}\n", row.line, row.reason);
  }
  out += fmt::format("rows read: {}\nrows kept: {}\nrows dropped: {}\n",
                     total_rows, records.size(), dropped.size());
  return out;
}

ParseResult ParseDataset(std::string_view csv_text,
                         const FeatureSchema& schema) {
  const csv::Table table = csv::Parse(csv_text);

  const std::vector<std::string> required = schema.RequiredColumns();
  std::vector<size_t> positions;
  positions.reserve(required.size());
  for (const auto& column : required) {
    const auto it =
        std::find(table.header.begin(), table.header.end(), column);
    if (it == table.header.end()) {
      throw SchemaError(
          fmt::format("input header lacks schema column \"{}\"", column));
    }
    positions.push_back(static_cast<size_t>(it - table.header.begin()));
  }

  const size_t num_features = schema.size();
  const auto& features = schema.features();
  ParseResult result;
  result.total_rows = table.rows.size();
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const size_t line = table.line_numbers[r];
    if (row.size() != table.header.size()) {
      result.dropped.push_back(
          {line, fmt::format("expected {} fields, found {}",
                             table.header.size(), row.size())});
      continue;
    }
    std::string reason;
    for (size_t c = 0; c < required.size() && reason.empty(); ++c) {
      const std::string_view cell = Trim(row[positions[c]]);
      if (cell.empty()) {
        reason = fmt::format("missing value in \"{}\"", required[c]);
      } else if (c < num_features &&
                 features[c].kind != FeatureKind::kNominal &&
                 !ParsesAsNumber(cell)) {
        reason = fmt::format("unparseable number \"{}\" in \"{}\"", cell,
                             required[c]);
      }
    }
    RawRecord record;
    if (reason.empty()) {
      const auto status = ParseVitalStatus(row[positions[num_features + 1]]);
      const std::string_view months_text =
          Trim(row[positions[num_features + 2]]);
      int months = 0;
      const auto [ptr, ec] = std::from_chars(
          months_text.data(), months_text.data() + months_text.size(), months);
      if (!status) {
        reason = fmt::format("unrecognized vital status \"{}\"",
                             row[positions[num_features + 1]]);
      } else if (ec != std::errc() ||
                 ptr != months_text.data() + months_text.size() || months < 0) {
        reason = fmt::format("invalid survival months \"{}\"", months_text);
      } else {
        record.vital_status = *status;
        record.survival_months = months;
      }
    }
    if (!reason.empty()) {
      result.dropped.push_back({line, std::move(reason)});
      continue;
    }
    record.values.reserve(num_features);
    for (size_t c = 0; c < num_features; ++c) {
      record.values.emplace_back(Trim(row[positions[c]]));
    }
    record.stage_code = std::string(Trim(row[positions[num_features]]));
    record.cause_of_death = std::string(Trim(row[positions[num_features + 3]]));
    record.line = line;
    result.records.push_back(std::move(record));
  }
  return result;
}

std::string_view SurvivalLabelName(SurvivalLabel label) {
  switch (label) {
    case SurvivalLabel::kSurvived:
      return "survived";
    case SurvivalLabel::kNotSurvived:
      return "not survived";
    case SurvivalLabel::kExcluded:
      return "excluded";
  }
  return "?";
}

SurvivalLabel LabelSurvival(int survival_months, VitalStatus status,
                            std::string_view cause_of_death,
                            std::span<const std::string> cause_codes) {
  if (survival_months < 0) {
    throw ValidationError(
        fmt::format("negative survival months: {}", survival_months));
  }
  if (survival_months >= 60 && status == VitalStatus::kAlive) {
    return SurvivalLabel::kSurvived;
  }
  if (survival_months < 60 &&
      std::find(cause_codes.begin(), cause_codes.end(), cause_of_death) !=
          cause_codes.end()) {
    return SurvivalLabel::kNotSurvived;
  }
  return SurvivalLabel::kExcluded;
}

SurvivalLabel LabelSurvival(const RawRecord& record,
                            const FeatureSchema& schema) {
  return LabelSurvival(record.survival_months, record.vital_status,
                       record.cause_of_death, schema.cause_of_death_codes());
}

SurvivalLabel LabelSurvival(const RawRecord& record,
                            std::string_view cancer_type) {
  const std::string codes[] = {std::string(cancer_type)};
  return LabelSurvival(record.survival_months, record.vital_status,
                       record.cause_of_death, codes);
}

LabelingResult LabelRecords(std::vector<RawRecord> records,
                            const FeatureSchema& schema) {
  LabelingResult result;
  for (auto& record : records) {
    const SurvivalLabel label = LabelSurvival(record, schema);
    if (label == SurvivalLabel::kExcluded) {
      ++result.excluded;
      continue;
    }
    result.records.push_back(
        {std::move(record), label == SurvivalLabel::kSurvived});
  }
  return result;
}

size_t StageSplit::total() const {
  size_t n = 0;
  for (const auto& subset : subsets) n += subset.size();
  return n;
}

std::vector<std::string> StageSplit::ReportLines() const {
  const size_t n = total();
  std::vector<std::string> lines;
  for (const Stage stage : kAllStages) {
    const size_t count = (*this)[stage].size();
    const double percent = n == 0 ? 0.0 : 100.0 * count / n;
    lines.push_back(fmt::format("{} {:.1f}% (n = {})", StageName(stage),
                                percent, FormatCount(count)));
  }
  return lines;
}

StageSplit SplitByStage(std::vector<LabeledRecord> records,
                        const FeatureSchema& schema) {
  StageSplit split;
  std::set<std::string> unknown;
  for (auto& labeled : records) {
    const auto stage = schema.MapStage(labeled.record.stage_code);
    if (!stage) {
      unknown.insert(labeled.record.stage_code);
      continue;
    }
    split.subsets[static_cast<size_t>(*stage)].push_back(std::move(labeled));
  }
  if (!unknown.empty()) {
    std::string list;
    for (const auto& code : unknown) {
      if (!list.empty()) list += ", ";
      list += fmt::format("\"{}\"", code);
    }
    throw DataError(fmt::format("unmapped stage code(s) in \"{}\": {}",
                                schema.stage_column(), list));
  }
  return split;
}

std::string FormatCount(size_t count) {
  std::string digits = std::to_string(count);
  std::string out;
  const size_t lead = digits.size() % 3;
  for (size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && i % 3 == lead) out.push_back(',');
    out.push_back(digits[i]);
  }
  return out;
}

}  // namespace stagesurv::cohort
