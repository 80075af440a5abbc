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

#ifndef STAGESURV_COMMON_CSV_H_
#define STAGESURV_COMMON_CSV_H_

#include <string>
#include <string_view>
#include <vector>

namespace stagesurv::csv {

using Row = std::vector<std::string>;

struct Table {
  Row header;
  std::vector<Row> rows;
  // 1-based physical line on which each row starts.
  std::vector<size_t> line_numbers;
};

// Parses RFC-4180 text: comma separated, double-quote quoting with "" escapes,
// CRLF or LF record ends, quoted fields may span lines. A leading UTF-8 BOM is
// skipped and blank lines are ignored. Throws DataError on an unterminated
// quote or when the text has no header row.
Table Parse(std::string_view text);

// Quotes the field when it contains a comma, quote or line break.
std::string Escape(std::string_view field);

std::string FormatRow(const Row& row);

}  // namespace stagesurv::csv

#endif  // STAGESURV_COMMON_CSV_H_
