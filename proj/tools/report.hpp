// Copyright 2026 The Thermo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Report plumbing: locale-free number formatting, CSV tables and atomic
// file output.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "thermo/extended_real.hpp"

namespace thermo::app {

/// Shortest-round-trip-safe text with 17 significant digits; infinities as
/// "+inf" / "-inf", NaN as "nan".
std::string format_number(double v);
std::string format_number(const ExtendedReal& v);

/// A JSON number, or the format_number string for non-finite values.
nlohmann::json json_number(double v);
nlohmann::json json_number(const ExtendedReal& v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header = {}) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  std::size_t row_count() const { return rows_.size(); }
  const std::vector<std::string>& header() const { return header_; }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes to a sibling temporary file, then renames over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace thermo::app
