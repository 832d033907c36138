// Copyright 2026 The photinject Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace photinject {

/// Shortest decimal form that parses back to the same double. Throws
/// std::domain_error for NaN or infinity.
std::string format_double(double x);

class CsvTable {
  public:
    CsvTable() = default;
    explicit CsvTable(std::vector<std::string> header);

    const std::vector<std::string> &header() const { return header_; }
    const std::vector<std::vector<std::string>> &rows() const { return rows_; }
    bool empty() const { return rows_.empty(); }

    /// Column position, or -1.
    int column(std::string_view name) const;

    /// Throws std::invalid_argument when the width differs from the header.
    void add_row(std::vector<std::string> row);

    /// Comma-separated, LF line endings, header first.
    std::string to_string() const;

    /// Minimal reader: no quoting, no embedded commas. An empty input gives an
    /// empty table with no header. Throws std::runtime_error on ragged rows.
    static CsvTable parse(std::string_view text);

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Writes to a sibling temporary file and renames it into place. Throws
/// std::runtime_error on failure.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);

/// Throws std::runtime_error when the file cannot be read.
std::string read_file(const std::filesystem::path &path);

}  // namespace photinject
