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
#include <optional>
#include <stdexcept>
#include <string>

#include "photinject/csv.hpp"

namespace photinject {

/// Raised when the CSV lacks a requested column or holds non-numeric data.
class PlotError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class PlotFormat { kSvg, kGnuplot };

struct PlotSpec {
    std::string x = "step";
    std::string y = "rank";
    /// Rows are grouped into one line per distinct value of this column. When
    /// unset, "variant" is used if the CSV has it.
    std::optional<std::string> series;
    std::string title;
    PlotFormat format = PlotFormat::kSvg;
};

/// Line plot of the table as a standalone SVG document. A table with no rows
/// renders empty axes.
std::string render_svg(const CsvTable &table, const PlotSpec &spec);

/// Whitespace-separated data (series separated by two blank lines, for
/// gnuplot's `index`) plus a script that plots it from `data_name`.
struct GnuplotFiles {
    std::string data;
    std::string script;
};
GnuplotFiles render_gnuplot(const CsvTable &table, const PlotSpec &spec,
                            const std::string &data_name);

/// Reads the CSV and writes the plot to `out` (for gnuplot, the script goes to
/// `out` and the data next to it with a .dat suffix).
void emit_plot(const std::filesystem::path &csv, const std::filesystem::path &out,
               const PlotSpec &spec);

}  // namespace photinject
