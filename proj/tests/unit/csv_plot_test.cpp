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
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "photinject/csv.hpp"
#include "photinject/plot.hpp"
#include "photinject/rng.hpp"

using namespace photinject;

namespace {

std::filesystem::path scratch(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / "photinject_csv_plot_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST(csv, doubles_round_trip) {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double x = std::ldexp(rng.uniform(-1.0, 1.0), static_cast<int>(rng.below(200)) - 100);
        EXPECT_EQ(std::stod(format_double(x)), x);
    }
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(5.0), "5");
    EXPECT_THROW(format_double(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
    EXPECT_THROW(format_double(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST(csv, table_round_trip) {
    CsvTable t({"a", "b"});
    t.add_row({"1", "x"});
    t.add_row({"2.5", ""});
    EXPECT_THROW(t.add_row({"only one"}), std::invalid_argument);
    const std::string text = t.to_string();
    EXPECT_EQ(text, "a,b\n1,x\n2.5,\n");
    const auto back = CsvTable::parse(text);
    EXPECT_EQ(back.header(), t.header());
    EXPECT_EQ(back.rows(), t.rows());
    EXPECT_EQ(back.column("b"), 1);
    EXPECT_EQ(back.column("c"), -1);
    EXPECT_TRUE(CsvTable::parse("").header().empty());
    EXPECT_THROW(CsvTable::parse("a,b\n1\n"), std::runtime_error);
}

TEST(csv, atomic_write_replaces_file) {
    const auto path = scratch("atomic.txt");
    write_file_atomic(path, "first");
    write_file_atomic(path, "second");
    EXPECT_EQ(read_file(path), "second");
    EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
    write_file_atomic(scratch("nested/dir/x.txt"), "x");
    EXPECT_EQ(read_file(scratch("nested/dir/x.txt")), "x");
    EXPECT_THROW(write_file_atomic(path / "under_a_file.txt", "x"), std::runtime_error);
    EXPECT_THROW(read_file(scratch("missing.txt")), std::runtime_error);
}

TEST(plot, svg_has_one_line_per_series) {
    const auto table = CsvTable::parse("variant,step,rank\nwith-si,0,0\nwith-si,1,3\nwithout-si,0,0\nwithout-si,1,2\n");
    PlotSpec spec;
    spec.title = "ranks";
    const std::string svg = render_svg(table, spec);
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find(">with-si<"), std::string::npos);
    EXPECT_NE(svg.find(">without-si<"), std::string::npos);
    std::size_t lines = 0;
    for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) {
        ++lines;
    }
    EXPECT_EQ(lines, 2u);
    EXPECT_EQ(svg, render_svg(table, spec));
}

TEST(plot, empty_csv_gives_empty_axes) {
    const std::string svg = render_svg(CsvTable::parse(""), PlotSpec{});
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_EQ(svg.find("<polyline"), std::string::npos);
    const auto header_only = render_svg(CsvTable::parse("step,rank\n"), PlotSpec{});
    EXPECT_EQ(header_only.find("<polyline"), std::string::npos);
}

TEST(plot, missing_column_or_bad_cell_is_an_error) {
    const auto table = CsvTable::parse("step,value\n0,1\n");
    EXPECT_THROW(render_svg(table, PlotSpec{}), PlotError);
    PlotSpec spec;
    spec.y = "value";
    spec.series = "nope";
    EXPECT_THROW(render_svg(table, spec), PlotError);
    spec.series.reset();
    EXPECT_THROW(render_svg(CsvTable::parse("step,value\n0,abc\n"), spec), PlotError);
}

TEST(plot, gnuplot_files) {
    const auto csv = scratch("curve.csv");
    write_file_atomic(csv, "variant,step,rank\na,0,1\na,1,2\nb,0,0\n");
    PlotSpec spec;
    spec.format = PlotFormat::kGnuplot;
    const auto gp = scratch("curve.gp");
    emit_plot(csv, gp, spec);
    const std::string script = read_file(gp);
    const std::string data = read_file(gp.string() + ".dat");
    EXPECT_NE(script.find("index 1"), std::string::npos);
    EXPECT_NE(data.find("# b"), std::string::npos);
    EXPECT_NE(data.find("1 2\n"), std::string::npos);
}
