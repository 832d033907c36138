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
#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "photinject/experiment.hpp"
#include "photinject/plot.hpp"
#include "photinject/probestim.hpp"

int main(int argc, char **argv) {
    CLI::App app{"photinject: linear-optics simulator with state injection"};
    app.require_subcommand(1);

    std::string config_path;
    auto *run = app.add_subcommand("run", "Run an experiment config and write its CSV artifacts");
    run->add_option("config", config_path, "Experiment JSON")->required();

    auto *validate = app.add_subcommand("validate", "Check an experiment config without running it");
    validate->add_option("config", config_path, "Experiment JSON")->required();

    std::string csv_path;
    std::string out_path;
    photinject::PlotSpec spec;
    std::string series;
    bool gnuplot = false;
    auto *plot = app.add_subcommand("plot", "Render a CSV artifact as SVG or gnuplot input");
    plot->add_option("csv", csv_path, "Input CSV")->required();
    plot->add_option("--out,-o", out_path, "Output file")->required();
    plot->add_option("--x", spec.x, "x column")->capture_default_str();
    plot->add_option("--y", spec.y, "y column")->capture_default_str();
    plot->add_option("--series", series, "Column that splits rows into lines (default: variant, if present)");
    plot->add_option("--title", spec.title, "Plot title");
    plot->add_flag("--gnuplot", gnuplot, "Write a gnuplot script plus .dat file instead of SVG");

    auto *regimes = app.add_subcommand("regimes", "Print the simulability regime table as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*run) {
        return photinject::run_config_file(config_path, std::cout, std::cerr);
    }
    if (*validate) {
        return photinject::validate_config_file(config_path, std::cout, std::cerr);
    }
    if (*plot) {
        if (!series.empty()) {
            spec.series = series;
        }
        spec.format = gnuplot ? photinject::PlotFormat::kGnuplot : photinject::PlotFormat::kSvg;
        try {
            photinject::emit_plot(csv_path, out_path, spec);
        } catch (const std::exception &e) {
            std::cerr << "plot error: " << e.what() << "\n";
            return 2;
        }
        std::cout << "wrote " << out_path << "\n";
        return 0;
    }
    if (*regimes) {
        std::cout << photinject::regime_table_csv();
        return 0;
    }
    return 2;
}
