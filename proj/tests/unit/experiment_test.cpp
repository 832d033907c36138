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
#include "photinject/experiment.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "photinject/csv.hpp"

using namespace photinject;
namespace fs = std::filesystem;

namespace {

/// Fresh copy of the test data directory, so artifacts land outside the source tree.
fs::path staged(const std::string &tag) {
    const fs::path dir = fs::temp_directory_path() / ("photinject_experiment_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    for (const auto &entry : fs::directory_iterator(PHOTINJECT_TEST_DATA)) {
        fs::copy_file(entry.path(), dir / entry.path().filename());
    }
    return dir;
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const fs::path &config) {
    std::ostringstream out, err;
    const int code = run_config_file(config, out, err);
    return {code, out.str(), err.str()};
}

void expect_all_cells_finite(const fs::path &csv) {
    const auto table = CsvTable::parse(read_file(csv));
    for (const auto &row : table.rows()) {
        for (const auto &cell : row) {
            if (cell.empty()) {
                continue;
            }
            char *end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() + cell.size()) {
                EXPECT_TRUE(std::isfinite(v)) << cell;
            }
            EXPECT_EQ(cell.find("nan"), std::string::npos);
            EXPECT_EQ(cell.find("inf"), std::string::npos);
        }
    }
}

int shell(const std::string &cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(experiment, every_sample_config_runs_and_passes) {
    const auto dir = staged("all");
    for (const std::string name : {"dof_curve_small", "dof_max_custom", "purity_small", "birthday_small",
                                   "probestim_small", "probestim_gurvits", "perm_bench_small"}) {
        const auto r = run(dir / (name + ".json"));
        EXPECT_EQ(r.code, 0) << name << "\n" << r.out << r.err;
        EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
        ASSERT_TRUE(fs::exists(dir / (name + ".csv"))) << name;
        expect_all_cells_finite(dir / (name + ".csv"));
    }
    EXPECT_TRUE(fs::exists(dir / "perm_bench_small.csv.timing.csv"));
    EXPECT_TRUE(fs::exists(dir / "probestim_small.json"));
}

TEST(experiment, csv_headers_are_fixed) {
    const auto dir = staged("headers");
    ASSERT_EQ(run(dir / "dof_curve_small.json").code, 0);
    ASSERT_EQ(run(dir / "purity_small.json").code, 0);
    ASSERT_EQ(run(dir / "birthday_small.json").code, 0);
    ASSERT_EQ(run(dir / "probestim_small.json").code, 0);
    auto header = [&](const std::string &name) {
        return CsvTable::parse(read_file(dir / name)).header();
    };
    EXPECT_EQ(header("dof_curve_small.csv"),
              (std::vector<std::string>{"variant", "step", "gate_count", "event", "rank"}));
    EXPECT_EQ(header("purity_small.csv"),
              (std::vector<std::string>{"layers", "trial", "purity", "collision_sum", "worst_case_bound", "haar_bound"}));
    EXPECT_EQ(header("birthday_small.csv"),
              (std::vector<std::string>{"modes", "photons", "sample", "collision_probability", "bound"}));
    EXPECT_EQ(header("probestim_small.csv"),
              (std::vector<std::string>{"s", "method", "value", "bias_corrected", "std_error", "channel_value"}));
}

TEST(experiment, dof_curve_has_both_variants) {
    const auto dir = staged("curve");
    ASSERT_EQ(run(dir / "dof_curve_small.json").code, 0);
    const auto table = CsvTable::parse(read_file(dir / "dof_curve_small.csv"));
    int with = 0, without = 0, injections = 0;
    for (const auto &row : table.rows()) {
        with += row[0] == "with-si";
        without += row[0] == "without-si";
        injections += row[3] == "injection";
    }
    // Two blocks of 6 + 3 gates, plus the start point, plus one injection.
    EXPECT_EQ(without, 19);
    EXPECT_EQ(with, 20);
    EXPECT_EQ(injections, 1);
}

TEST(experiment, malformed_configs_exit_2_without_artifacts) {
    const auto dir = staged("bad");
    for (const std::string name : {"bad_unknown_field", "bad_missing_file", "bad_syntax", "bad_version",
                                   "bad_no_seed", "bad_injection"}) {
        const auto r = run(dir / (name + ".json"));
        EXPECT_EQ(r.code, 2) << name;
        EXPECT_NE(r.err.find("config error"), std::string::npos) << name << ": " << r.err;
        std::ostringstream out, err;
        EXPECT_EQ(validate_config_file(dir / (name + ".json"), out, err), 2) << name;
    }
    EXPECT_FALSE(fs::exists(dir / "should_not_exist.csv"));
    EXPECT_EQ(run(dir / "does_not_exist.json").code, 2);
}

TEST(experiment, unwritable_output_is_an_io_error) {
    const auto dir = staged("io");
    const std::string cfg = R"({"schema_version": 1, "kind": "birthday", "seed": 1, "modes": 4,
        "photons": 1, "samples": 2, "output": {"csv": "io.json/out.csv"}})";
    write_file_atomic(dir / "io.json", cfg);
    EXPECT_EQ(run(dir / "io.json").code, 2);
}

TEST(experiment, failed_assertion_exits_1) {
    const auto dir = staged("fail");
    // Real rotations keep |2,0,0> on a 2-sphere, so the no-SI rank is 2, not 4.
    const std::string cfg = R"({"schema_version": 1, "kind": "dof-curve", "seed": 1,
        "pipeline": {"type": "blocks", "modes": 3, "photons": 2, "blocks": 1},
        "expect": {"without_si": 4}, "output": {"csv": "fail.csv"}})";
    write_file_atomic(dir / "fail.json", cfg);
    const auto r = run(dir / "fail.json");
    EXPECT_EQ(r.code, 1) << r.out;
    EXPECT_NE(r.out.find("FAIL without-si: rank matches expected value (2 vs expected 4)"), std::string::npos)
        << r.out;
    EXPECT_TRUE(fs::exists(dir / "fail.csv"));

    const std::string wrong = R"({"schema_version": 1, "kind": "dof-curve", "seed": 1,
        "pipeline": {"type": "blocks", "modes": 3, "photons": 2, "blocks": 1},
        "expect": {"with_si": 4}, "output": {"csv": "fail.csv"}})";
    write_file_atomic(dir / "wrong.json", wrong);
    EXPECT_EQ(run(dir / "wrong.json").code, 2);
}

TEST(experiment, validate_reports_kind) {
    std::ostringstream out, err;
    EXPECT_EQ(validate_config_file(fs::path(PHOTINJECT_TEST_DATA) / "probestim_small.json", out, err), 0);
    EXPECT_NE(out.str().find("probestim"), std::string::npos);
}

TEST(cli, subcommands_and_exit_codes) {
    const std::string cli = PHOTINJECT_CLI_PATH;
    const auto dir = staged("cli");
    EXPECT_EQ(shell(cli + " regimes > " + (dir / "regimes.csv").string()), 0);
    EXPECT_NE(read_file(dir / "regimes.csv").find("O(m),O(log m),no-known-efficient-classical"), std::string::npos);
    EXPECT_EQ(shell(cli + " validate " + (dir / "birthday_small.json").string() + " > /dev/null"), 0);
    EXPECT_EQ(shell(cli + " validate " + (dir / "bad_syntax.json").string() + " 2> /dev/null"), 2);
    EXPECT_EQ(shell(cli + " run " + (dir / "bad_version.json").string() + " 2> /dev/null"), 2);
    EXPECT_EQ(shell(cli + " run " + (dir / "dof_curve_small.json").string() + " > /dev/null"), 0);
    EXPECT_EQ(shell(cli + " plot " + (dir / "dof_curve_small.csv").string() + " --out " +
                    (dir / "curve.svg").string() + " > /dev/null"),
              0);
    EXPECT_NE(read_file(dir / "curve.svg").find("<polyline"), std::string::npos);
    EXPECT_EQ(shell(cli + " plot " + (dir / "dof_curve_small.csv").string() + " --gnuplot --out " +
                    (dir / "curve.gp").string() + " > /dev/null"),
              0);
    EXPECT_TRUE(fs::exists(dir / "curve.gp.dat"));

    write_file_atomic(dir / "empty.csv", "");
    EXPECT_EQ(shell(cli + " plot " + (dir / "empty.csv").string() + " --out " + (dir / "empty.svg").string() +
                    " > /dev/null"),
              0);
    EXPECT_EQ(read_file(dir / "empty.svg").find("<polyline"), std::string::npos);
    EXPECT_EQ(shell(cli + " plot " + (dir / "dof_curve_small.csv").string() + " --y purity --out " +
                    (dir / "bad.svg").string() + " 2> /dev/null"),
              2);
    EXPECT_EQ(shell(cli + " frobnicate 2> /dev/null"), 2);
}

TEST(cli, csv_is_byte_identical_across_worker_counts) {
    const std::string cli = PHOTINJECT_CLI_PATH;
    const auto dir = staged("repro");
    for (const std::string name : {"dof_max_custom", "purity_small", "probestim_gurvits"}) {
        const auto cfg = (dir / (name + ".json")).string();
        const auto csv = dir / (name + ".csv");
        ASSERT_EQ(shell("PHOTINJECT_THREADS=1 " + cli + " run " + cfg + " > /dev/null"), 0);
        const std::string one = read_file(csv);
        ASSERT_EQ(shell("PHOTINJECT_THREADS=3 " + cli + " run " + cfg + " > /dev/null"), 0);
        EXPECT_EQ(read_file(csv), one) << name;
    }
}
