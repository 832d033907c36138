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
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace photinject {

inline constexpr int kConfigSchemaVersion = 1;

enum class ExperimentKind { kDofCurve, kDofMax, kPurityBounds, kBirthday, kProbestim, kPermBench };

std::string_view to_string(ExperimentKind kind);

/// Malformed, inconsistent, or unreadable configuration.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A validated experiment description. Relative paths inside the JSON resolve
/// against `base_dir`.
class ExperimentConfig {
  public:
    /// Throws ConfigError.
    static ExperimentConfig parse(std::string_view json_text, const std::filesystem::path &base_dir);
    static ExperimentConfig load(const std::filesystem::path &path);

    ExperimentKind kind() const;
    std::filesystem::path csv_path() const;

    struct Impl;
    const Impl &impl() const { return *impl_; }

  private:
    std::shared_ptr<const Impl> impl_;
};

struct AssertionResult {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct ExperimentOutcome {
    ExperimentKind kind = ExperimentKind::kDofCurve;
    std::vector<AssertionResult> assertions;
    std::vector<std::string> warnings;
    std::vector<std::string> notes;
    std::vector<std::filesystem::path> artifacts;

    bool passed() const;
};

/// Runs the experiment and writes its artifacts once everything has been
/// computed. Throws std::runtime_error on I/O failure.
ExperimentOutcome run_experiment(const ExperimentConfig &config);

/// CLI entry points. Return 0 on success, 1 when an assertion failed, 2 on a
/// configuration or I/O error; `out` receives one line per assertion.
int run_config_file(const std::filesystem::path &path, std::ostream &out, std::ostream &err);
int validate_config_file(const std::filesystem::path &path, std::ostream &out, std::ostream &err);

}  // namespace photinject
