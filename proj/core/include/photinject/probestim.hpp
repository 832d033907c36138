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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "photinject/fock.hpp"
#include "photinject/linalg.hpp"

namespace photinject {

/// Static (m+k)-mode unitary reproducing a pipeline of k+1 linear-optical
/// layers separated by identity injections on one physical mode.
///
/// Mode layout: at the input the k ancillas occupy modes 0..k-1 and the
/// primary modes k..k+m-1; at the output the primary modes are 0..m-1 and the
/// measured slots m..m+k-1. Ancilla slot k-1-j carries the photons re-injected
/// by injection j, and output slot m+k-1-j holds the photons it measured.
struct EquivalentModel {
    int modes = 0;
    int injections = 0;
    int measured_mode = 0;
    std::vector<CMatrix> layers;
    /// One block-embedded (m+k)x(m+k) factor per layer, in application order;
    /// equivalent_unitary = factors[k] * ... * factors[0].
    std::vector<CMatrix> factors;
    CMatrix equivalent_unitary;

    int total_modes() const { return modes + injections; }
    int ancilla_slot(int injection) const { return injections - 1 - injection; }
    int measured_slot(int injection) const { return modes + injections - 1 - injection; }
};

/// Throws std::invalid_argument when the list is empty, a layer is not square
/// and unitary (1e-10), layers differ in size, or measured_mode is out of range.
EquivalentModel build_equivalent(std::vector<CMatrix> layers, int measured_mode = 0);

/// Photons measured at each injection, in temporal order.
struct Pattern {
    std::vector<int> counts;
    int total() const;
    friend bool operator==(const Pattern &, const Pattern &) = default;
};

/// All k-tuples summing to r, descending lexicographic order. Throws
/// std::invalid_argument for k < 1 or r < 0.
std::vector<Pattern> enumerate_patterns(int k, int r);

/// Pr_t[p, s] = |per(U~[(s,p), (p,t)])|^2 / ((p!)^2 s! t!). Throws
/// std::invalid_argument on shape or photon-number mismatch and
/// std::length_error when n + r exceeds the permanent cap.
double joint_probability(const EquivalentModel &em, const FockState &t, const Pattern &p,
                         const FockState &s);

struct ProbabilityMethod {
    enum class Kind { kExact, kGurvits } kind = Kind::kExact;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;

    static ProbabilityMethod exact() { return {}; }
    static ProbabilityMethod gurvits(std::uint64_t samples, std::uint64_t seed) {
        return {Kind::kGurvits, samples, seed};
    }
};

struct ProbabilityEstimate {
    double value = 0.0;
    /// Gurvits only: value minus the summed estimator variances, which removes
    /// the upward bias of squaring an unbiased amplitude estimate.
    std::optional<double> bias_corrected;
    /// Gurvits only: propagated standard error of value.
    std::optional<double> std_error;
    std::size_t patterns = 0;
};

/// Pr_t[s] = sum over every pattern p in [0, n]^k of Pr_t[p, s]. In Gurvits
/// mode the permanent of pattern i is estimated from derive_seed(seed, i).
ProbabilityEstimate output_probability(const EquivalentModel &em, const FockState &t,
                                       const FockState &s,
                                       const ProbabilityMethod &method = ProbabilityMethod::exact());

/// Reference distribution by direct density-matrix simulation of the same
/// pipeline: lift each layer, dephase the measured mode between layers, and
/// return the diagonal over FockBasis(m, |t|).
std::vector<double> channel_output_distribution(const std::vector<CMatrix> &layers,
                                                const FockState &t, int measured_mode = 0);

enum class InjectionScale { kConstant, kLogarithmic, kLinear };
enum class PhotonScale { kConstant, kLogarithmic, kLinear, kLinearLog, kQuadratic };
enum class Regime { kEfficientClassical, kNoKnownEfficientClassical, kUnreachable };

inline constexpr std::array<InjectionScale, 3> kInjectionScales = {
    InjectionScale::kConstant, InjectionScale::kLogarithmic, InjectionScale::kLinear};
inline constexpr std::array<PhotonScale, 5> kPhotonScales = {
    PhotonScale::kConstant, PhotonScale::kLogarithmic, PhotonScale::kLinear,
    PhotonScale::kLinearLog, PhotonScale::kQuadratic};

/// Simulability of output-probability estimation with k injections and r
/// measured photons in total.
Regime classify_regime(InjectionScale k, PhotonScale r);

/// The same lookup for adaptive linear optics, which only defines r up to O(m);
/// returns nullopt beyond that.
std::optional<Regime> classify_regime_alo(InjectionScale k, PhotonScale r);

/// Accepts "1", "const", "O(1)", "log m", "logm", "O(log m)", "m", "linear",
/// "O(m)", and for r also "m log m", "O(m log m)", "m^2", "O(m^2)".
/// Throws std::invalid_argument otherwise.
InjectionScale parse_injection_scale(std::string_view label);
PhotonScale parse_photon_scale(std::string_view label);

std::string_view to_string(InjectionScale k);
std::string_view to_string(PhotonScale r);
std::string_view to_string(Regime regime);

/// CSV with header "k,r,regime" and one row per (k, r) cell.
std::string regime_table_csv();

}  // namespace photinject
