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

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "photinject/channel.hpp"
#include "photinject/circuit.hpp"
#include "photinject/fock.hpp"
#include "photinject/linalg.hpp"

namespace photinject {

using PipelineStage = std::variant<ParamCircuit, InjectionSpec>;

/// Linear-optical blocks interleaved with state injections, acting on a Fock
/// input. Each block owns a contiguous range of the global parameter vector,
/// in stage order.
class PipelineCircuit {
  public:
    /// Throws std::invalid_argument when a block's mode count differs from the
    /// input's or an injection is invalid for the sector.
    PipelineCircuit(FockState input, std::vector<PipelineStage> stages);

    int modes() const { return static_cast<int>(input_.modes()); }
    int photons() const { return input_.photons(); }
    const FockState &input() const { return input_; }
    const FockBasis &basis() const { return basis_; }
    const std::vector<PipelineStage> &stages() const { return stages_; }
    int parameter_count() const { return parameter_count_; }
    /// First global slot of stage i (meaningful for circuit stages).
    int parameter_offset(std::size_t stage) const { return offsets_[stage]; }
    bool has_injections() const;

    /// Same pipeline with every injection stage removed.
    PipelineCircuit without_injections() const;

  private:
    FockState input_;
    FockBasis basis_;
    std::vector<PipelineStage> stages_;
    std::vector<int> offsets_;
    int parameter_count_ = 0;
};

/// Output state rho(theta). Throws std::invalid_argument on a length mismatch.
CMatrix pipeline_output(const PipelineCircuit &pc, std::span<const double> theta);

/// Real Jacobian of theta -> rho(theta), with rho flattened column by column
/// and each entry split into (re, im): shape (2 d^2) x p. Derivatives are
/// exact: the product rule through every unitary conjugation (using the lifted
/// single-photon Jacobian) and linearity through every injection.
RMatrix state_jacobian(const PipelineCircuit &pc, std::span<const double> theta);

/// Relative rank tolerance: singular values <= tol * sigma_max count as zero.
inline constexpr double kDefaultRankTolerance = 1e-7;

struct RankResult {
    std::vector<double> singular_values;  // descending
    int rank = 0;
};

/// SVD-based numerical rank of a real matrix.
RankResult numerical_rank(const RMatrix &m, double tolerance);

struct DoFReport {
    std::vector<double> theta;
    std::vector<double> singular_values;
    int rank = 0;
    double tolerance = kDefaultRankTolerance;
};

/// Rank of state_jacobian at theta. Throws std::invalid_argument unless
/// tolerance is in (0, 1).
DoFReport dof_at(const PipelineCircuit &pc, std::span<const double> theta,
                 double tolerance = kDefaultRankTolerance);

/// Uniform draw from [0, 2 pi)^p.
std::vector<double> sample_theta(int parameter_count, std::uint64_t seed);

struct DoFMaxReport {
    int dof_max = 0;
    std::vector<DoFReport> trials;
    /// False when trials disagreed on the rank.
    bool consistent = true;
};

/// Max rank over `trials` uniform draws; draw i uses derive_seed(seed, i).
DoFMaxReport dof_max(const PipelineCircuit &pc, int trials, std::uint64_t seed,
                     double tolerance = kDefaultRankTolerance);

enum class CurveEvent { kStart, kGate, kInjection };

struct CurvePoint {
    int step = 0;        // 0 for the input state, then one per gate or injection
    int gate_count = 0;  // gates applied so far
    CurveEvent event = CurveEvent::kStart;
    int rank = 0;
};

/// Rank of the intermediate state after every gate and every injection, at
/// theta = sample_theta(p, seed).
std::vector<CurvePoint> dof_curve(const PipelineCircuit &pc, std::uint64_t seed,
                                  double tolerance = kDefaultRankTolerance);

struct BlockPipelineOptions {
    int modes = 6;
    int photons = 3;
    int blocks = 3;
    /// Random parameterized beam splitters appended to every universal block.
    int extra_beam_splitters = 5;
    bool with_injections = true;
    int measured_mode = 0;
    std::uint64_t seed = 0;
};

/// Input |n,0,...,0>, then `blocks` triangular rotation meshes (each followed by
/// its extra random beam splitters), separated by identity injections on
/// measured_mode when with_injections is set.
PipelineCircuit make_block_pipeline(const BlockPipelineOptions &options);

struct PurityBoundReport {
    int modes = 0;
    int photons = 0;
    int layers = 0;
    std::vector<double> purities;
    /// Sum_i Pr[i]^2 of the first injection's outcome distribution, per trial.
    std::vector<double> first_layer_collision_sums;
    double worst_case_bound = 0.0;       // 1/(n+1)^L
    std::optional<double> haar_bound;    // ((m - 2n^2)/(sqrt2 m))^{2L} when m > 2n^2
    double mean = 0.0;
    double std_error = 0.0;
    bool worst_case_holds = true;
    std::optional<bool> haar_bound_holds;  // mean >= haar_bound - 3 std_error
};

/// L layers of (Haar unitary, identity injection on `measured_mode`) applied to
/// |1,..,1,0,..,0> (or |n,0,..,0> when n > m).
PurityBoundReport purity_bound_experiment(int modes, int photons, int layers, int trials,
                                          std::uint64_t seed, int measured_mode = 0);

struct BirthdayReport {
    int modes = 0;
    int photons = 0;
    std::vector<double> collision_probabilities;
    double mean = 0.0;
    double std_error = 0.0;
    double bound = 0.0;  // 2 n^2 / m
    bool below_bound = true;
};

/// Exact probability that some output mode holds two or more photons, for
/// input |1,..,1,0,..,0> under Haar-random unitaries. Requires n <= m.
BirthdayReport birthday_check(int modes, int photons, int samples, std::uint64_t seed);

/// Probability of a multi-photon collision in the output of U applied to t.
double collision_probability(const CMatrix &u, const FockState &t);

}  // namespace photinject
