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
#include <span>
#include <string>
#include <vector>

#include "photinject/linalg.hpp"

namespace photinject {

enum class GateKind { kBeamSplitter, kPhaseShifter };

/// 2x2 block used for beam splitters.
///   kRotation:         [[cos t, -sin t], [sin t, cos t]]
///   kSymmetricComplex: [[cos t, i sin t], [i sin t, cos t]]
enum class BeamSplitterConvention { kRotation, kSymmetricComplex };

/// Either a reference to a parameter slot or a fixed angle in [0, 2 pi).
class GateParam {
  public:
    static GateParam slot(int index);
    static GateParam fixed(double angle);

    bool is_slot() const { return slot_ >= 0; }
    int slot_index() const { return slot_; }
    double fixed_angle() const { return angle_; }

  private:
    int slot_ = -1;
    double angle_ = 0.0;
};

class Gate {
  public:
    /// Throws std::invalid_argument if the modes coincide or are negative.
    static Gate beam_splitter(int mode_a, int mode_b, GateParam param,
                              BeamSplitterConvention convention = BeamSplitterConvention::kRotation);
    static Gate phase_shifter(int mode, GateParam param);

    GateKind kind() const { return kind_; }
    int mode_a() const { return mode_a_; }
    /// Second mode of a beam splitter; -1 for phase shifters.
    int mode_b() const { return mode_b_; }
    const GateParam &param() const { return param_; }
    BeamSplitterConvention convention() const { return convention_; }

    /// Angle this gate uses under parameter vector theta.
    double angle(std::span<const double> theta) const;

  private:
    GateKind kind_ = GateKind::kPhaseShifter;
    int mode_a_ = 0;
    int mode_b_ = -1;
    GateParam param_;
    BeamSplitterConvention convention_ = BeamSplitterConvention::kRotation;
};

/// Gates in temporal order over a fixed number of modes. The first gate in the
/// list acts first, so the circuit matrix is G_last * ... * G_first.
class ParamCircuit {
  public:
    /// parameter_count < 0 means "one more than the largest slot used".
    /// Throws std::invalid_argument when a mode is out of range, a slot is
    /// out of range, or a slot in [0, parameter_count) is never referenced.
    ParamCircuit(int modes, std::vector<Gate> gates, int parameter_count = -1);

    int modes() const { return modes_; }
    const std::vector<Gate> &gates() const { return gates_; }
    int parameter_count() const { return parameter_count_; }

    /// Copy holding only gates [first, last), with slots renumbered densely in
    /// order of first use.
    ParamCircuit slice(std::size_t first, std::size_t last) const;

    /// JSON document per the circuit schema:
    /// {"modes": m, "gates": [{"kind":"bs","modes":[i,j],"slot":a,"convention":"rotation"},
    ///                        {"kind":"ps","mode":i,"fixed":phi}, ...]}
    std::string to_json() const;
    /// Throws std::invalid_argument on malformed input.
    static ParamCircuit from_json(const std::string &text);

  private:
    int modes_;
    std::vector<Gate> gates_;
    int parameter_count_;
};

/// m x m matrix of a single gate evaluated at `value`: identity outside the
/// gate's modes. Throws std::invalid_argument if a gate mode is >= modes.
CMatrix gate_matrix(const Gate &g, double value, int modes);

/// d/dvalue of gate_matrix; zero outside the gate's modes.
CMatrix gate_matrix_derivative(const Gate &g, double value, int modes);

/// W(theta) = G_last ... G_first. Throws std::invalid_argument when
/// theta.size() != parameter_count.
CMatrix single_photon_unitary(const ParamCircuit &c, std::span<const double> theta);

/// dW/dtheta_a for every slot a, by the product rule over the gate sequence.
/// A slot used by several gates accumulates all their contributions.
std::vector<CMatrix> single_photon_jacobian(const ParamCircuit &c, std::span<const double> theta);

enum class MeshStyle {
    /// m(m-1)/2 nearest-neighbour rotation beam splitters (covers SO(m)).
    kTriangularRotations,
    /// Adds a phase slot before each beam splitter and one per mode at the end
    /// (m^2 slots, covers U(m)).
    kRotationsPlusPhases,
};

/// Triangular (Reck-style) universal mesh; throws std::invalid_argument for m < 2.
ParamCircuit universal_mesh(int modes, MeshStyle style);

/// Appends `count` parameterized rotation beam splitters on mode pairs drawn
/// uniformly from all unordered pairs. New slots follow the existing ones.
ParamCircuit append_random_beam_splitters(const ParamCircuit &c, int count, std::uint64_t seed);

/// Haar-random m x m unitary: QR of a complex Ginibre matrix with the phases of
/// diag(R) folded back into Q. Deterministic per seed.
CMatrix haar_unitary(int modes, std::uint64_t seed);

/// m x m permutation matrix P with P(perm[i], i) = 1, i.e. mode i -> perm[i].
CMatrix permutation_matrix(std::span<const int> perm);

}  // namespace photinject
