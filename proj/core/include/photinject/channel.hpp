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

#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "photinject/fock.hpp"
#include "photinject/lift.hpp"
#include "photinject/linalg.hpp"

namespace photinject {

/// Tolerances enforced on every DensityMatrix.
inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kPsdTolerance = 1e-9;

/// Hermitian, positive semidefinite, unit-trace operator on one photon sector.
class DensityMatrix {
  public:
    /// Validates the matrix; throws std::invalid_argument when a tolerance above
    /// is violated or the shape does not match the basis.
    DensityMatrix(FockBasis basis, CMatrix matrix);

    static DensityMatrix pure(const FockBasis &basis, const CVector &psi);
    static DensityMatrix from_fock(const FockBasis &basis, const FockState &s);
    static DensityMatrix maximally_mixed(const FockBasis &basis);

    const FockBasis &basis() const { return basis_; }
    const CMatrix &matrix() const { return matrix_; }
    Eigen::Index dimension() const { return matrix_.rows(); }

  private:
    FockBasis basis_;
    CMatrix matrix_;
};

/// Maps measured photon counts (one per measured mode) to the counts written
/// back into those same modes.
using InjectionFunction = std::function<std::vector<int>(std::span<const int>)>;

/// Photon-counting measurement of a set of modes followed by re-injection of a
/// Fock state chosen from the outcome. Only photon-number conserving injection
/// functions are accepted.
class InjectionSpec {
  public:
    InjectionSpec(std::vector<int> measured_modes, InjectionFunction injection,
                  std::string name = "custom");

    /// Re-injects exactly what was measured: f(n) = n.
    static InjectionSpec identity(std::vector<int> measured_modes);
    /// Writes outcome[perm[i]] into measured mode i.
    static InjectionSpec permuted(std::vector<int> measured_modes, std::vector<int> perm);

    const std::vector<int> &measured_modes() const { return measured_modes_; }
    const std::string &name() const { return name_; }
    std::vector<int> inject(std::span<const int> outcome) const { return injection_(outcome); }

    /// Checks the modes are distinct and < modes, and that f conserves photon
    /// number and returns non-negative counts on every outcome reachable with
    /// `photons` photons. Throws std::invalid_argument otherwise.
    void validate(int modes, int photons) const;

  private:
    std::vector<int> measured_modes_;
    InjectionFunction injection_;
    std::string name_;
};

/// Precomputed index bookkeeping for applying one InjectionSpec on one sector.
/// apply() is linear in its argument and accepts any square matrix, which is
/// what derivative propagation needs.
class InjectionPlan {
  public:
    InjectionPlan(const FockBasis &basis, const InjectionSpec &spec);

    CMatrix apply(const CMatrix &m) const;
    const FockBasis &basis() const { return basis_; }

  private:
    FockBasis basis_;
    // Basis positions sharing one measurement outcome, with the position each
    // maps to after re-injection.
    struct Group {
        std::vector<Eigen::Index> source;
        std::vector<Eigen::Index> target;
    };
    std::vector<Group> groups_;
};

/// W rho W^dagger. Throws std::invalid_argument on a basis mismatch.
DensityMatrix apply_unitary(const DensityMatrix &rho, const LiftedUnitary &w);

/// Pr[n] = Tr[Pi_n rho] for every outcome tuple reachable in the sector (zero
/// entries included). Throws std::invalid_argument for an invalid mode set.
std::map<std::vector<int>, double> outcome_probabilities(const DensityMatrix &rho,
                                                         std::span<const int> measured_modes);

/// sum_n K_n rho K_n^dagger with K_n = |f(n)><n| on the measured modes (identity
/// elsewhere). For f(n) = n this is photon-number dephasing of those modes.
DensityMatrix state_injection(const DensityMatrix &rho, const InjectionSpec &spec);

/// Tr[rho^2].
double purity(const DensityMatrix &rho);

/// ||rho - sigma||_1, the sum of absolute eigenvalues of the difference.
double trace_distance(const DensityMatrix &rho, const DensityMatrix &sigma);

/// O = sum_i sign(lambda_i) |e_i><e_i| over the eigenpairs of rho - sigma; it
/// has unit operator norm and attains Tr[O (rho - sigma)] = ||rho - sigma||_1.
CMatrix distinguishing_observable(const DensityMatrix &rho, const DensityMatrix &sigma);

/// 2 sqrt(d) sqrt(gamma - 1/d): the largest trace-norm distance between two
/// d-dimensional states whose purities are at most gamma. Throws
/// std::invalid_argument when gamma is outside [1/d, 1].
double distinguishability_bound(int dimension, double gamma);

/// Binary checkpoint: "PIDM", u32 version (1), u32 modes, u32 photons,
/// u64 dimension, then dimension^2 (re, im) float64 pairs in row-major order.
/// All integers and floats little-endian.
void write_density_matrix(std::ostream &out, const DensityMatrix &rho);
/// Throws std::runtime_error on a truncated or malformed stream.
DensityMatrix read_density_matrix(std::istream &in);

}  // namespace photinject
