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
#include "photinject/channel.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "photinject/circuit.hpp"
#include "photinject/lift.hpp"
#include "photinject/rng.hpp"

using namespace photinject;

namespace {

DensityMatrix random_state(const FockBasis &b, int rank, std::uint64_t seed) {
    return DensityMatrix(b, oracles::random_density(static_cast<int>(b.size()), rank, seed));
}

RVector eigenvalues(const CMatrix &m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    return es.eigenvalues();
}

}  // namespace

TEST(channel, density_matrix_validation) {
    const FockBasis b(2, 1);
    CMatrix bad = CMatrix::Identity(2, 2);
    EXPECT_THROW(DensityMatrix(b, bad), std::invalid_argument);  // trace 2
    bad = CMatrix::Zero(2, 2);
    bad(0, 0) = 1.5;
    bad(1, 1) = -0.5;
    EXPECT_THROW(DensityMatrix(b, bad), std::invalid_argument);  // negative eigenvalue
    bad = 0.5 * CMatrix::Identity(2, 2);
    bad(0, 1) = 0.1;
    EXPECT_THROW(DensityMatrix(b, bad), std::invalid_argument);  // not Hermitian
    EXPECT_THROW(DensityMatrix(b, CMatrix::Identity(3, 3) / 3.0), std::invalid_argument);
    EXPECT_NEAR(purity(DensityMatrix::maximally_mixed(FockBasis(6, 3))), 1.0 / 56, 1e-15);
}

TEST(channel, apply_unitary_preserves_spectrum) {
    const FockBasis b(3, 2);
    const auto rho = random_state(b, 3, 1);
    const auto w = lift_unitary(haar_unitary(3, 2), b);
    const auto out = apply_unitary(rho, w);
    EXPECT_LT(max_abs(eigenvalues(out.matrix()) - eigenvalues(rho.matrix())), 1e-12);
    const auto id = lift_unitary(CMatrix::Identity(3, 3), b);
    EXPECT_LT(max_abs(apply_unitary(rho, id).matrix() - rho.matrix()), 1e-15);

    const CVector psi = oracles::ginibre(static_cast<int>(b.size()), 1, 5).col(0).normalized();
    EXPECT_NEAR(purity(apply_unitary(DensityMatrix::pure(b, psi), w)), 1.0, 1e-10);
    EXPECT_THROW(apply_unitary(rho, lift_unitary(CMatrix::Identity(3, 3), FockBasis(3, 1))),
                 std::invalid_argument);
}

TEST(channel, outcome_probabilities_examples) {
    const FockBasis b(2, 2);
    const auto p20 = outcome_probabilities(DensityMatrix::from_fock(b, FockState({2, 0})), std::vector<int>{0});
    EXPECT_NEAR(p20.at({2}), 1.0, 1e-15);
    EXPECT_NEAR(p20.at({0}), 0.0, 1e-15);

    CMatrix mix = CMatrix::Zero(3, 3);
    mix(static_cast<Eigen::Index>(b.index(FockState({2, 0}))), static_cast<Eigen::Index>(b.index(FockState({2, 0})))) = 0.5;
    mix(static_cast<Eigen::Index>(b.index(FockState({1, 1}))), static_cast<Eigen::Index>(b.index(FockState({1, 1})))) = 0.5;
    const auto pm = outcome_probabilities(DensityMatrix(b, mix), std::vector<int>{0});
    EXPECT_NEAR(pm.at({2}), 0.5, 1e-15);
    EXPECT_NEAR(pm.at({1}), 0.5, 1e-15);
}

TEST(channel, outcome_probabilities_match_diagonal_sums) {
    const FockBasis b(4, 3);
    const auto rho = random_state(b, 4, 9);
    const std::vector<int> modes = {1, 3};
    const auto probs = outcome_probabilities(rho, modes);
    std::map<std::vector<int>, double> ref;
    for (std::size_t i = 0; i < b.size(); ++i) {
        ref[{b[i][1], b[i][3]}] += rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    }
    double total = 0.0;
    for (const auto &[k, v] : probs) {
        EXPECT_NEAR(v, ref[k], 1e-14);
        EXPECT_GE(v, -1e-12);
        total += v;
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(channel, identity_injection_examples) {
    const FockBasis b(2, 2);
    const auto spec = InjectionSpec::identity({0});
    const auto fock = DensityMatrix::from_fock(b, FockState({1, 1}));
    EXPECT_LT(max_abs(state_injection(fock, spec).matrix() - fock.matrix()), 1e-15);

    CVector psi = CVector::Zero(3);
    psi(static_cast<Eigen::Index>(b.index(FockState({2, 0})))) = std::sqrt(0.5);
    psi(static_cast<Eigen::Index>(b.index(FockState({1, 1})))) = std::sqrt(0.5);
    const auto out = state_injection(DensityMatrix::pure(b, psi), spec);
    CMatrix expected = CMatrix::Zero(3, 3);
    expected(0, 0) = 0.5;
    expected(1, 1) = 0.5;
    EXPECT_LT(max_abs(out.matrix() - expected), 1e-15);
    EXPECT_NEAR(purity(out), 0.5, 1e-15);
}

TEST(channel, injection_matches_kraus_oracle) {
    const FockBasis b(4, 3);
    const std::vector<InjectionSpec> specs = {
        InjectionSpec::identity({0}), InjectionSpec::identity({1, 3}),
        InjectionSpec::permuted({0, 2}, {1, 0}), InjectionSpec::permuted({0, 1, 2}, {2, 0, 1})};
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto rho = random_state(b, 5, 40 + i);
        const auto out = state_injection(rho, specs[i]);
        EXPECT_LT(max_abs(out.matrix() - oracles::inject_by_kraus(rho.matrix(), b, specs[i])), 1e-14) << i;
        EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-10);
        EXPECT_GE(eigenvalues(out.matrix()).minCoeff(), -1e-9);
        EXPECT_LE(purity(out), purity(rho) + 1e-12);
    }
}

TEST(channel, identity_injection_is_idempotent) {
    const FockBasis b(3, 3);
    const auto spec = InjectionSpec::identity({2});
    const auto once = state_injection(random_state(b, 10, 3), spec);
    EXPECT_LT(max_abs(state_injection(once, spec).matrix() - once.matrix()), 1e-10);
}

TEST(channel, purity_after_injection_equals_collision_sum) {
    // Holds whenever distinct outcomes inject orthogonal states, which covers
    // identity and permuted injections.
    for (int trial = 0; trial < 10; ++trial) {
        const FockBasis b(4, 2);
        const CVector psi = oracles::ginibre(static_cast<int>(b.size()), 1, 70 + trial).col(0).normalized();
        const auto rho = DensityMatrix::pure(b, psi);
        const auto spec = trial % 2 ? InjectionSpec::permuted({0, 1}, {1, 0}) : InjectionSpec::identity({0, 1});
        double sum = 0.0;
        for (const auto &[k, p] : outcome_probabilities(rho, spec.measured_modes())) {
            sum += p * p;
        }
        EXPECT_NEAR(purity(state_injection(rho, spec)), sum, 1e-12);
    }
}

TEST(channel, rejects_non_conserving_injection) {
    const InjectionSpec grow({0}, [](std::span<const int> n) { return std::vector<int>{n[0] + 1}; }, "grow");
    EXPECT_THROW(grow.validate(2, 2), std::invalid_argument);
    const FockBasis b(2, 2);
    EXPECT_THROW(state_injection(DensityMatrix::maximally_mixed(b), grow), std::invalid_argument);
    EXPECT_THROW(InjectionSpec::identity({0, 0}).validate(2, 1), std::invalid_argument);
    EXPECT_THROW(InjectionSpec::identity({3}).validate(2, 1), std::invalid_argument);
}

TEST(channel, trace_distance_examples_and_metric) {
    const FockBasis b(3, 1);
    const auto a = DensityMatrix::from_fock(b, FockState({1, 0, 0}));
    const auto c = DensityMatrix::from_fock(b, FockState({0, 1, 0}));
    EXPECT_NEAR(trace_distance(a, a), 0.0, 1e-15);
    EXPECT_NEAR(trace_distance(a, c), 2.0, 1e-14);

    const FockBasis big(3, 2);
    for (int t = 0; t < 10; ++t) {
        const auto r = random_state(big, 2, 100 + t);
        const auto s = random_state(big, 3, 200 + t);
        const auto u = random_state(big, 6, 300 + t);
        const double d = trace_distance(r, s);
        EXPECT_NEAR(d, trace_distance(s, r), 1e-14);
        EXPECT_LE(trace_distance(r, u), d + trace_distance(s, u) + 1e-12);
        const CMatrix o = distinguishing_observable(r, s);
        EXPECT_NEAR((o * (r.matrix() - s.matrix())).trace().real(), d, 1e-10);
        EXPECT_LE(eigenvalues(o).cwiseAbs().maxCoeff(), 1.0 + 1e-12);
    }
}

TEST(channel, distinguishability_bound_values) {
    EXPECT_NEAR(distinguishability_bound(4, 0.25), 0.0, 1e-15);
    EXPECT_NEAR(distinguishability_bound(2, 1.0), 2.0, 1e-15);
    EXPECT_THROW(distinguishability_bound(4, 0.2), std::invalid_argument);
    EXPECT_THROW(distinguishability_bound(4, 1.1), std::invalid_argument);
}

TEST(channel, checkpoint_round_trip) {
    const FockBasis b(3, 2);
    const auto rho = random_state(b, 2, 77);
    std::stringstream ss;
    write_density_matrix(ss, rho);
    const auto back = read_density_matrix(ss);
    EXPECT_EQ(back.basis(), b);
    EXPECT_EQ(back.matrix(), rho.matrix());

    std::string bytes;
    {
        std::stringstream s2;
        write_density_matrix(s2, rho);
        bytes = s2.str();
    }
    EXPECT_EQ(bytes.substr(0, 4), "PIDM");
    std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
    EXPECT_THROW(read_density_matrix(truncated), std::runtime_error);
    std::stringstream garbage("XXXX");
    EXPECT_THROW(read_density_matrix(garbage), std::runtime_error);
}
