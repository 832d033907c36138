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
#include "photinject/circuit.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "photinject/analysis.hpp"
#include "photinject/rng.hpp"

using namespace photinject;

namespace {

constexpr double kPi = std::numbers::pi;

// Hand-written 2x2 blocks, kept separate from the library's gate code.
CMatrix embed_bs(int m, int a, int b, double t, BeamSplitterConvention conv) {
    CMatrix g = CMatrix::Identity(m, m);
    const double c = std::cos(t), s = std::sin(t);
    if (conv == BeamSplitterConvention::kRotation) {
        g(a, a) = c, g(a, b) = -s, g(b, a) = s, g(b, b) = c;
    } else {
        g(a, a) = c, g(a, b) = Complex(0, s), g(b, a) = Complex(0, s), g(b, b) = c;
    }
    return g;
}

CMatrix direct_product(const ParamCircuit &c, std::span<const double> theta) {
    CMatrix w = CMatrix::Identity(c.modes(), c.modes());
    for (const auto &g : c.gates()) {
        const double v = g.param().is_slot() ? theta[static_cast<std::size_t>(g.param().slot_index())]
                                             : g.param().fixed_angle();
        CMatrix step;
        if (g.kind() == GateKind::kBeamSplitter) {
            step = embed_bs(c.modes(), g.mode_a(), g.mode_b(), v, g.convention());
        } else {
            step = CMatrix::Identity(c.modes(), c.modes());
            step(g.mode_a(), g.mode_a()) = std::polar(1.0, v);
        }
        w = step * w;
    }
    return w;
}

}  // namespace

TEST(circuit, gate_matrices) {
    const Gate bs = Gate::beam_splitter(0, 1, GateParam::slot(0));
    EXPECT_LT(max_abs(gate_matrix(bs, 0.0, 2) - CMatrix::Identity(2, 2)), 1e-15);
    CMatrix expected(2, 2);
    const double r = std::sqrt(0.5);
    expected << r, -r, r, r;
    EXPECT_LT(max_abs(gate_matrix(bs, kPi / 4, 2) - expected), 1e-15);

    const Gate ps = Gate::phase_shifter(0, GateParam::slot(0));
    CMatrix diag = CMatrix::Zero(2, 2);
    diag(0, 0) = -1.0;
    diag(1, 1) = 1.0;
    EXPECT_LT(max_abs(gate_matrix(ps, kPi, 2) - diag), 1e-15);

    const Gate sym = Gate::beam_splitter(1, 2, GateParam::slot(0), BeamSplitterConvention::kSymmetricComplex);
    EXPECT_LT(max_abs(gate_matrix(sym, 0.3, 3) - embed_bs(3, 1, 2, 0.3, BeamSplitterConvention::kSymmetricComplex)),
              1e-15);
}

TEST(circuit, gate_derivative_at_zero_is_the_generator) {
    const Gate bs = Gate::beam_splitter(0, 1, GateParam::slot(0));
    CMatrix gen(2, 2);
    gen << 0, -1, 1, 0;
    EXPECT_LT(max_abs(gate_matrix_derivative(bs, 0.0, 2) - gen), 1e-15);
}

TEST(circuit, construction_invariants) {
    EXPECT_THROW(ParamCircuit(2, {Gate::beam_splitter(0, 2, GateParam::slot(0))}), std::invalid_argument);
    EXPECT_THROW(Gate::beam_splitter(1, 1, GateParam::slot(0)), std::invalid_argument);
    EXPECT_THROW(GateParam::fixed(7.0), std::invalid_argument);
    EXPECT_THROW(GateParam::fixed(-0.1), std::invalid_argument);
    // Slot 1 is declared but never used.
    EXPECT_THROW(ParamCircuit(2, {Gate::beam_splitter(0, 1, GateParam::slot(0))}, 2), std::invalid_argument);
    const ParamCircuit c(2, {Gate::beam_splitter(0, 1, GateParam::slot(0))});
    EXPECT_EQ(c.parameter_count(), 1);
    const std::vector<double> wrong = {0.1, 0.2};
    EXPECT_THROW(single_photon_unitary(c, wrong), std::invalid_argument);
}

TEST(circuit, unitary_is_ordered_product) {
    const ParamCircuit empty(3, {});
    EXPECT_LT(max_abs(single_photon_unitary(empty, {}) - CMatrix::Identity(3, 3)), 1e-15);

    const ParamCircuit one(3, {Gate::beam_splitter(0, 2, GateParam::slot(0))});
    const std::vector<double> t1 = {0.7};
    EXPECT_LT(max_abs(single_photon_unitary(one, t1) - gate_matrix(one.gates()[0], 0.7, 3)), 1e-15);

    for (int trial = 0; trial < 10; ++trial) {
        const ParamCircuit c = oracles::random_circuit(4, 8, 50 + trial);
        const auto theta = sample_theta(c.parameter_count(), 60 + trial);
        const CMatrix w = single_photon_unitary(c, theta);
        EXPECT_LT(max_abs(w - direct_product(c, theta)), 1e-13);
        EXPECT_TRUE(is_unitary(w, 1e-12));
    }
}

TEST(circuit, shared_slots_and_fixed_angles) {
    const ParamCircuit c(3, {Gate::beam_splitter(0, 1, GateParam::slot(0)),
                             Gate::phase_shifter(1, GateParam::fixed(1.25)),
                             Gate::beam_splitter(1, 2, GateParam::slot(0))});
    EXPECT_EQ(c.parameter_count(), 1);
    const std::vector<double> theta = {0.4};
    EXPECT_LT(max_abs(single_photon_unitary(c, theta) - direct_product(c, theta)), 1e-14);
    const auto jac = single_photon_jacobian(c, theta);
    const double h = 1e-5;
    const std::vector<double> tp = {0.4 + h}, tm = {0.4 - h};
    const CMatrix fd = (single_photon_unitary(c, tp) - single_photon_unitary(c, tm)) / (2 * h);
    EXPECT_LT(max_abs(jac[0] - fd), 1e-9);
}

TEST(circuit, jacobian_matches_finite_differences) {
    for (int trial = 0; trial < 8; ++trial) {
        const ParamCircuit c = oracles::random_circuit(5, 30, 90 + trial);
        const auto theta = sample_theta(c.parameter_count(), trial);
        const auto jac = single_photon_jacobian(c, theta);
        ASSERT_EQ(jac.size(), 30u);
        std::vector<double> work = theta;
        const double h = 1e-5;
        for (std::size_t a = 0; a < theta.size(); ++a) {
            work[a] = theta[a] + h;
            const CMatrix plus = single_photon_unitary(c, work);
            work[a] = theta[a] - h;
            const CMatrix minus = single_photon_unitary(c, work);
            work[a] = theta[a];
            EXPECT_LT(max_abs(jac[a] - (plus - minus) / (2 * h)), 1e-8);
        }
    }
}

TEST(circuit, universal_mesh_shapes) {
    EXPECT_EQ(universal_mesh(6, MeshStyle::kTriangularRotations).parameter_count(), 15);
    const auto m2 = universal_mesh(2, MeshStyle::kTriangularRotations);
    EXPECT_EQ(m2.gates().size(), 1u);
    EXPECT_EQ(m2.gates()[0].kind(), GateKind::kBeamSplitter);
    EXPECT_EQ(universal_mesh(4, MeshStyle::kRotationsPlusPhases).parameter_count(), 16);
    EXPECT_THROW(universal_mesh(1, MeshStyle::kTriangularRotations), std::invalid_argument);
}

TEST(circuit, mesh_jacobian_rank) {
    // Rank of the realified single-photon Jacobian: m(m-1)/2 for rotations
    // (the orthogonal group), m^2 for rotations plus phases (the unitary group).
    for (auto [style, expected] : {std::pair{MeshStyle::kTriangularRotations, 6},
                                   std::pair{MeshStyle::kRotationsPlusPhases, 16}}) {
        const auto c = universal_mesh(4, style);
        const auto theta = sample_theta(c.parameter_count(), 3);
        const auto jac = single_photon_jacobian(c, theta);
        RMatrix real(32, static_cast<Eigen::Index>(jac.size()));
        for (std::size_t a = 0; a < jac.size(); ++a) {
            for (Eigen::Index k = 0; k < 16; ++k) {
                real(2 * k, static_cast<Eigen::Index>(a)) = jac[a](k % 4, k / 4).real();
                real(2 * k + 1, static_cast<Eigen::Index>(a)) = jac[a](k % 4, k / 4).imag();
            }
        }
        EXPECT_EQ(numerical_rank(real, 1e-9).rank, expected);
    }
}

TEST(circuit, slice_renumbers_slots) {
    const auto mesh = universal_mesh(4, MeshStyle::kTriangularRotations);
    const auto tail = mesh.slice(3, 6);
    EXPECT_EQ(tail.parameter_count(), 3);
    EXPECT_EQ(tail.gates().size(), 3u);
}

TEST(circuit, random_beam_splitters_are_seeded) {
    const auto base = universal_mesh(4, MeshStyle::kTriangularRotations);
    const auto a = append_random_beam_splitters(base, 5, 8);
    const auto b = append_random_beam_splitters(base, 5, 8);
    EXPECT_EQ(a.parameter_count(), base.parameter_count() + 5);
    EXPECT_EQ(a.to_json(), b.to_json());
    EXPECT_NE(a.to_json(), append_random_beam_splitters(base, 5, 9).to_json());
}

TEST(circuit, json_round_trip) {
    const auto c = append_random_beam_splitters(universal_mesh(3, MeshStyle::kRotationsPlusPhases), 2, 1);
    const auto back = ParamCircuit::from_json(c.to_json());
    EXPECT_EQ(back.to_json(), c.to_json());
    const auto theta = sample_theta(c.parameter_count(), 4);
    EXPECT_LT(max_abs(single_photon_unitary(c, theta) - single_photon_unitary(back, theta)), 0.0 + 1e-15);

    const auto parsed = ParamCircuit::from_json(
        R"({"modes":2,"gates":[{"kind":"bs","modes":[0,1],"slot":0,"convention":"symmetric"},)"
        R"({"kind":"ps","mode":1,"fixed":0.5}]})");
    EXPECT_EQ(parsed.parameter_count(), 1);
    EXPECT_EQ(parsed.gates()[0].convention(), BeamSplitterConvention::kSymmetricComplex);
    EXPECT_THROW(ParamCircuit::from_json(R"({"modes":2,"gates":[{"kind":"xx","mode":0,"slot":0}]})"),
                 std::invalid_argument);
    EXPECT_THROW(ParamCircuit::from_json("not json"), std::invalid_argument);
}

TEST(circuit, haar_unitary_is_unitary_and_seeded) {
    for (int m = 1; m <= 8; ++m) {
        const CMatrix u = haar_unitary(m, 1000 + m);
        EXPECT_LT(unitarity_error(u), 1e-12);
        EXPECT_EQ(u, haar_unitary(m, 1000 + m));
    }
}

TEST(circuit, haar_first_column_moduli_average_to_one_over_m) {
    std::vector<double> mean(4, 0.0);
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        const CMatrix u = haar_unitary(4, derive_seed(5, static_cast<std::uint64_t>(i)));
        for (int r = 0; r < 4; ++r) {
            mean[static_cast<std::size_t>(r)] += std::norm(u(r, 0)) / draws;
        }
    }
    for (double v : mean) {
        EXPECT_NEAR(v, 0.25, 0.01);
    }
}

TEST(circuit, haar_single_mode_phase_is_uniform) {
    // Chi-squared over 20 bins; the 99.9% quantile for 19 dof is about 43.8.
    const int bins = 20, draws = 20000;
    std::vector<int> counts(bins, 0);
    for (int i = 0; i < draws; ++i) {
        const double arg = std::arg(haar_unitary(1, derive_seed(6, static_cast<std::uint64_t>(i)))(0, 0));
        const int b = std::min(bins - 1, static_cast<int>((arg + kPi) / (2 * kPi) * bins));
        ++counts[static_cast<std::size_t>(b)];
    }
    double chi2 = 0.0;
    const double expected = double(draws) / bins;
    for (int c : counts) {
        chi2 += (c - expected) * (c - expected) / expected;
    }
    EXPECT_LT(chi2, 43.8);
}

TEST(circuit, haar_is_left_invariant) {
    // Two-sample KS on |u_00| with and without a fixed left rotation.
    const CMatrix v = haar_unitary(3, 999);
    std::vector<double> a, b;
    for (int i = 0; i < 10000; ++i) {
        a.push_back(std::abs(haar_unitary(3, derive_seed(7, static_cast<std::uint64_t>(i)))(0, 0)));
        b.push_back(std::abs((v * haar_unitary(3, derive_seed(8, static_cast<std::uint64_t>(i))))(0, 0)));
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) {
            ++i;
        } else {
            ++j;
        }
        d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
    }
    // Critical value at the 1% level: 1.628 sqrt(2 / n).
    EXPECT_LT(d, 1.628 * std::sqrt(2.0 / 10000));
}

TEST(circuit, permutation_matrix_maps_columns) {
    const std::vector<int> perm = {2, 0, 1};
    const CMatrix p = permutation_matrix(perm);
    EXPECT_EQ(p(2, 0), Complex(1.0));
    EXPECT_EQ(p(0, 1), Complex(1.0));
    EXPECT_EQ(p(1, 2), Complex(1.0));
    const std::vector<int> bad = {0, 0, 1};
    EXPECT_THROW(permutation_matrix(bad), std::invalid_argument);
}
