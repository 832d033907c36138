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
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "photinject/circuit.hpp"

using namespace photinject;

// The oracles back the other suites, so check them on cases known by hand.

TEST(oracles, recursive_count) {
    EXPECT_EQ(oracles::count_states_recursive(1, 5), 1u);
    EXPECT_EQ(oracles::count_states_recursive(2, 3), 4u);
    EXPECT_EQ(oracles::count_states_recursive(6, 3), 56u);
}

TEST(oracles, laplace_permanent) {
    EXPECT_NEAR(std::abs(oracles::permanent_laplace(CMatrix::Ones(5, 5)) - 120.0), 0.0, 1e-12);
    CMatrix a(2, 2);
    a << 1, 2, 3, 4;
    EXPECT_NEAR(std::abs(oracles::permanent_laplace(a) - 10.0), 0.0, 1e-15);
}

TEST(oracles, polynomial_lift_of_a_beam_splitter) {
    // (a0 + a1)^2 / 2 acting on |2,0>: amplitudes 1/2, 1/sqrt2, 1/2 (rotation by pi/4).
    const double r = std::sqrt(0.5);
    CMatrix u(2, 2);
    u << r, -r, r, r;
    const FockBasis b(2, 2);
    const CMatrix w = oracles::lift_by_polynomial(u, b);
    EXPECT_NEAR(w(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(w(1, 0).real(), r, 1e-15);
    EXPECT_NEAR(w(2, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(w(1, 1)), 0.0, 1e-15);
}

TEST(oracles, kraus_identity_injection_dephases) {
    const FockBasis b(3, 2);
    const CMatrix rho = oracles::random_density(static_cast<int>(b.size()), 6, 1);
    const CMatrix out = oracles::inject_by_kraus(rho, b, InjectionSpec::identity({0}));
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
            const Complex expected = b[i][0] == b[j][0] ? rho(ii, jj) : Complex(0.0);
            EXPECT_EQ(out(ii, jj), expected);
        }
    }
}

TEST(oracles, random_density_is_a_state) {
    const CMatrix rho = oracles::random_density(7, 3, 2);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-14);
    EXPECT_LT(max_abs(rho - rho.adjoint()), 1e-15);
}
