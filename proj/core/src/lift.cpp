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
#include "photinject/lift.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "photinject/parallel.hpp"
#include "photinject/permanent.hpp"

namespace photinject {
namespace {

void check_lift_args(const CMatrix &u, const FockBasis &basis) {
    if (u.rows() != u.cols() || u.rows() != basis.modes()) {
        throw std::invalid_argument("lift: matrix is " + std::to_string(u.rows()) + "x" +
                                    std::to_string(u.cols()) + ", basis has " +
                                    std::to_string(basis.modes()) + " modes");
    }
    if (basis.size() > kMaxLiftDimension) {
        throw std::length_error("lift: sector dimension " + std::to_string(basis.size()) +
                                " exceeds " + std::to_string(kMaxLiftDimension));
    }
    if (basis.photons() > kPermanentExactCap) {
        throw std::length_error("lift: photon number exceeds the permanent size cap");
    }
}

struct SectorTables {
    std::vector<std::vector<int>> modes;  // repeated mode list per state
    std::vector<double> inv_sqrt_factorial;
};

SectorTables tables_for(const FockBasis &basis) {
    SectorTables t;
    t.modes.reserve(basis.size());
    t.inv_sqrt_factorial.reserve(basis.size());
    for (const auto &s : basis.states()) {
        t.modes.push_back(repeated_modes(s));
        t.inv_sqrt_factorial.push_back(1.0 / std::sqrt(static_cast<double>(occupation_factorial(s))));
    }
    return t;
}

template <typename EntryFn>
CMatrix build_sector_matrix(const FockBasis &basis, EntryFn &&entry) {
    const auto d = static_cast<Eigen::Index>(basis.size());
    CMatrix out(d, d);
    parallel_for(basis.size(), [&](std::size_t col) {
        for (Eigen::Index row = 0; row < d; ++row) {
            out(row, static_cast<Eigen::Index>(col)) = entry(static_cast<std::size_t>(row), col);
        }
    });
    return out;
}

CMatrix gather(const CMatrix &u, const std::vector<int> &rows, const std::vector<int> &cols) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    CMatrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            a(i, j) = u(rows[i], cols[j]);
        }
    }
    return a;
}

}  // namespace

LiftedUnitary lift_unitary(const CMatrix &u, const FockBasis &basis) {
    check_lift_args(u, basis);
    const SectorTables tab = tables_for(basis);
    CMatrix m = build_sector_matrix(basis, [&](std::size_t s, std::size_t t) {
        const CMatrix a = gather(u, tab.modes[s], tab.modes[t]);
        return permanent_exact(a) * (tab.inv_sqrt_factorial[s] * tab.inv_sqrt_factorial[t]);
    });
    return {basis, std::move(m)};
}

CMatrix lift_derivative(const CMatrix &u, const CMatrix &du, const FockBasis &basis) {
    check_lift_args(u, basis);
    if (du.rows() != u.rows() || du.cols() != u.cols()) {
        throw std::invalid_argument("lift_derivative: direction shape mismatch");
    }
    const SectorTables tab = tables_for(basis);
    return build_sector_matrix(basis, [&](std::size_t s, std::size_t t) {
        const CMatrix a = gather(u, tab.modes[s], tab.modes[t]);
        const CMatrix b = gather(du, tab.modes[s], tab.modes[t]);
        return permanent_derivative(a, b) *
               (tab.inv_sqrt_factorial[s] * tab.inv_sqrt_factorial[t]);
    });
}

CVector apply_to_vector(const LiftedUnitary &w, const CVector &psi) {
    if (psi.size() != w.matrix.cols()) {
        throw std::invalid_argument("apply_to_vector: vector length " +
                                    std::to_string(psi.size()) + " != sector dimension " +
                                    std::to_string(w.matrix.cols()));
    }
    return w.matrix * psi;
}

double transition_probability(const CMatrix &u, const FockState &t, const FockState &s) {
    if (s.photons() != t.photons()) {
        throw std::invalid_argument("transition_probability: photon numbers differ");
    }
    if (u.rows() != u.cols()) {
        throw std::invalid_argument("transition_probability: matrix is not square");
    }
    const Complex per = permanent_exact(substitution_submatrix(u, s, t));
    return std::norm(per) /
           (static_cast<double>(occupation_factorial(s)) * static_cast<double>(occupation_factorial(t)));
}

}  // namespace photinject
