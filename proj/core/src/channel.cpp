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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

namespace photinject {
namespace {

void require_same_basis(const FockBasis &a, const FockBasis &b, const char *what) {
    if (!(a == b)) {
        throw std::invalid_argument(std::string(what) + ": basis mismatch");
    }
}

std::vector<int> measured_content(const FockState &s, std::span<const int> modes) {
    std::vector<int> out;
    out.reserve(modes.size());
    for (int m : modes) {
        out.push_back(s[static_cast<std::size_t>(m)]);
    }
    return out;
}

void check_mode_set(std::span<const int> modes, int total_modes) {
    std::set<int> seen;
    for (int m : modes) {
        if (m < 0 || m >= total_modes) {
            throw std::invalid_argument("measured mode " + std::to_string(m) + " out of range");
        }
        if (!seen.insert(m).second) {
            throw std::invalid_argument("measured mode " + std::to_string(m) + " repeated");
        }
    }
}

}  // namespace

DensityMatrix::DensityMatrix(FockBasis basis, CMatrix matrix)
    : basis_(std::move(basis)), matrix_(std::move(matrix)) {
    const auto d = static_cast<Eigen::Index>(basis_.size());
    if (matrix_.rows() != d || matrix_.cols() != d) {
        throw std::invalid_argument("DensityMatrix: shape does not match the basis");
    }
    if (max_abs(matrix_ - matrix_.adjoint()) > kHermitianTolerance) {
        throw std::invalid_argument("DensityMatrix: not Hermitian");
    }
    if (std::abs(matrix_.trace() - Complex{1.0, 0.0}) > kTraceTolerance) {
        throw std::invalid_argument("DensityMatrix: trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(matrix_, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("DensityMatrix: eigenvalue solver failed");
    }
    if (d > 0 && es.eigenvalues().minCoeff() < -kPsdTolerance) {
        throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                    std::to_string(es.eigenvalues().minCoeff()));
    }
}

DensityMatrix DensityMatrix::pure(const FockBasis &basis, const CVector &psi) {
    if (psi.size() != static_cast<Eigen::Index>(basis.size())) {
        throw std::invalid_argument("DensityMatrix::pure: vector length mismatch");
    }
    return DensityMatrix(basis, psi * psi.adjoint());
}

DensityMatrix DensityMatrix::from_fock(const FockBasis &basis, const FockState &s) {
    const auto d = static_cast<Eigen::Index>(basis.size());
    CMatrix m = CMatrix::Zero(d, d);
    const auto i = static_cast<Eigen::Index>(basis.index(s));
    m(i, i) = 1.0;
    return DensityMatrix(basis, std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(const FockBasis &basis) {
    const auto d = static_cast<Eigen::Index>(basis.size());
    return DensityMatrix(basis, CMatrix::Identity(d, d) / static_cast<double>(d));
}

InjectionSpec::InjectionSpec(std::vector<int> measured_modes, InjectionFunction injection,
                             std::string name)
    : measured_modes_(std::move(measured_modes)),
      injection_(std::move(injection)),
      name_(std::move(name)) {
    if (measured_modes_.empty()) {
        throw std::invalid_argument("InjectionSpec: at least one measured mode required");
    }
    if (!injection_) {
        throw std::invalid_argument("InjectionSpec: empty injection function");
    }
}

InjectionSpec InjectionSpec::identity(std::vector<int> measured_modes) {
    return InjectionSpec(
        std::move(measured_modes),
        [](std::span<const int> n) { return std::vector<int>(n.begin(), n.end()); },
        "identity");
}

InjectionSpec InjectionSpec::permuted(std::vector<int> measured_modes, std::vector<int> perm) {
    if (perm.size() != measured_modes.size()) {
        throw std::invalid_argument("InjectionSpec::permuted: permutation length mismatch");
    }
    std::vector<int> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] != static_cast<int>(i)) {
            throw std::invalid_argument("InjectionSpec::permuted: not a permutation");
        }
    }
    return InjectionSpec(
        std::move(measured_modes),
        [perm](std::span<const int> n) {
            std::vector<int> out(n.size());
            for (std::size_t i = 0; i < n.size(); ++i) {
                out[i] = n[static_cast<std::size_t>(perm[i])];
            }
            return out;
        },
        "permuted");
}

void InjectionSpec::validate(int modes, int photons) const {
    check_mode_set(measured_modes_, modes);
    const int k = static_cast<int>(measured_modes_.size());
    for (int r = 0; r <= photons; ++r) {
        for (const auto &outcome : weak_compositions(r, k)) {
            const auto injected = injection_(outcome);
            if (injected.size() != outcome.size()) {
                throw std::invalid_argument("InjectionSpec: injection returned the wrong arity");
            }
            int total = 0;
            for (int v : injected) {
                if (v < 0) {
                    throw std::invalid_argument("InjectionSpec: negative injected count");
                }
                total += v;
            }
            if (total != r) {
                throw std::invalid_argument(
                    "InjectionSpec: injection does not conserve photon number (outcome total " +
                    std::to_string(r) + ", injected " + std::to_string(total) + ")");
            }
        }
    }
}

InjectionPlan::InjectionPlan(const FockBasis &basis, const InjectionSpec &spec) : basis_(basis) {
    spec.validate(basis.modes(), basis.photons());
    const auto &modes = spec.measured_modes();
    std::map<std::vector<int>, std::size_t> group_of;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const FockState &s = basis[i];
        auto outcome = measured_content(s, modes);
        auto [it, inserted] = group_of.emplace(outcome, groups_.size());
        if (inserted) {
            groups_.emplace_back();
        }
        const auto injected = spec.inject(outcome);
        std::vector<int> occ(s.occupations().begin(), s.occupations().end());
        for (std::size_t q = 0; q < modes.size(); ++q) {
            occ[static_cast<std::size_t>(modes[q])] = injected[q];
        }
        Group &g = groups_[it->second];
        g.source.push_back(static_cast<Eigen::Index>(i));
        g.target.push_back(static_cast<Eigen::Index>(basis.index(FockState(std::move(occ)))));
    }
}

CMatrix InjectionPlan::apply(const CMatrix &m) const {
    const auto d = static_cast<Eigen::Index>(basis_.size());
    if (m.rows() != d || m.cols() != d) {
        throw std::invalid_argument("InjectionPlan::apply: shape mismatch");
    }
    CMatrix out = CMatrix::Zero(d, d);
    for (const auto &g : groups_) {
        const auto size = g.source.size();
        for (std::size_t b = 0; b < size; ++b) {
            for (std::size_t a = 0; a < size; ++a) {
                out(g.target[a], g.target[b]) += m(g.source[a], g.source[b]);
            }
        }
    }
    return out;
}

DensityMatrix apply_unitary(const DensityMatrix &rho, const LiftedUnitary &w) {
    require_same_basis(rho.basis(), w.basis, "apply_unitary");
    return DensityMatrix(rho.basis(), w.matrix * rho.matrix() * w.matrix.adjoint());
}

std::map<std::vector<int>, double> outcome_probabilities(const DensityMatrix &rho,
                                                         std::span<const int> measured_modes) {
    const FockBasis &basis = rho.basis();
    check_mode_set(measured_modes, basis.modes());
    std::map<std::vector<int>, double> probs;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto idx = static_cast<Eigen::Index>(i);
        probs[measured_content(basis[i], measured_modes)] += rho.matrix()(idx, idx).real();
    }
    return probs;
}

DensityMatrix state_injection(const DensityMatrix &rho, const InjectionSpec &spec) {
    const InjectionPlan plan(rho.basis(), spec);
    return DensityMatrix(rho.basis(), plan.apply(rho.matrix()));
}

double purity(const DensityMatrix &rho) {
    // Tr[rho^2] = sum |rho_ij|^2 for Hermitian rho.
    return rho.matrix().squaredNorm();
}

namespace {

Eigen::SelfAdjointEigenSolver<CMatrix> difference_spectrum(const DensityMatrix &rho,
                                                           const DensityMatrix &sigma,
                                                           bool vectors) {
    require_same_basis(rho.basis(), sigma.basis(), "trace_distance");
    const CMatrix diff = rho.matrix() - sigma.matrix();
    const CMatrix herm = 0.5 * (diff + diff.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(
        herm, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("trace_distance: eigenvalue solver failed");
    }
    return es;
}

}  // namespace

double trace_distance(const DensityMatrix &rho, const DensityMatrix &sigma) {
    return difference_spectrum(rho, sigma, false).eigenvalues().cwiseAbs().sum();
}

CMatrix distinguishing_observable(const DensityMatrix &rho, const DensityMatrix &sigma) {
    const auto es = difference_spectrum(rho, sigma, true);
    const RVector signs =
        es.eigenvalues().unaryExpr([](double l) { return l >= 0.0 ? 1.0 : -1.0; });
    return es.eigenvectors() * signs.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

double distinguishability_bound(int dimension, double gamma) {
    if (dimension < 1) {
        throw std::invalid_argument("distinguishability_bound: dimension must be >= 1");
    }
    const double floor = 1.0 / dimension;
    constexpr double slack = 1e-12;
    if (!(gamma >= floor - slack && gamma <= 1.0 + slack)) {
        throw std::invalid_argument("distinguishability_bound: purity bound outside [1/d, 1]");
    }
    return 2.0 * std::sqrt(static_cast<double>(dimension)) * std::sqrt(std::max(0.0, gamma - floor));
}

namespace {

constexpr char kMagic[4] = {'P', 'I', 'D', 'M'};
constexpr std::uint32_t kDumpVersion = 1;

template <typename T>
void put_le(std::ostream &out, T value) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes, bytes + sizeof(T));
    }
    out.write(reinterpret_cast<const char *>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream &in) {
    unsigned char bytes[sizeof(T)];
    if (!in.read(reinterpret_cast<char *>(bytes), sizeof(T))) {
        throw std::runtime_error("density matrix dump: truncated stream");
    }
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes, bytes + sizeof(T));
    }
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

}  // namespace

void write_density_matrix(std::ostream &out, const DensityMatrix &rho) {
    out.write(kMagic, 4);
    put_le<std::uint32_t>(out, kDumpVersion);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(rho.basis().modes()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(rho.basis().photons()));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(rho.dimension()));
    for (Eigen::Index i = 0; i < rho.dimension(); ++i) {
        for (Eigen::Index j = 0; j < rho.dimension(); ++j) {
            put_le<double>(out, rho.matrix()(i, j).real());
            put_le<double>(out, rho.matrix()(i, j).imag());
        }
    }
    if (!out) {
        throw std::runtime_error("density matrix dump: write failed");
    }
}

DensityMatrix read_density_matrix(std::istream &in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        throw std::runtime_error("density matrix dump: bad magic");
    }
    if (get_le<std::uint32_t>(in) != kDumpVersion) {
        throw std::runtime_error("density matrix dump: unsupported version");
    }
    const auto modes = get_le<std::uint32_t>(in);
    const auto photons = get_le<std::uint32_t>(in);
    const auto dim = get_le<std::uint64_t>(in);
    if (modes == 0 || modes > 4096 || photons > 4096) {
        throw std::runtime_error("density matrix dump: implausible sector");
    }
    FockBasis basis(static_cast<int>(modes), static_cast<int>(photons));
    if (dim != basis.size()) {
        throw std::runtime_error("density matrix dump: dimension does not match sector");
    }
    const auto d = static_cast<Eigen::Index>(dim);
    CMatrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            const double re = get_le<double>(in);
            const double im = get_le<double>(in);
            m(i, j) = Complex{re, im};
        }
    }
    try {
        return DensityMatrix(std::move(basis), std::move(m));
    } catch (const std::invalid_argument &e) {
        throw std::runtime_error(std::string("density matrix dump: ") + e.what());
    }
}

}  // namespace photinject
