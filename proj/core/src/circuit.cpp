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

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

#include "json_io.hpp"
#include "photinject/rng.hpp"

namespace photinject {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_mode(int mode, int modes) {
    if (mode < 0 || mode >= modes) {
        throw std::invalid_argument("gate mode " + std::to_string(mode) +
                                    " out of range for " + std::to_string(modes) + " modes");
    }
}

/// 2x2 block (or its derivative) of a beam splitter.
struct Block2 {
    Complex a00, a01, a10, a11;
};

Block2 bs_block(BeamSplitterConvention conv, double t, bool derivative) {
    const double c = std::cos(t);
    const double s = std::sin(t);
    const Complex i{0.0, 1.0};
    if (conv == BeamSplitterConvention::kRotation) {
        if (derivative) {
            return {-s, -c, c, -s};
        }
        return {c, -s, s, c};
    }
    if (derivative) {
        return {-s, i * c, i * c, -s};
    }
    return {c, i * s, i * s, c};
}

}  // namespace

GateParam GateParam::slot(int index) {
    if (index < 0) {
        throw std::invalid_argument("GateParam: negative slot index");
    }
    GateParam p;
    p.slot_ = index;
    return p;
}

GateParam GateParam::fixed(double angle) {
    if (!std::isfinite(angle) || angle < 0.0 || angle >= kTwoPi) {
        throw std::invalid_argument("GateParam: fixed angle must lie in [0, 2pi)");
    }
    GateParam p;
    p.angle_ = angle;
    return p;
}

Gate Gate::beam_splitter(int mode_a, int mode_b, GateParam param,
                         BeamSplitterConvention convention) {
    if (mode_a < 0 || mode_b < 0) {
        throw std::invalid_argument("beam splitter: negative mode index");
    }
    if (mode_a == mode_b) {
        throw std::invalid_argument("beam splitter: modes must be distinct");
    }
    Gate g;
    g.kind_ = GateKind::kBeamSplitter;
    g.mode_a_ = mode_a;
    g.mode_b_ = mode_b;
    g.param_ = param;
    g.convention_ = convention;
    return g;
}

Gate Gate::phase_shifter(int mode, GateParam param) {
    if (mode < 0) {
        throw std::invalid_argument("phase shifter: negative mode index");
    }
    Gate g;
    g.kind_ = GateKind::kPhaseShifter;
    g.mode_a_ = mode;
    g.param_ = param;
    return g;
}

double Gate::angle(std::span<const double> theta) const {
    if (!param_.is_slot()) {
        return param_.fixed_angle();
    }
    return theta[static_cast<std::size_t>(param_.slot_index())];
}

ParamCircuit::ParamCircuit(int modes, std::vector<Gate> gates, int parameter_count)
    : modes_(modes), gates_(std::move(gates)), parameter_count_(parameter_count) {
    if (modes_ < 1) {
        throw std::invalid_argument("ParamCircuit: modes must be >= 1");
    }
    int max_slot = -1;
    for (const auto &g : gates_) {
        check_mode(g.mode_a(), modes_);
        if (g.kind() == GateKind::kBeamSplitter) {
            check_mode(g.mode_b(), modes_);
        }
        if (g.param().is_slot()) {
            max_slot = std::max(max_slot, g.param().slot_index());
        }
    }
    if (parameter_count_ < 0) {
        parameter_count_ = max_slot + 1;
    }
    std::vector<bool> used(static_cast<std::size_t>(parameter_count_), false);
    for (const auto &g : gates_) {
        if (!g.param().is_slot()) {
            continue;
        }
        const int s = g.param().slot_index();
        if (s >= parameter_count_) {
            throw std::invalid_argument("ParamCircuit: slot " + std::to_string(s) +
                                        " >= parameter count " +
                                        std::to_string(parameter_count_));
        }
        used[static_cast<std::size_t>(s)] = true;
    }
    for (std::size_t s = 0; s < used.size(); ++s) {
        if (!used[s]) {
            throw std::invalid_argument("ParamCircuit: slot " + std::to_string(s) +
                                        " is not bound to any gate");
        }
    }
}

ParamCircuit ParamCircuit::slice(std::size_t first, std::size_t last) const {
    if (first > last || last > gates_.size()) {
        throw std::out_of_range("ParamCircuit::slice: bad range");
    }
    std::map<int, int> renumber;
    std::vector<Gate> out;
    for (std::size_t k = first; k < last; ++k) {
        const Gate &g = gates_[k];
        if (!g.param().is_slot()) {
            out.push_back(g);
            continue;
        }
        auto [it, inserted] =
            renumber.emplace(g.param().slot_index(), static_cast<int>(renumber.size()));
        const GateParam p = GateParam::slot(it->second);
        out.push_back(g.kind() == GateKind::kBeamSplitter
                          ? Gate::beam_splitter(g.mode_a(), g.mode_b(), p, g.convention())
                          : Gate::phase_shifter(g.mode_a(), p));
    }
    return ParamCircuit(modes_, std::move(out));
}

CMatrix gate_matrix(const Gate &g, double value, int modes) {
    check_mode(g.mode_a(), modes);
    CMatrix u = CMatrix::Identity(modes, modes);
    if (g.kind() == GateKind::kPhaseShifter) {
        u(g.mode_a(), g.mode_a()) = std::polar(1.0, value);
        return u;
    }
    check_mode(g.mode_b(), modes);
    const Block2 b = bs_block(g.convention(), value, false);
    u(g.mode_a(), g.mode_a()) = b.a00;
    u(g.mode_a(), g.mode_b()) = b.a01;
    u(g.mode_b(), g.mode_a()) = b.a10;
    u(g.mode_b(), g.mode_b()) = b.a11;
    return u;
}

CMatrix gate_matrix_derivative(const Gate &g, double value, int modes) {
    check_mode(g.mode_a(), modes);
    CMatrix d = CMatrix::Zero(modes, modes);
    if (g.kind() == GateKind::kPhaseShifter) {
        d(g.mode_a(), g.mode_a()) = Complex{0.0, 1.0} * std::polar(1.0, value);
        return d;
    }
    check_mode(g.mode_b(), modes);
    const Block2 b = bs_block(g.convention(), value, true);
    d(g.mode_a(), g.mode_a()) = b.a00;
    d(g.mode_a(), g.mode_b()) = b.a01;
    d(g.mode_b(), g.mode_a()) = b.a10;
    d(g.mode_b(), g.mode_b()) = b.a11;
    return d;
}

namespace {

void check_theta(const ParamCircuit &c, std::span<const double> theta) {
    if (theta.size() != static_cast<std::size_t>(c.parameter_count())) {
        throw std::invalid_argument("parameter vector has length " +
                                    std::to_string(theta.size()) + ", circuit expects " +
                                    std::to_string(c.parameter_count()));
    }
}

/// u <- G u, touching only the rows the gate acts on.
void apply_gate_left(const Gate &g, double value, CMatrix &u) {
    if (g.kind() == GateKind::kPhaseShifter) {
        u.row(g.mode_a()) *= std::polar(1.0, value);
        return;
    }
    const Block2 b = bs_block(g.convention(), value, false);
    const Eigen::RowVectorXcd ra = u.row(g.mode_a());
    const Eigen::RowVectorXcd rb = u.row(g.mode_b());
    u.row(g.mode_a()) = b.a00 * ra + b.a01 * rb;
    u.row(g.mode_b()) = b.a10 * ra + b.a11 * rb;
}

}  // namespace

CMatrix single_photon_unitary(const ParamCircuit &c, std::span<const double> theta) {
    check_theta(c, theta);
    CMatrix u = CMatrix::Identity(c.modes(), c.modes());
    for (const auto &g : c.gates()) {
        apply_gate_left(g, g.angle(theta), u);
    }
    return u;
}

std::vector<CMatrix> single_photon_jacobian(const ParamCircuit &c, std::span<const double> theta) {
    check_theta(c, theta);
    const int m = c.modes();
    const auto &gates = c.gates();
    std::vector<CMatrix> jac(static_cast<std::size_t>(c.parameter_count()),
                             CMatrix::Zero(m, m));
    if (jac.empty()) {
        return jac;
    }
    // prefix[k] = G_{k-1} ... G_0
    std::vector<CMatrix> prefix;
    prefix.reserve(gates.size());
    CMatrix acc = CMatrix::Identity(m, m);
    for (const auto &g : gates) {
        prefix.push_back(acc);
        apply_gate_left(g, g.angle(theta), acc);
    }
    // Walk backwards keeping suffix = G_last ... G_{k+1}.
    CMatrix suffix = CMatrix::Identity(m, m);
    for (std::size_t k = gates.size(); k-- > 0;) {
        const Gate &g = gates[k];
        const double v = g.angle(theta);
        if (g.param().is_slot()) {
            const CMatrix d = gate_matrix_derivative(g, v, m);
            jac[static_cast<std::size_t>(g.param().slot_index())] += suffix * (d * prefix[k]);
        }
        suffix = suffix * gate_matrix(g, v, m);
    }
    return jac;
}

ParamCircuit universal_mesh(int modes, MeshStyle style) {
    if (modes < 2) {
        throw std::invalid_argument("universal_mesh: need at least 2 modes");
    }
    std::vector<Gate> gates;
    int slot = 0;
    for (int diag = 1; diag < modes; ++diag) {
        for (int j = diag - 1; j >= 0; --j) {
            if (style == MeshStyle::kRotationsPlusPhases) {
                gates.push_back(Gate::phase_shifter(j, GateParam::slot(slot++)));
            }
            gates.push_back(Gate::beam_splitter(j, j + 1, GateParam::slot(slot++)));
        }
    }
    if (style == MeshStyle::kRotationsPlusPhases) {
        for (int j = 0; j < modes; ++j) {
            gates.push_back(Gate::phase_shifter(j, GateParam::slot(slot++)));
        }
    }
    return ParamCircuit(modes, std::move(gates));
}

ParamCircuit append_random_beam_splitters(const ParamCircuit &c, int count, std::uint64_t seed) {
    if (count < 0) {
        throw std::invalid_argument("append_random_beam_splitters: negative count");
    }
    const int m = c.modes();
    if (count > 0 && m < 2) {
        throw std::invalid_argument("append_random_beam_splitters: need at least 2 modes");
    }
    Rng rng(seed);
    std::vector<Gate> gates = c.gates();
    int slot = c.parameter_count();
    const auto pairs = static_cast<std::uint64_t>(m) * (m - 1) / 2;
    for (int k = 0; k < count; ++k) {
        auto r = rng.below(pairs);
        int a = 0;
        while (r >= static_cast<std::uint64_t>(m - 1 - a)) {
            r -= static_cast<std::uint64_t>(m - 1 - a);
            ++a;
        }
        const int b = a + 1 + static_cast<int>(r);
        gates.push_back(Gate::beam_splitter(a, b, GateParam::slot(slot++)));
    }
    return ParamCircuit(m, std::move(gates), slot);
}

CMatrix haar_unitary(int modes, std::uint64_t seed) {
    if (modes < 1) {
        throw std::invalid_argument("haar_unitary: modes must be >= 1");
    }
    Rng rng(seed);
    CMatrix z(modes, modes);
    const double scale = std::sqrt(0.5);
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
        for (Eigen::Index i = 0; i < z.rows(); ++i) {
            const double re = rng.normal();
            const double im = rng.normal();
            z(i, j) = Complex{re, im} * scale;
        }
    }
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < modes; ++j) {
        const double mag = std::abs(r(j, j));
        const Complex phase = mag > 0.0 ? r(j, j) / mag : Complex{1.0, 0.0};
        q.col(j) *= phase;
    }
    return q;
}

CMatrix permutation_matrix(std::span<const int> perm) {
    const auto m = static_cast<Eigen::Index>(perm.size());
    std::vector<bool> seen(perm.size(), false);
    CMatrix p = CMatrix::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const int target = perm[static_cast<std::size_t>(i)];
        if (target < 0 || target >= m || seen[static_cast<std::size_t>(target)]) {
            throw std::invalid_argument("permutation_matrix: not a permutation");
        }
        seen[static_cast<std::size_t>(target)] = true;
        p(target, i) = 1.0;
    }
    return p;
}

namespace detail {

nlohmann::json circuit_to_json(const ParamCircuit &c) {
    nlohmann::json gates = nlohmann::json::array();
    for (const auto &g : c.gates()) {
        nlohmann::json jg;
        if (g.kind() == GateKind::kBeamSplitter) {
            jg["kind"] = "bs";
            jg["modes"] = {g.mode_a(), g.mode_b()};
            jg["convention"] = g.convention() == BeamSplitterConvention::kRotation
                                   ? "rotation"
                                   : "symmetric";
        } else {
            jg["kind"] = "ps";
            jg["mode"] = g.mode_a();
        }
        if (g.param().is_slot()) {
            jg["slot"] = g.param().slot_index();
        } else {
            jg["fixed"] = g.param().fixed_angle();
        }
        gates.push_back(std::move(jg));
    }
    return {{"modes", c.modes()}, {"parameters", c.parameter_count()}, {"gates", gates}};
}

ParamCircuit circuit_from_json(const nlohmann::json &j) {
    auto fail = [](const std::string &msg) -> void {
        throw std::invalid_argument("circuit JSON: " + msg);
    };
    if (!j.is_object()) {
        fail("expected an object");
    }
    if (!j.contains("modes") || !j["modes"].is_number_integer()) {
        fail("\"modes\" must be an integer");
    }
    const int modes = j["modes"].get<int>();
    std::vector<Gate> gates;
    if (j.contains("gates")) {
        if (!j["gates"].is_array()) {
            fail("\"gates\" must be an array");
        }
        for (const auto &jg : j["gates"]) {
            if (!jg.is_object() || !jg.contains("kind") || !jg["kind"].is_string()) {
                fail("each gate needs a string \"kind\"");
            }
            const bool has_slot = jg.contains("slot");
            const bool has_fixed = jg.contains("fixed");
            if (has_slot == has_fixed) {
                fail("each gate needs exactly one of \"slot\" or \"fixed\"");
            }
            GateParam param = GateParam::slot(0);
            if (has_slot) {
                if (!jg["slot"].is_number_integer()) {
                    fail("\"slot\" must be an integer");
                }
                param = GateParam::slot(jg["slot"].get<int>());
            } else {
                if (!jg["fixed"].is_number()) {
                    fail("\"fixed\" must be a number");
                }
                param = GateParam::fixed(jg["fixed"].get<double>());
            }
            const std::string kind = jg["kind"].get<std::string>();
            if (kind == "bs") {
                if (!jg.contains("modes") || !jg["modes"].is_array() || jg["modes"].size() != 2 ||
                    !jg["modes"][0].is_number_integer() || !jg["modes"][1].is_number_integer()) {
                    fail("beam splitter needs \"modes\": [i, j]");
                }
                auto conv = BeamSplitterConvention::kRotation;
                if (jg.contains("convention")) {
                    const auto name = jg["convention"].get<std::string>();
                    if (name == "symmetric") {
                        conv = BeamSplitterConvention::kSymmetricComplex;
                    } else if (name != "rotation") {
                        fail("unknown convention \"" + name + "\"");
                    }
                }
                gates.push_back(Gate::beam_splitter(jg["modes"][0].get<int>(),
                                                    jg["modes"][1].get<int>(), param, conv));
            } else if (kind == "ps") {
                if (!jg.contains("mode") || !jg["mode"].is_number_integer()) {
                    fail("phase shifter needs an integer \"mode\"");
                }
                gates.push_back(Gate::phase_shifter(jg["mode"].get<int>(), param));
            } else {
                fail("unknown gate kind \"" + kind + "\"");
            }
        }
    }
    int parameters = -1;
    if (j.contains("parameters")) {
        if (!j["parameters"].is_number_integer()) {
            fail("\"parameters\" must be an integer");
        }
        parameters = j["parameters"].get<int>();
    }
    return ParamCircuit(modes, std::move(gates), parameters);
}

}  // namespace detail

std::string ParamCircuit::to_json() const { return detail::circuit_to_json(*this).dump(); }

ParamCircuit ParamCircuit::from_json(const std::string &text) {
    try {
        return detail::circuit_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("circuit JSON: ") + e.what());
    }
}

}  // namespace photinject
