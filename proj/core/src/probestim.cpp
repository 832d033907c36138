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
#include "photinject/probestim.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "photinject/channel.hpp"
#include "photinject/circuit.hpp"
#include "photinject/lift.hpp"
#include "photinject/parallel.hpp"
#include "photinject/permanent.hpp"
#include "photinject/rng.hpp"

namespace photinject {

namespace {

/// Permutation matrix sending physical mode `from` to block position `to` and
/// the remaining modes, in ascending order, to the remaining positions.
CMatrix route(int m, int from, int to) {
    std::vector<int> perm(static_cast<std::size_t>(m));
    int next = 0;
    for (int i = 0; i < m; ++i) {
        if (i == from) {
            perm[static_cast<std::size_t>(i)] = to;
            continue;
        }
        if (next == to) {
            ++next;
        }
        perm[static_cast<std::size_t>(i)] = next++;
    }
    return permutation_matrix(perm);
}

}  // namespace

EquivalentModel build_equivalent(std::vector<CMatrix> layers, int measured_mode) {
    if (layers.empty()) {
        throw std::invalid_argument("build_equivalent: need at least one layer");
    }
    const auto m = layers.front().rows();
    for (const auto &u : layers) {
        if (u.rows() != m || u.cols() != m) {
            throw std::invalid_argument("build_equivalent: layers must all be square of equal size");
        }
        if (!is_unitary(u, 1e-10)) {
            throw std::invalid_argument("build_equivalent: layer is not unitary");
        }
    }
    if (measured_mode < 0 || measured_mode >= m) {
        throw std::invalid_argument("build_equivalent: measured mode out of range");
    }
    EquivalentModel em;
    em.modes = static_cast<int>(m);
    em.injections = static_cast<int>(layers.size()) - 1;
    em.measured_mode = measured_mode;
    const int k = em.injections;
    const auto total = static_cast<Eigen::Index>(em.total_modes());
    em.equivalent_unitary = CMatrix::Identity(total, total);
    for (int j = 0; j <= k; ++j) {
        CMatrix block = layers[static_cast<std::size_t>(j)];
        if (j > 0) {
            // The re-injected ancilla enters at block position 0.
            block = block * route(em.modes, measured_mode, 0).transpose();
        }
        if (j < k) {
            // The measured mode leaves at the last block position.
            block = route(em.modes, measured_mode, em.modes - 1) * block;
        }
        CMatrix factor = CMatrix::Identity(total, total);
        factor.block(k - j, k - j, m, m) = block;
        em.equivalent_unitary = factor * em.equivalent_unitary;
        em.factors.push_back(std::move(factor));
    }
    em.layers = std::move(layers);
    return em;
}

int Pattern::total() const {
    int r = 0;
    for (int c : counts) {
        r += c;
    }
    return r;
}

std::vector<Pattern> enumerate_patterns(int k, int r) {
    if (k < 1) {
        throw std::invalid_argument("enumerate_patterns: k must be >= 1");
    }
    if (r < 0) {
        throw std::invalid_argument("enumerate_patterns: r must be >= 0");
    }
    std::vector<Pattern> out;
    for (auto &c : weak_compositions(r, k)) {
        out.push_back(Pattern{std::move(c)});
    }
    return out;
}

namespace {

struct PatternTerm {
    CMatrix submatrix;
    double norm = 1.0;  // (p!)^2 s! t!
};

PatternTerm pattern_term(const EquivalentModel &em, const FockState &t, const Pattern &p,
                         const FockState &s) {
    if (static_cast<int>(t.modes()) != em.modes || static_cast<int>(s.modes()) != em.modes) {
        throw std::invalid_argument("joint_probability: states must have " +
                                    std::to_string(em.modes) + " modes");
    }
    if (static_cast<int>(p.counts.size()) != em.injections) {
        throw std::invalid_argument("joint_probability: pattern length must equal injection count");
    }
    if (s.photons() != t.photons()) {
        throw std::invalid_argument("joint_probability: |s| must equal |t|");
    }
    for (int c : p.counts) {
        if (c < 0) {
            throw std::invalid_argument("joint_probability: negative pattern count");
        }
    }
    const int r = p.total();
    if (t.photons() + r > kPermanentExactCap) {
        throw std::length_error("joint_probability: " + std::to_string(t.photons() + r) +
                                " photons exceed the permanent cap");
    }
    const auto total = static_cast<std::size_t>(em.total_modes());
    std::vector<int> in(total, 0);
    std::vector<int> out(total, 0);
    for (int j = 0; j < em.injections; ++j) {
        const int c = p.counts[static_cast<std::size_t>(j)];
        in[static_cast<std::size_t>(em.ancilla_slot(j))] = c;
        out[static_cast<std::size_t>(em.measured_slot(j))] = c;
    }
    for (int i = 0; i < em.modes; ++i) {
        in[static_cast<std::size_t>(em.injections + i)] = t[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i)];
    }
    const FockState in_state(std::move(in));
    const FockState out_state(std::move(out));
    double p_fact = 1.0;
    for (int c : p.counts) {
        p_fact *= std::tgamma(c + 1.0);
    }
    PatternTerm term;
    term.submatrix = substitution_submatrix(em.equivalent_unitary, out_state, in_state);
    term.norm = p_fact * p_fact * static_cast<double>(occupation_factorial(s)) *
                static_cast<double>(occupation_factorial(t));
    return term;
}

/// Every pattern in [0, n]^k, grouped by increasing r.
std::vector<Pattern> marginal_patterns(int k, int n) {
    std::vector<Pattern> out;
    if (k == 0) {
        out.push_back(Pattern{});
        return out;
    }
    for (int r = 0; r <= k * n; ++r) {
        for (auto &p : enumerate_patterns(k, r)) {
            if (std::all_of(p.counts.begin(), p.counts.end(), [n](int c) { return c <= n; })) {
                out.push_back(std::move(p));
            }
        }
    }
    return out;
}

}  // namespace

double joint_probability(const EquivalentModel &em, const FockState &t, const Pattern &p,
                         const FockState &s) {
    const PatternTerm term = pattern_term(em, t, p, s);
    return std::norm(permanent_exact(term.submatrix)) / term.norm;
}

ProbabilityEstimate output_probability(const EquivalentModel &em, const FockState &t,
                                       const FockState &s, const ProbabilityMethod &method) {
    const bool sampled = method.kind == ProbabilityMethod::Kind::kGurvits;
    if (sampled && method.samples == 0) {
        throw std::invalid_argument("output_probability: Gurvits mode needs samples >= 1");
    }
    const auto patterns = marginal_patterns(em.injections, t.photons());
    struct Term {
        double value = 0.0;
        double variance = 0.0;
        double value_var = 0.0;
    };
    std::vector<Term> terms(patterns.size());
    std::vector<PatternTerm> inputs;
    inputs.reserve(patterns.size());
    for (const auto &p : patterns) {
        inputs.push_back(pattern_term(em, t, p, s));
    }
    parallel_for(patterns.size(), [&](std::size_t i) {
        const PatternTerm &in = inputs[i];
        if (!sampled) {
            terms[i].value = std::norm(permanent_exact(in.submatrix)) / in.norm;
            return;
        }
        const auto est = gurvits_estimate(in.submatrix, method.samples, derive_seed(method.seed, i));
        const double se2 = est.empirical_std_error * est.empirical_std_error;
        const double x2 = std::norm(est.value);
        terms[i].value = x2 / in.norm;
        terms[i].variance = se2 / in.norm;
        terms[i].value_var = (4.0 * x2 * se2 + 2.0 * se2 * se2) / (in.norm * in.norm);
    });
    ProbabilityEstimate out;
    out.patterns = patterns.size();
    double bias = 0.0;
    double var = 0.0;
    for (const auto &term : terms) {
        out.value += term.value;
        bias += term.variance;
        var += term.value_var;
    }
    if (sampled) {
        out.bias_corrected = out.value - bias;
        out.std_error = std::sqrt(var);
    }
    return out;
}

std::vector<double> channel_output_distribution(const std::vector<CMatrix> &layers,
                                                const FockState &t, int measured_mode) {
    if (layers.empty()) {
        throw std::invalid_argument("channel_output_distribution: need at least one layer");
    }
    const FockBasis basis(static_cast<int>(t.modes()), t.photons());
    const auto spec = InjectionSpec::identity({measured_mode});
    DensityMatrix rho = DensityMatrix::from_fock(basis, t);
    for (std::size_t l = 0; l < layers.size(); ++l) {
        if (l > 0) {
            rho = state_injection(rho, spec);
        }
        rho = apply_unitary(rho, lift_unitary(layers[l], basis));
    }
    std::vector<double> probs(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        probs[i] = rho.matrix()(ii, ii).real();
    }
    return probs;
}

Regime classify_regime(InjectionScale k, PhotonScale r) {
    using enum Regime;
    constexpr Regime E = kEfficientClassical;
    constexpr Regime X = kNoKnownEfficientClassical;
    constexpr Regime U = kUnreachable;
    constexpr Regime table[5][3] = {
        {E, E, E},
        {E, E, X},
        {E, X, X},
        {U, X, X},
        {U, U, X},
    };
    return table[static_cast<int>(r)][static_cast<int>(k)];
}

std::optional<Regime> classify_regime_alo(InjectionScale k, PhotonScale r) {
    if (r == PhotonScale::kLinearLog || r == PhotonScale::kQuadratic) {
        return std::nullopt;
    }
    return classify_regime(k, r);
}

namespace {

std::string normalize_label(std::string_view label) {
    std::string s;
    for (char c : label) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    if (s.size() > 3 && s.starts_with("o(") && s.ends_with(")")) {
        s = s.substr(2, s.size() - 3);
    }
    return s;
}

}  // namespace

InjectionScale parse_injection_scale(std::string_view label) {
    const std::string s = normalize_label(label);
    if (s == "1" || s == "const") {
        return InjectionScale::kConstant;
    }
    if (s == "logm" || s == "log") {
        return InjectionScale::kLogarithmic;
    }
    if (s == "m" || s == "linear") {
        return InjectionScale::kLinear;
    }
    throw std::invalid_argument("unknown injection scale '" + std::string(label) + "'");
}

PhotonScale parse_photon_scale(std::string_view label) {
    const std::string s = normalize_label(label);
    if (s == "1" || s == "const") {
        return PhotonScale::kConstant;
    }
    if (s == "logm" || s == "log") {
        return PhotonScale::kLogarithmic;
    }
    if (s == "m" || s == "linear") {
        return PhotonScale::kLinear;
    }
    if (s == "mlogm") {
        return PhotonScale::kLinearLog;
    }
    if (s == "m^2" || s == "m2" || s == "quadratic") {
        return PhotonScale::kQuadratic;
    }
    throw std::invalid_argument("unknown photon scale '" + std::string(label) + "'");
}

std::string_view to_string(InjectionScale k) {
    switch (k) {
        case InjectionScale::kConstant: return "O(1)";
        case InjectionScale::kLogarithmic: return "O(log m)";
        case InjectionScale::kLinear: return "O(m)";
    }
    return "?";
}

std::string_view to_string(PhotonScale r) {
    switch (r) {
        case PhotonScale::kConstant: return "O(1)";
        case PhotonScale::kLogarithmic: return "O(log m)";
        case PhotonScale::kLinear: return "O(m)";
        case PhotonScale::kLinearLog: return "O(m log m)";
        case PhotonScale::kQuadratic: return "O(m^2)";
    }
    return "?";
}

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::kEfficientClassical: return "efficient-classical";
        case Regime::kNoKnownEfficientClassical: return "no-known-efficient-classical";
        case Regime::kUnreachable: return "unreachable";
    }
    return "?";
}

std::string regime_table_csv() {
    std::string out = "k,r,regime\n";
    for (auto r : kPhotonScales) {
        for (auto k : kInjectionScales) {
            out += to_string(k);
            out += ',';
            out += to_string(r);
            out += ',';
            out += to_string(classify_regime(k, r));
            out += '\n';
        }
    }
    return out;
}

}  // namespace photinject
