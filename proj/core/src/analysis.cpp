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
#include "photinject/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "photinject/lift.hpp"
#include "photinject/parallel.hpp"
#include "photinject/rng.hpp"

namespace photinject {

PipelineCircuit::PipelineCircuit(FockState input, std::vector<PipelineStage> stages)
    : input_(std::move(input)),
      basis_(static_cast<int>(input_.modes()), input_.photons()),
      stages_(std::move(stages)) {
    offsets_.reserve(stages_.size());
    for (const auto &stage : stages_) {
        offsets_.push_back(parameter_count_);
        if (const auto *c = std::get_if<ParamCircuit>(&stage)) {
            if (c->modes() != modes()) {
                throw std::invalid_argument("PipelineCircuit: block has " +
                                            std::to_string(c->modes()) + " modes, input has " +
                                            std::to_string(modes()));
            }
            parameter_count_ += c->parameter_count();
        } else {
            std::get<InjectionSpec>(stage).validate(modes(), photons());
        }
    }
}

bool PipelineCircuit::has_injections() const {
    for (const auto &stage : stages_) {
        if (std::holds_alternative<InjectionSpec>(stage)) {
            return true;
        }
    }
    return false;
}

PipelineCircuit PipelineCircuit::without_injections() const {
    std::vector<PipelineStage> kept;
    for (const auto &stage : stages_) {
        if (std::holds_alternative<ParamCircuit>(stage)) {
            kept.push_back(stage);
        }
    }
    return PipelineCircuit(input_, std::move(kept));
}

namespace {

/// rho(theta) together with d rho / d theta_a for every global slot a.
class ForwardState {
  public:
    ForwardState(const FockBasis &basis, const FockState &input, int parameters)
        : basis_(basis),
          drho_(static_cast<std::size_t>(parameters)),
          active_(static_cast<std::size_t>(parameters), false) {
        const auto d = static_cast<Eigen::Index>(basis.size());
        rho_ = CMatrix::Zero(d, d);
        const auto i = static_cast<Eigen::Index>(basis.index(input));
        rho_(i, i) = 1.0;
    }

    /// rho <- W rho W^dagger where W is the lift of w1; `dw1` lists
    /// (global slot, dW1/dtheta_slot) pairs for the slots this step depends on.
    void apply_optics(const CMatrix &w1, const std::vector<std::pair<int, CMatrix>> &dw1) {
        const CMatrix w = lift_unitary(w1, basis_).matrix;
        const CMatrix w_adj = w.adjoint();
        for (std::size_t b = 0; b < drho_.size(); ++b) {
            if (active_[b]) {
                drho_[b] = w * drho_[b] * w_adj;
            }
        }
        const CMatrix rho_w_adj = rho_ * w_adj;
        for (const auto &[slot, dw] : dw1) {
            const CMatrix x = lift_derivative(w1, dw, basis_) * rho_w_adj;
            auto &target = drho_[static_cast<std::size_t>(slot)];
            if (!active_[static_cast<std::size_t>(slot)]) {
                target = CMatrix::Zero(rho_.rows(), rho_.cols());
                active_[static_cast<std::size_t>(slot)] = true;
            }
            target += x + x.adjoint();
        }
        rho_ = w * rho_w_adj;
    }

    void apply_injection(const InjectionPlan &plan) {
        rho_ = plan.apply(rho_);
        for (std::size_t b = 0; b < drho_.size(); ++b) {
            if (active_[b]) {
                drho_[b] = plan.apply(drho_[b]);
            }
        }
    }

    const CMatrix &rho() const { return rho_; }

    RMatrix jacobian() const {
        const auto d = rho_.rows();
        RMatrix jac = RMatrix::Zero(2 * d * d, static_cast<Eigen::Index>(drho_.size()));
        for (std::size_t a = 0; a < drho_.size(); ++a) {
            if (!active_[a]) {
                continue;
            }
            const CMatrix &g = drho_[a];
            Eigen::Index row = 0;
            for (Eigen::Index j = 0; j < d; ++j) {
                for (Eigen::Index i = 0; i < d; ++i) {
                    jac(row++, static_cast<Eigen::Index>(a)) = g(i, j).real();
                    jac(row++, static_cast<Eigen::Index>(a)) = g(i, j).imag();
                }
            }
        }
        return jac;
    }

  private:
    FockBasis basis_;
    CMatrix rho_;
    std::vector<CMatrix> drho_;
    std::vector<bool> active_;
};

void check_theta(const PipelineCircuit &pc, std::span<const double> theta) {
    if (theta.size() != static_cast<std::size_t>(pc.parameter_count())) {
        throw std::invalid_argument("pipeline expects " + std::to_string(pc.parameter_count()) +
                                    " parameters, got " + std::to_string(theta.size()));
    }
}

/// Runs the pipeline block by block. When `on_step` is provided, blocks are
/// instead expanded gate by gate and the callback fires after every gate and
/// injection.
template <typename StepFn>
ForwardState propagate(const PipelineCircuit &pc, std::span<const double> theta,
                       bool per_gate, StepFn &&on_step) {
    check_theta(pc, theta);
    ForwardState st(pc.basis(), pc.input(), pc.parameter_count());
    for (std::size_t i = 0; i < pc.stages().size(); ++i) {
        const auto &stage = pc.stages()[i];
        if (const auto *spec = std::get_if<InjectionSpec>(&stage)) {
            st.apply_injection(InjectionPlan(pc.basis(), *spec));
            on_step(st, CurveEvent::kInjection);
            continue;
        }
        const auto &c = std::get<ParamCircuit>(stage);
        const int offset = pc.parameter_offset(i);
        const auto local = theta.subspan(static_cast<std::size_t>(offset),
                                         static_cast<std::size_t>(c.parameter_count()));
        if (!per_gate) {
            const CMatrix w1 = single_photon_unitary(c, local);
            auto jac = single_photon_jacobian(c, local);
            std::vector<std::pair<int, CMatrix>> dw1;
            dw1.reserve(jac.size());
            for (std::size_t a = 0; a < jac.size(); ++a) {
                dw1.emplace_back(offset + static_cast<int>(a), std::move(jac[a]));
            }
            st.apply_optics(w1, dw1);
            continue;
        }
        for (const auto &g : c.gates()) {
            const double v = g.angle(local);
            std::vector<std::pair<int, CMatrix>> dw1;
            if (g.param().is_slot()) {
                dw1.emplace_back(offset + g.param().slot_index(),
                                 gate_matrix_derivative(g, v, c.modes()));
            }
            st.apply_optics(gate_matrix(g, v, c.modes()), dw1);
            on_step(st, CurveEvent::kGate);
        }
    }
    return st;
}

}  // namespace

CMatrix pipeline_output(const PipelineCircuit &pc, std::span<const double> theta) {
    check_theta(pc, theta);
    const auto d = static_cast<Eigen::Index>(pc.basis().size());
    CMatrix rho = CMatrix::Zero(d, d);
    const auto i0 = static_cast<Eigen::Index>(pc.basis().index(pc.input()));
    rho(i0, i0) = 1.0;
    for (std::size_t i = 0; i < pc.stages().size(); ++i) {
        const auto &stage = pc.stages()[i];
        if (const auto *spec = std::get_if<InjectionSpec>(&stage)) {
            rho = InjectionPlan(pc.basis(), *spec).apply(rho);
            continue;
        }
        const auto &c = std::get<ParamCircuit>(stage);
        const auto local = theta.subspan(static_cast<std::size_t>(pc.parameter_offset(i)),
                                         static_cast<std::size_t>(c.parameter_count()));
        const CMatrix w = lift_unitary(single_photon_unitary(c, local), pc.basis()).matrix;
        rho = w * rho * w.adjoint();
    }
    return rho;
}

RMatrix state_jacobian(const PipelineCircuit &pc, std::span<const double> theta) {
    return propagate(pc, theta, false, [](const ForwardState &, CurveEvent) {}).jacobian();
}

RankResult numerical_rank(const RMatrix &m, double tolerance) {
    RankResult out;
    if (m.size() == 0) {
        return out;
    }
    Eigen::BDCSVD<RMatrix> svd(m);
    const RVector &sv = svd.singularValues();
    out.singular_values.assign(sv.data(), sv.data() + sv.size());
    if (sv.size() == 0 || sv(0) <= 0.0) {
        return out;
    }
    const double cutoff = tolerance * sv(0);
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) {
            ++out.rank;
        }
    }
    return out;
}

DoFReport dof_at(const PipelineCircuit &pc, std::span<const double> theta, double tolerance) {
    if (!(tolerance > 0.0 && tolerance < 1.0)) {
        throw std::invalid_argument("dof_at: tolerance must lie in (0, 1)");
    }
    const RankResult r = numerical_rank(state_jacobian(pc, theta), tolerance);
    return {std::vector<double>(theta.begin(), theta.end()), r.singular_values, r.rank, tolerance};
}

std::vector<double> sample_theta(int parameter_count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> theta(static_cast<std::size_t>(parameter_count));
    for (auto &t : theta) {
        t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    return theta;
}

DoFMaxReport dof_max(const PipelineCircuit &pc, int trials, std::uint64_t seed, double tolerance) {
    if (trials < 1) {
        throw std::invalid_argument("dof_max: trials must be >= 1");
    }
    DoFMaxReport report;
    report.trials.resize(static_cast<std::size_t>(trials));
    parallel_for(report.trials.size(), [&](std::size_t i) {
        const auto theta = sample_theta(pc.parameter_count(), derive_seed(seed, i));
        report.trials[i] = dof_at(pc, theta, tolerance);
    });
    for (const auto &t : report.trials) {
        report.dof_max = std::max(report.dof_max, t.rank);
        report.consistent = report.consistent && t.rank == report.trials.front().rank;
    }
    return report;
}

std::vector<CurvePoint> dof_curve(const PipelineCircuit &pc, std::uint64_t seed, double tolerance) {
    if (!(tolerance > 0.0 && tolerance < 1.0)) {
        throw std::invalid_argument("dof_curve: tolerance must lie in (0, 1)");
    }
    const auto theta = sample_theta(pc.parameter_count(), seed);
    std::vector<CurvePoint> curve;
    curve.push_back({0, 0, CurveEvent::kStart, 0});
    int gates = 0;
    propagate(pc, theta, true, [&](const ForwardState &st, CurveEvent ev) {
        if (ev == CurveEvent::kGate) {
            ++gates;
        }
        const int rank = numerical_rank(st.jacobian(), tolerance).rank;
        curve.push_back({static_cast<int>(curve.size()), gates, ev, rank});
    });
    return curve;
}

PipelineCircuit make_block_pipeline(const BlockPipelineOptions &o) {
    if (o.blocks < 1) {
        throw std::invalid_argument("make_block_pipeline: need at least one block");
    }
    if (o.photons < 0) {
        throw std::invalid_argument("make_block_pipeline: negative photon number");
    }
    std::vector<int> occ(static_cast<std::size_t>(std::max(o.modes, 0)), 0);
    if (!occ.empty()) {
        occ[0] = o.photons;
    }
    std::vector<PipelineStage> stages;
    for (int b = 0; b < o.blocks; ++b) {
        if (b > 0 && o.with_injections) {
            stages.emplace_back(InjectionSpec::identity({o.measured_mode}));
        }
        stages.emplace_back(append_random_beam_splitters(
            universal_mesh(o.modes, MeshStyle::kTriangularRotations), o.extra_beam_splitters,
            derive_seed(o.seed, static_cast<std::uint64_t>(b))));
    }
    return PipelineCircuit(FockState(std::move(occ)), std::move(stages));
}

namespace {

FockState spread_input(int modes, int photons) {
    std::vector<int> occ(static_cast<std::size_t>(modes), 0);
    if (photons <= modes) {
        for (int i = 0; i < photons; ++i) {
            occ[static_cast<std::size_t>(i)] = 1;
        }
    } else {
        occ[0] = photons;
    }
    return FockState(std::move(occ));
}

std::pair<double, double> mean_and_std_error(const std::vector<double> &xs) {
    if (xs.empty()) {
        return {0.0, 0.0};
    }
    double mean = 0.0;
    for (double x : xs) {
        mean += x;
    }
    mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) {
        return {mean, 0.0};
    }
    double ss = 0.0;
    for (double x : xs) {
        ss += (x - mean) * (x - mean);
    }
    const double var = ss / static_cast<double>(xs.size() - 1);
    return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

}  // namespace

PurityBoundReport purity_bound_experiment(int modes, int photons, int layers, int trials,
                                          std::uint64_t seed, int measured_mode) {
    if (layers < 1) {
        throw std::invalid_argument("purity_bound_experiment: need at least one layer");
    }
    if (trials < 1) {
        throw std::invalid_argument("purity_bound_experiment: need at least one trial");
    }
    const FockBasis basis(modes, photons);
    const auto spec = InjectionSpec::identity({measured_mode});
    const InjectionPlan plan(basis, spec);
    const FockState input = spread_input(modes, photons);

    PurityBoundReport report;
    report.modes = modes;
    report.photons = photons;
    report.layers = layers;
    report.purities.resize(static_cast<std::size_t>(trials));
    report.first_layer_collision_sums.resize(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t trial) {
        DensityMatrix rho = DensityMatrix::from_fock(basis, input);
        const std::uint64_t trial_seed = derive_seed(seed, trial);
        for (int l = 0; l < layers; ++l) {
            const CMatrix u = haar_unitary(modes, derive_seed(trial_seed, static_cast<std::uint64_t>(l)));
            rho = apply_unitary(rho, lift_unitary(u, basis));
            if (l == 0) {
                double sum = 0.0;
                for (const auto &[outcome, p] : outcome_probabilities(rho, spec.measured_modes())) {
                    sum += p * p;
                }
                report.first_layer_collision_sums[trial] = sum;
            }
            rho = DensityMatrix(basis, plan.apply(rho.matrix()));
        }
        report.purities[trial] = purity(rho);
    });
    report.worst_case_bound = 1.0 / std::pow(static_cast<double>(photons + 1), layers);
    const auto [mean, se] = mean_and_std_error(report.purities);
    report.mean = mean;
    report.std_error = se;
    for (double p : report.purities) {
        report.worst_case_holds = report.worst_case_holds && p >= report.worst_case_bound;
    }
    const int threshold = 2 * photons * photons;
    if (modes > threshold) {
        const double base = static_cast<double>(modes - threshold) / (std::sqrt(2.0) * modes);
        report.haar_bound = std::pow(base, 2 * layers);
        report.haar_bound_holds = mean >= *report.haar_bound - 3.0 * se;
    }
    return report;
}

double collision_probability(const CMatrix &u, const FockState &t) {
    const FockBasis basis(static_cast<int>(t.modes()), t.photons());
    double total = 0.0;
    for (const auto &s : basis.states()) {
        bool collides = false;
        for (int v : s.occupations()) {
            collides = collides || v >= 2;
        }
        if (collides) {
            total += transition_probability(u, t, s);
        }
    }
    return total;
}

BirthdayReport birthday_check(int modes, int photons, int samples, std::uint64_t seed) {
    if (samples < 1) {
        throw std::invalid_argument("birthday_check: samples must be >= 1");
    }
    if (photons > modes || photons < 0) {
        throw std::invalid_argument("birthday_check: need 0 <= photons <= modes");
    }
    const FockState input = spread_input(modes, photons);
    BirthdayReport report;
    report.modes = modes;
    report.photons = photons;
    report.collision_probabilities.resize(static_cast<std::size_t>(samples));
    parallel_for(static_cast<std::size_t>(samples), [&](std::size_t i) {
        report.collision_probabilities[i] =
            collision_probability(haar_unitary(modes, derive_seed(seed, i)), input);
    });
    const auto [mean, se] = mean_and_std_error(report.collision_probabilities);
    report.mean = mean;
    report.std_error = se;
    report.bound = 2.0 * photons * photons / static_cast<double>(modes);
    report.below_bound = mean < report.bound;
    return report;
}

}  // namespace photinject
