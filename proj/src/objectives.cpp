// Copyright 2026 The lieopt Authors
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

#include "lieopt/objectives.hpp"

#include <bit>
#include <cmath>

#include "lieopt/errors.hpp"
#include "lieopt/exact.hpp"

namespace lieopt {

double ControlObjective::value(const std::vector<Eigen::VectorXd> &finals) const {
    if (finals.size() != pairs.size()) {
        throw DimensionError("objective has " + std::to_string(pairs.size()) + " trajectories but got " +
                             std::to_string(finals.size()) + " final vectors");
    }
    double overlap = 0.0;
    for (std::size_t j = 0; j < pairs.size(); ++j) overlap += pairs[j].weight * finals[j].dot(pairs[j].target);
    return 1.0 - overlap;
}

double state_infidelity(const Eigen::VectorXd &actual, const Eigen::VectorXd &target) {
    if (actual.size() != target.size()) throw DimensionError("state_infidelity: vector lengths differ");
    const double norm2 = target.squaredNorm();
    if (norm2 == 0.0) throw ConfigError("state_infidelity: target has zero norm");
    return 1.0 - actual.dot(target) / norm2;
}

ControlObjective state_prep_objective(const Eigen::VectorXd &initial, const Eigen::VectorXd &target) {
    if (initial.size() != target.size()) throw DimensionError("state-prep problem: vector lengths differ");
    const double norm2 = target.squaredNorm();
    if (norm2 == 0.0) throw ConfigError("state-prep problem: target has zero norm");
    return ControlObjective{{TrajectoryPair{initial, target, 1.0 / norm2}}};
}

std::string to_string(GateMode mode) { return mode == GateMode::full ? "full" : "reduced"; }

GateMode parse_gate_mode(std::string_view text) {
    if (text == "full") return GateMode::full;
    if (text == "reduced") return GateMode::reduced;
    throw ConfigError("unknown gate mode '" + std::string(text) + "'");
}

std::vector<WeightedPauliSum> gate_initial_operators(std::size_t n, GateMode mode) {
    if (n < 2) throw ConfigError("gate initial conditions need n >= 2");
    auto z = [n](std::size_t site) { return PauliString::from_sites(n, {{site, 'Z'}}); };
    auto xx = [n](std::size_t site) { return PauliString::from_sites(n, {{site, 'X'}, {site + 1, 'X'}}); };
    WeightedPauliSum ends(n);
    ends.add(PauliString::from_sites(n, {{0, 'X'}}), 1.0);
    ends.add(PauliString::from_sites(n, {{n - 1, 'X'}}), 1.0);
    std::vector<WeightedPauliSum> out;
    if (mode == GateMode::full) {
        for (std::size_t j = 0; j < n; ++j) out.emplace_back(z(j));
        for (std::size_t j = 0; j + 1 < n; ++j) out.emplace_back(xx(j));
        out.push_back(ends);
        return out;
    }
    // 0-based even sites are the 1-based odd sites.
    WeightedPauliSum z_odd(n), z_even(n), xx_odd(n), xx_even(n);
    for (std::size_t j = 0; j < n; ++j) (j % 2 == 0 ? z_odd : z_even).add(z(j), 1.0);
    for (std::size_t j = 0; j + 1 < n; ++j) (j % 2 == 0 ? xx_odd : xx_even).add(xx(j), 1.0);
    out = {z_odd, z_even, xx_odd};
    if (!xx_even.empty()) out.push_back(xx_even);
    out.push_back(ends);
    return out;
}

std::vector<Eigen::VectorXd> gate_targets(const OperatorBasis &basis, const WeightedPauliSum &h, double theta,
                                          const std::vector<Eigen::VectorXd> &initials,
                                          const PropagationOptions &options) {
    SparseMatrix k = adjoint_matrix(basis, h);
    std::vector<Eigen::VectorXd> out;
    out.reserve(initials.size());
    for (const auto &a : initials) out.push_back(exp_action(k, theta, a, options));
    return out;
}

GateProblem make_gate_problem(const OperatorBasis &basis, GateMode mode, const WeightedPauliSum &h, double theta,
                              const PropagationOptions &options) {
    GateProblem p;
    p.mode = mode;
    for (const auto &op : gate_initial_operators(basis.num_qubits(), mode)) p.initials.push_back(expand_in_basis(basis, op));
    p.targets = gate_targets(basis, h, theta, p.initials, options);
    return p;
}

double gate_infidelity(const GateProblem &problem, const std::vector<Eigen::VectorXd> &finals) {
    return gate_objective(problem).value(finals);
}

ControlObjective gate_objective(const GateProblem &problem) {
    if (problem.initials.empty() || problem.initials.size() != problem.targets.size()) {
        throw DimensionError("gate problem needs matching, non-empty initial and target lists");
    }
    ControlObjective obj;
    const double count = static_cast<double>(problem.size());
    for (std::size_t j = 0; j < problem.size(); ++j) {
        const double norm2 = problem.initials[j].squaredNorm();
        if (norm2 == 0.0) throw ConfigError("gate initial condition has zero norm");
        obj.pairs.push_back({problem.initials[j], problem.targets[j], 1.0 / (count * norm2)});
    }
    return obj;
}

double fidelity_bound(double expectation, double e0, double e1) {
    if (!(e1 > e0)) throw ConfigError("fidelity bound needs a non-degenerate gap (E1 > E0)");
    return (expectation - e0) / (e1 - e0);
}

double product_state_expectation(const OperatorBasis &basis, const Eigen::VectorXd &coefficients,
                                 const std::vector<bool> &down) {
    const std::size_t n = basis.num_qubits();
    if (down.size() != n) throw DimensionError("product state has wrong number of spins");
    if (static_cast<std::size_t>(coefficients.size()) != basis.size()) throw DimensionError("coefficient length mismatch");
    PauliString state(n);
    for (std::size_t p = 0; p < n; ++p) {
        if (down[p]) state.set(p, 'Z');
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < basis.size(); ++j) {
        const auto &a = basis[j];
        bool has_x = false;
        int parity = 0;
        for (std::size_t w = 0; w < PauliString::kWords; ++w) {
            has_x = has_x || a.x_words()[w] != 0;
            parity += std::popcount(a.z_words()[w] & state.z_words()[w]);
        }
        if (has_x) continue;
        acc += (parity & 1 ? -1.0 : 1.0) * coefficients[static_cast<Eigen::Index>(j)];
    }
    return acc;
}

double initial_state_expectation(const OperatorBasis &basis, const Eigen::VectorXd &coefficients) {
    return product_state_expectation(basis, coefficients, std::vector<bool>(basis.num_qubits(), true));
}

double backpropagated_expectation(const StructureConstants &sc, const OperatorBasis &basis,
                                  const PulseSchedule &schedule, const Eigen::VectorXd &h_coefficients,
                                  const PropagationOptions &options) {
    // U^dagger H U is H carried backwards: the adjoint propagation of its
    // coefficients, which equals propagation under the time-reversed schedule.
    BinPropagators props(sc, schedule, options);
    Eigen::VectorXd back = backward_cache(props, h_coefficients).front();
    return initial_state_expectation(basis, back);
}

double bound_deviation(double infidelity, double bound, double e0, double e1, std::size_t n) {
    if (infidelity == 0.0) throw ConfigError("bound deviation is undefined for zero infidelity");
    return std::abs(1.0 - (e1 - e0) * bound / (static_cast<double>(n) * infidelity));
}

Gap gap_of(const WeightedPauliSum &h) {
    if (h.num_qubits() > kMaxDenseQubits) {
        throw DimensionError("gap_of supports at most " + std::to_string(kMaxDenseQubits) +
                             " qubits; supply the analytic gap instead");
    }
    auto levels = lowest_levels(h);
    return {levels.e0, levels.e1, levels.degenerate};
}

}  // namespace lieopt
