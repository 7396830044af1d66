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

#include "lieopt/targets.hpp"

#include <cmath>

#include "lieopt/errors.hpp"
#include "lieopt/models.hpp"

namespace lieopt {

std::size_t AdiabaticSpec::resolved_steps() const {
    if (!(duration_tau > 0.0)) throw ConfigError("adiabatic duration must be positive");
    if (steps > 0) return steps;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(20.0 * duration_tau)));
}

Eigen::VectorXd adiabatic_target(const OperatorBasis &basis, const AdiabaticSpec &spec,
                                 const PropagationOptions &options) {
    const std::size_t n = basis.num_qubits();
    const std::size_t steps = spec.resolved_steps();
    // The three ramp terms act as generators of a three-column schedule.
    GeneratorSet ramp(n, {{initial_invariant(n), false, "initial"},
                          {target_hamiltonian(TargetId::d, n), false, "target"},
                          {bridge_hamiltonian(n), false, "bridge"}});
    for (std::size_t k = 0; k < ramp.size(); ++k) {
        auto m = check_membership(basis, ramp[k].op);
        if (!m) throw MembershipError("adiabatic ramp term '" + ramp[k].label + "' is outside the basis");
    }
    StructureConstants sc = structure_constants(basis, ramp);
    const double total = spec.duration_tau * kTauG;
    PulseSchedule schedule(total / static_cast<double>(steps),
                           Eigen::MatrixXd(static_cast<Eigen::Index>(steps), 3));
    for (std::size_t l = 0; l < steps; ++l) {
        const double s = (static_cast<double>(l) + 0.5) / static_cast<double>(steps);
        schedule.amplitudes.row(static_cast<Eigen::Index>(l)) << 1.0 - s, s, s * (1.0 - s);
    }
    return propagate(sc, schedule, expand_in_basis(basis, initial_invariant(n)), options);
}

double adiabatic_error(const OperatorBasis &basis, const Eigen::VectorXd &a, const WeightedPauliSum &h_target,
                       double hold_time, const PropagationOptions &options) {
    if (static_cast<std::size_t>(a.size()) != basis.size()) throw DimensionError("adiabatic_error: length mismatch");
    const double norm2 = a.squaredNorm();
    if (norm2 == 0.0) throw ConfigError("adiabatic_error: zero vector");
    Eigen::VectorXd held = exp_action(adjoint_matrix(basis, h_target), hold_time, a, options);
    return 1.0 - a.dot(held) / norm2;
}

double draw_hold_time(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(50.0, 100.0);
    return u(rng) * kTauG;
}

}  // namespace lieopt
