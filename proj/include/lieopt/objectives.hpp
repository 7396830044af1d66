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

#ifndef LIEOPT_OBJECTIVES_HPP
#define LIEOPT_OBJECTIVES_HPP

#include <Eigen/Core>
#include <string>
#include <string_view>
#include <vector>

#include "lieopt/closure.hpp"
#include "lieopt/dynamics.hpp"

namespace lieopt {

/// One trajectory of an objective: J contributes -weight * a(T) . target.
struct TrajectoryPair {
    Eigen::VectorXd initial;
    Eigen::VectorXd target;
    double weight = 1.0;
};

/// J = 1 - sum_j weight_j a_j(T) . target_j.
struct ControlObjective {
    std::vector<TrajectoryPair> pairs;

    double value(const std::vector<Eigen::VectorXd> &finals) const;
};

/// 1 - a(T) . a_T / |a_T|^2.
double state_infidelity(const Eigen::VectorXd &actual, const Eigen::VectorXd &target);
ControlObjective state_prep_objective(const Eigen::VectorXd &initial, const Eigen::VectorXd &target);

enum class GateMode { full, reduced };
std::string to_string(GateMode mode);
GateMode parse_gate_mode(std::string_view text);

/// Initial invariants for gate control on the chain.
///
/// `full`: Z_1..Z_n, X_1X_2..X_{n-1}X_n, X_1 + X_n (2n operators).
/// `reduced`: odd-site Z, even-site Z, XX on bonds starting at odd sites,
/// XX on bonds starting at even sites, X_1 + X_n (5 operators; sites 1-based).
std::vector<WeightedPauliSum> gate_initial_operators(std::size_t n, GateMode mode);

struct GateProblem {
    GateMode mode = GateMode::reduced;
    std::vector<Eigen::VectorXd> initials;
    std::vector<Eigen::VectorXd> targets;
    std::size_t size() const { return initials.size(); }
};

/// exp(theta K_H) a for each initial: the targets of U = exp(-i theta H).
std::vector<Eigen::VectorXd> gate_targets(const OperatorBasis &basis, const WeightedPauliSum &h, double theta,
                                          const std::vector<Eigen::VectorXd> &initials,
                                          const PropagationOptions &options = {});
GateProblem make_gate_problem(const OperatorBasis &basis, GateMode mode, const WeightedPauliSum &h, double theta,
                              const PropagationOptions &options = {});
/// 1 - (1/N_c) sum_j a_j(T) . a_Tj / |a_j(0)|^2.
double gate_infidelity(const GateProblem &problem, const std::vector<Eigen::VectorXd> &finals);
ControlObjective gate_objective(const GateProblem &problem);

/// (<H_T> - E0) / (E1 - E0), an upper bound on the state infidelity.
double fidelity_bound(double expectation, double e0, double e1);

/// <s| sum_j c_j a_j |s> for the product state with spin p in the Z
/// eigenstate (-1)^{down[p]}. Only pure Z strings contribute.
double product_state_expectation(const OperatorBasis &basis, const Eigen::VectorXd &coefficients,
                                 const std::vector<bool> &down);
/// Same for the ground state of sum_j Z_j (every spin down).
double initial_state_expectation(const OperatorBasis &basis, const Eigen::VectorXd &coefficients);

/// <Psi(T)| H |Psi(T)> obtained by back-propagating the coefficients of H
/// through the schedule and evaluating on the initial product state.
double backpropagated_expectation(const StructureConstants &sc, const OperatorBasis &basis,
                                  const PulseSchedule &schedule, const Eigen::VectorXd &h_coefficients,
                                  const PropagationOptions &options = {});

/// |1 - (E1 - E0) B / (n J)|.
double bound_deviation(double infidelity, double bound, double e0, double e1, std::size_t n);

struct Gap {
    double e0 = 0.0;
    double e1 = 0.0;
    bool degenerate = false;
};
/// Two lowest eigenvalues for n <= 14.
Gap gap_of(const WeightedPauliSum &h);

}  // namespace lieopt

#endif
