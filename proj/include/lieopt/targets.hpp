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

#ifndef LIEOPT_TARGETS_HPP
#define LIEOPT_TARGETS_HPP

#include <Eigen/Core>
#include <random>

#include "lieopt/closure.hpp"
#include "lieopt/dynamics.hpp"

namespace lieopt {

/// Adiabatic ramp H_a(s) = (1-s) H_I + s H_D + s(1-s) H_B with s = t / T_a.
struct AdiabaticSpec {
    /// Ramp duration in units of tau_g.
    double duration_tau = 2500.0;
    /// Midpoint-sampled bins; 0 selects 20 per tau_g.
    std::size_t steps = 0;

    std::size_t resolved_steps() const;
};

/// Coefficients of I_D: sum_j Z_j carried through the ramp.
Eigen::VectorXd adiabatic_target(const OperatorBasis &basis, const AdiabaticSpec &spec,
                                 const PropagationOptions &options = {});

/// 1 - <a, exp(T_b K_T) a> / |a|^2 for the constant Hamiltonian `h_target`.
double adiabatic_error(const OperatorBasis &basis, const Eigen::VectorXd &a, const WeightedPauliSum &h_target,
                       double hold_time, const PropagationOptions &options = {});

/// Hold time drawn uniformly from [50, 100] tau_g.
double draw_hold_time(std::mt19937_64 &rng);

}  // namespace lieopt

#endif
