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

#ifndef LIEOPT_EXACT_HPP
#define LIEOPT_EXACT_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "lieopt/closure.hpp"
#include "lieopt/dynamics.hpp"
#include "lieopt/models.hpp"

namespace lieopt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Largest qubit count accepted by the dense routines.
inline constexpr std::size_t kMaxDenseQubits = 14;
/// Largest qubit count for dense unitaries.
inline constexpr std::size_t kMaxUnitaryQubits = 10;
/// Largest qubit count for the commutant computation.
inline constexpr std::size_t kMaxCommutantQubits = 7;

/// Site 0 is the most significant bit of a basis-state index.
ComplexMatrix densify(const PauliString &p);
ComplexMatrix densify(const WeightedPauliSum &op);

/// Matrix-free action of a Pauli sum on state vectors.
class PauliOperator {
   public:
    explicit PauliOperator(const WeightedPauliSum &op);
    std::size_t num_qubits() const { return num_qubits_; }
    ComplexVector apply(const ComplexVector &psi) const;
    /// Applies to every column.
    ComplexMatrix apply(const ComplexMatrix &m) const;

   private:
    struct Term {
        std::uint64_t flip;
        std::uint64_t sign_mask;
        Complex factor;
    };
    std::size_t num_qubits_;
    std::vector<Term> terms_;
};

/// tr(p m) / 2^n without forming p.
Complex pauli_component(const PauliString &p, const ComplexMatrix &m);

/// Real coefficients of a Hermitian matrix on the basis elements, plus the
/// squared Hilbert-Schmidt weight left outside the basis.
struct BasisExpansion {
    Eigen::VectorXd coefficients;
    double outside_weight = 0.0;
};
BasisExpansion expand_dense(const OperatorBasis &basis, const ComplexMatrix &m);

/// Computational basis state; bit p of `bits` (MSB = site 0) is spin p.
ComplexVector basis_state(std::size_t n, std::uint64_t bits);
/// Ground state of sum_j Z_j: every spin in the -1 eigenstate.
ComplexVector initial_ground_state(std::size_t n);

/// Hamiltonian of bin l: sum_k amplitude_{l,k} h_k.
WeightedPauliSum bin_hamiltonian(const GeneratorSet &gens, const PulseSchedule &schedule, std::size_t bin);

/// exp(-i t H) for Hermitian dense H by eigendecomposition.
ComplexMatrix expm_hermitian(const ComplexMatrix &h, double t);

/// Product of exact per-bin exponentials exp(-i H_l dt).
ComplexMatrix propagate_unitary(const GeneratorSet &gens, const PulseSchedule &schedule);

/// Exact state propagation. Dimensions up to 256 use eigendecomposition per
/// bin; larger ones a Lanczos exponential with tolerance 1e-13 per bin.
ComplexVector propagate_state(const GeneratorSet &gens, const PulseSchedule &schedule, const ComplexVector &psi0);

/// exp(-i t H) psi with H Hermitian, by Lanczos on the matrix-free operator.
ComplexVector lanczos_expv(const PauliOperator &h, const ComplexVector &psi, double t, double tol = 1e-13);

double state_fidelity(const ComplexVector &psi, const ComplexVector &target);
double state_fidelity(const ComplexMatrix &u, const ComplexVector &psi0, const ComplexVector &target);
/// |tr(U^dagger U_T)|^2 / 4^n.
double gate_fidelity(const ComplexMatrix &u, const ComplexMatrix &target);
/// <psi| op |psi>.
double expectation(const WeightedPauliSum &op, const ComplexVector &psi);

/// Two lowest eigenvalues and the ground state.
struct LowLevels {
    double e0 = 0.0;
    double e1 = 0.0;
    ComplexVector ground;
    /// Set when e1 - e0 < 1e-10.
    bool degenerate = false;
};
/// Dense diagonalization up to 10 qubits, Lanczos up to kMaxDenseQubits.
LowLevels lowest_levels(const WeightedPauliSum &h);

/// Dimension of the operator space commuting with every element of `ops`.
std::size_t commutant_dimension(const std::vector<WeightedPauliSum> &ops);

/// exp(i angle G) as a dense matrix.
ComplexMatrix rotation_matrix(const WeightedPauliSum &generator, double angle);
/// W = F_0 F_1 ... from the model's factor list.
ComplexMatrix w_unitary(TargetId id, std::size_t n, WConstruction mode = WConstruction::parity_corrected);

struct AnalyticTargetReport {
    std::size_t n = 0;
    double ghz_deviation = 0.0;
    double cluster_deviation = 0.0;
    bool passed(double tol) const { return ghz_deviation < tol && cluster_deviation < tol; }
};
/// Max entry deviation of W^dagger I_0 W from H_G and H_C.
AnalyticTargetReport verify_analytic_targets(std::size_t n, WConstruction mode = WConstruction::parity_corrected,
                                             bool reverse_factor_order = false);

}  // namespace lieopt

#endif
