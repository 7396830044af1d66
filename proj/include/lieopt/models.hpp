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

#ifndef LIEOPT_MODELS_HPP
#define LIEOPT_MODELS_HPP

#include <Eigen/Core>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lieopt/closure.hpp"

namespace lieopt {

enum class ModelId { chain, comb, hex_ladder };

std::string to_string(ModelId id);
/// Accepts "chain", "comb", "hex-ladder".
ModelId parse_model_id(std::string_view text);

/// A catalog system: its qubit count and labelled generators.
///
/// Two-row systems (comb, hex-ladder) put row-1 sites first: row-1 site j maps
/// to index j-1 and row-2 site j maps to index m+j-1, where m = n/2.
struct ModelSpec {
    ModelId id = ModelId::chain;
    std::size_t num_qubits = 0;
    GeneratorSet generators;

    /// Human-readable description of the site flattening.
    std::string site_layout() const;
};

/// Extended Ising chain: controls Z_1..Z_n, X_1, X_n, then the XX drift.
ModelSpec chain_model(std::size_t n);
/// Spin comb with m = n/2 teeth.
ModelSpec comb_model(std::size_t n);
/// Hexagonal spin ladder with n = 4 n_h + 2 sites.
ModelSpec hex_ladder_model(std::size_t n);
ModelSpec make_model(ModelId id, std::size_t n);

/// Closed-form closure size for the catalog models, if n is valid.
std::optional<std::size_t> closure_dimension_formula(ModelId id, std::size_t n);

/// Chain generator set without the end-X controls (plain Ising).
GeneratorSet ising_generators(std::size_t n);

enum class TargetId { ghz, cluster, d };

std::string to_string(TargetId id);
/// Accepts "G", "C", "D" (optionally prefixed by "H_" or "U_").
TargetId parse_target_id(std::string_view text);

/// Sum of Z_j: the initial invariant and the initial Hamiltonian.
WeightedPauliSum initial_invariant(std::size_t n);
/// Target Hamiltonians: GHZ, cluster, and cluster plus the XX chain.
WeightedPauliSum target_hamiltonian(TargetId id, std::size_t n);
/// Avoided-crossing term used during the adiabatic ramp.
WeightedPauliSum bridge_hamiltonian(std::size_t n);

/// One unitary factor exp(i * angle * generator).
struct Rotation {
    WeightedPauliSum generator;
    double angle = 0.0;
};

/// How the end-spin X rotation is signed in the W constructions.
///
/// `literal` uses the printed signs for every n. `parity_corrected` flips the
/// X_n rotation for odd chains, which the conjugation identity requires.
enum class WConstruction { parity_corrected, literal };

/// Factors of W with W = F_0 F_1 ... F_last (leftmost factor first).
/// Defined for the GHZ and cluster targets only.
std::vector<Rotation> w_factors(TargetId id, std::size_t n, WConstruction mode = WConstruction::parity_corrected);

/// Coefficient vector of the analytic target invariant (H_G or H_C).
Eigen::VectorXd analytic_target(const OperatorBasis &basis, TargetId id);

}  // namespace lieopt

#endif
