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

#ifndef LIEOPT_CLOSURE_HPP
#define LIEOPT_CLOSURE_HPP

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lieopt/pauli.hpp"

namespace lieopt {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

inline constexpr std::size_t kDefaultMaxDim = 200000;

/// One Hamiltonian term h_k. Drift terms keep a fixed amplitude.
struct Generator {
    WeightedPauliSum op;
    bool drift = false;
    std::string label;
};

/// Ordered Hamiltonian terms {h_k} on n qubits.
class GeneratorSet {
   public:
    GeneratorSet() = default;
    /// Validates: equal qubit counts, nonzero, pairwise distinct.
    GeneratorSet(std::size_t num_qubits, std::vector<Generator> generators);

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t size() const { return generators_.size(); }
    const Generator &operator[](std::size_t k) const { return generators_[k]; }
    const std::vector<Generator> &generators() const { return generators_; }

    std::vector<std::size_t> drift_indices() const;
    std::vector<std::size_t> control_indices() const;
    /// Distinct Pauli strings appearing in any generator, canonical order.
    std::vector<PauliString> strings() const;
    /// Deterministic text listing (n, generators) used for content hashing.
    std::string canonical_text() const;
    /// SHA-256 of canonical_text().
    std::string content_hash() const;

   private:
    std::size_t num_qubits_ = 0;
    std::vector<Generator> generators_;
};

/// Ordered set of canonical Hermitian Pauli strings {a_j}.
class OperatorBasis {
   public:
    OperatorBasis() = default;
    OperatorBasis(std::size_t num_qubits, std::vector<PauliString> elements);

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t size() const { return elements_.size(); }
    const PauliString &operator[](std::size_t j) const { return elements_[j]; }
    const std::vector<PauliString> &elements() const { return elements_; }
    std::optional<std::size_t> find(const PauliString &p) const;
    /// SHA-256 over the ordered element labels.
    std::string content_hash() const;

    /// Coefficient vector -> operator sum_j a_j a_j.
    WeightedPauliSum to_operator(const Eigen::VectorXd &coefficients) const;

   private:
    std::size_t num_qubits_ = 0;
    std::vector<PauliString> elements_;
    std::unordered_map<PauliString, std::size_t> index_;
};

/// Breadth-first closure of `seed` under i[., s] for every generator string s.
///
/// Each frontier is sorted canonically before it is appended, so indices are
/// deterministic. With no seed the generator strings themselves are used.
/// Throws ClosureOverflow once the basis would exceed `max_dim`.
OperatorBasis generate_closure(const GeneratorSet &gens,
                               const std::optional<std::vector<PauliString>> &seed = std::nullopt,
                               std::size_t max_dim = kDefaultMaxDim);

/// Sparse structure constants: K_k with (K_k)_{lj} = lambda^k_{lj}.
struct StructureConstants {
    std::size_t num_qubits = 0;
    std::size_t dim = 0;
    std::vector<SparseMatrix> k_matrices;
    std::string generator_hash;
    std::string basis_hash;

    std::size_t num_generators() const { return k_matrices.size(); }
};

/// lambda^k_{lj} = i tr([a_j, h_k] a_l) / 2^n evaluated symbolically.
///
/// Throws ClosureViolation naming (j, k) and the unindexed product string.
StructureConstants structure_constants(const OperatorBasis &basis, const GeneratorSet &gens);

/// Adjoint matrix of an arbitrary operator whose action closes on the basis.
SparseMatrix adjoint_matrix(const OperatorBasis &basis, const WeightedPauliSum &op);

/// Result of a membership query.
struct Membership {
    std::optional<Eigen::VectorXd> coefficients;
    std::vector<PauliString> missing;
    explicit operator bool() const { return coefficients.has_value(); }
};

/// Exact coefficients of `op` when every term is a basis element.
Membership check_membership(const OperatorBasis &basis, const WeightedPauliSum &op);

/// As check_membership but throws MembershipError on missing terms.
Eigen::VectorXd expand_in_basis(const OperatorBasis &basis, const WeightedPauliSum &op);

}  // namespace lieopt

#endif
