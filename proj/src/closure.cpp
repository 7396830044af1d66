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

#include "lieopt/closure.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "lieopt/errors.hpp"
#include "lieopt/hash.hpp"

namespace lieopt {

GeneratorSet::GeneratorSet(std::size_t num_qubits, std::vector<Generator> generators)
    : num_qubits_(num_qubits), generators_(std::move(generators)) {
    for (std::size_t k = 0; k < generators_.size(); ++k) {
        const auto &g = generators_[k];
        if (g.op.empty()) throw ConfigError("generator " + std::to_string(k) + " is zero");
        if (g.op.num_qubits() != num_qubits_) {
            throw DimensionError("generator " + std::to_string(k) + " acts on " + std::to_string(g.op.num_qubits()) +
                                 " qubits, expected " + std::to_string(num_qubits_));
        }
        for (std::size_t q = 0; q < k; ++q) {
            if (generators_[q].op == g.op) {
                throw ConfigError("generators " + std::to_string(q) + " and " + std::to_string(k) + " coincide");
            }
        }
    }
}

std::vector<std::size_t> GeneratorSet::drift_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < generators_.size(); ++k) {
        if (generators_[k].drift) out.push_back(k);
    }
    return out;
}

std::vector<std::size_t> GeneratorSet::control_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < generators_.size(); ++k) {
        if (!generators_[k].drift) out.push_back(k);
    }
    return out;
}

std::vector<PauliString> GeneratorSet::strings() const {
    std::set<PauliString> unique;
    for (const auto &g : generators_) {
        for (const auto &[p, c] : g.op.terms()) unique.insert(p);
    }
    return {unique.begin(), unique.end()};
}

std::string GeneratorSet::canonical_text() const {
    std::ostringstream out;
    out << "n " << num_qubits_ << '\n';
    for (const auto &g : generators_) {
        out << (g.drift ? "drift" : "control");
        for (const auto &[p, c] : g.op.terms()) out << ' ' << format_double(c) << ' ' << p.label();
        out << '\n';
    }
    return out.str();
}

std::string GeneratorSet::content_hash() const { return sha256_hex(canonical_text()); }

OperatorBasis::OperatorBasis(std::size_t num_qubits, std::vector<PauliString> elements)
    : num_qubits_(num_qubits), elements_(std::move(elements)) {
    index_.reserve(elements_.size());
    for (std::size_t j = 0; j < elements_.size(); ++j) {
        const auto &p = elements_[j];
        if (p.num_qubits() != num_qubits_) throw DimensionError("basis element " + p.str() + " has wrong qubit count");
        if (p.phase() != 0 || p.is_identity()) {
            throw ConfigError("basis element " + p.str() + " must be a non-identity canonical string");
        }
        if (!index_.emplace(p, j).second) throw ConfigError("duplicate basis element " + p.label());
    }
}

std::optional<std::size_t> OperatorBasis::find(const PauliString &p) const {
    auto it = index_.find(p.canonical());
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::string OperatorBasis::content_hash() const {
    std::string text = "n " + std::to_string(num_qubits_) + '\n';
    for (const auto &p : elements_) {
        text += p.label();
        text += '\n';
    }
    return sha256_hex(text);
}

WeightedPauliSum OperatorBasis::to_operator(const Eigen::VectorXd &coefficients) const {
    if (static_cast<std::size_t>(coefficients.size()) != elements_.size()) {
        throw DimensionError("coefficient vector length " + std::to_string(coefficients.size()) + " != basis size " +
                             std::to_string(elements_.size()));
    }
    WeightedPauliSum out(num_qubits_);
    for (std::size_t j = 0; j < elements_.size(); ++j) {
        if (coefficients[static_cast<Eigen::Index>(j)] != 0.0) out.add(elements_[j], coefficients[static_cast<Eigen::Index>(j)]);
    }
    return out;
}

OperatorBasis generate_closure(const GeneratorSet &gens, const std::optional<std::vector<PauliString>> &seed,
                               std::size_t max_dim) {
    const std::vector<PauliString> actions = gens.strings();
    std::vector<PauliString> frontier;
    if (seed) {
        std::set<PauliString> unique;
        for (const auto &p : *seed) {
            if (p.num_qubits() != gens.num_qubits()) throw DimensionError("seed string " + p.str() + " has wrong size");
            if (!p.is_identity()) unique.insert(p.canonical());
        }
        frontier.assign(unique.begin(), unique.end());
    } else {
        frontier = actions;
    }
    if (frontier.size() > max_dim) throw ClosureOverflow(max_dim, frontier.size());

    std::vector<PauliString> elements;
    std::unordered_map<PauliString, std::size_t> known;
    auto admit = [&](const std::vector<PauliString> &batch) {
        for (const auto &p : batch) {
            known.emplace(p, elements.size());
            elements.push_back(p);
        }
    };
    admit(frontier);

    while (!frontier.empty()) {
        std::set<PauliString> next;
        for (const auto &a : frontier) {
            for (const auto &s : actions) {
                auto c = commutator(a, s);
                if (!c || known.contains(c->string)) continue;
                next.insert(c->string);
            }
        }
        if (elements.size() + next.size() > max_dim) throw ClosureOverflow(max_dim, elements.size() + next.size());
        frontier.assign(next.begin(), next.end());
        admit(frontier);
    }
    return OperatorBasis(gens.num_qubits(), std::move(elements));
}

namespace {

// Rows of ad(op) restricted to the basis. Throws ClosureViolation tagged with
// `generator` when a product is not indexed.
SparseMatrix adjoint_impl(const OperatorBasis &basis, const WeightedPauliSum &op, std::size_t generator) {
    if (!op.empty() && op.num_qubits() != basis.num_qubits()) {
        throw DimensionError("operator acts on " + std::to_string(op.num_qubits()) + " qubits, basis on " +
                             std::to_string(basis.num_qubits()));
    }
    const auto d = static_cast<Eigen::Index>(basis.size());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(basis.size() * std::max<std::size_t>(op.size(), 1));
    for (std::size_t j = 0; j < basis.size(); ++j) {
        for (const auto &[s, coeff] : op.terms()) {
            auto c = commutator(basis[j], s);
            if (!c) continue;
            auto l = basis.find(c->string);
            if (!l) throw ClosureViolation(j, generator, c->string.label());
            triplets.emplace_back(static_cast<Eigen::Index>(*l), static_cast<Eigen::Index>(j), coeff * c->weight);
        }
    }
    SparseMatrix m(d, d);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.prune(0.0);
    m.makeCompressed();
    return m;
}

}  // namespace

StructureConstants structure_constants(const OperatorBasis &basis, const GeneratorSet &gens) {
    if (basis.num_qubits() != gens.num_qubits()) throw DimensionError("basis and generators disagree on qubit count");
    StructureConstants sc;
    sc.num_qubits = basis.num_qubits();
    sc.dim = basis.size();
    sc.generator_hash = gens.content_hash();
    sc.basis_hash = basis.content_hash();
    sc.k_matrices.reserve(gens.size());
    for (std::size_t k = 0; k < gens.size(); ++k) sc.k_matrices.push_back(adjoint_impl(basis, gens[k].op, k));
    return sc;
}

SparseMatrix adjoint_matrix(const OperatorBasis &basis, const WeightedPauliSum &op) {
    return adjoint_impl(basis, op, 0);
}

Membership check_membership(const OperatorBasis &basis, const WeightedPauliSum &op) {
    if (!op.empty() && op.num_qubits() != basis.num_qubits()) throw DimensionError("membership: qubit count mismatch");
    Membership result;
    Eigen::VectorXd coefficients = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
    for (const auto &[p, c] : op.terms()) {
        auto j = basis.find(p);
        if (!j) {
            result.missing.push_back(p);
            continue;
        }
        coefficients[static_cast<Eigen::Index>(*j)] = c;
    }
    if (result.missing.empty()) result.coefficients = std::move(coefficients);
    return result;
}

Eigen::VectorXd expand_in_basis(const OperatorBasis &basis, const WeightedPauliSum &op) {
    auto m = check_membership(basis, op);
    if (!m) {
        std::string list;
        for (const auto &p : m.missing) list += (list.empty() ? "" : ", ") + p.label();
        throw MembershipError("operator terms outside the basis: " + list);
    }
    return *m.coefficients;
}

}  // namespace lieopt
