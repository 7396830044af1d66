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

#include "lieopt/exact.hpp"

#include <Eigen/QR>
#include <bit>
#include <cmath>
#include <random>
#include <unordered_map>

#include "lieopt/errors.hpp"

namespace lieopt {

namespace {

constexpr Complex kI{0.0, 1.0};
const Complex kPowersOfI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

void require_dense_size(std::size_t n, std::size_t limit, const char *what) {
    if (n == 0 || n > limit) {
        throw DimensionError(std::string(what) + " supports 1.." + std::to_string(limit) + " qubits, got " +
                             std::to_string(n));
    }
}

// Masks with site p at bit n-1-p.
std::pair<std::uint64_t, std::uint64_t> state_masks(const PauliString &p) {
    const std::size_t n = p.num_qubits();
    std::uint64_t x = 0, z = 0;
    for (std::size_t s = 0; s < n; ++s) {
        const std::uint64_t bit = std::uint64_t{1} << (n - 1 - s);
        if (p.x(s)) x |= bit;
        if (p.z(s)) z |= bit;
    }
    return {x, z};
}

// i^{phase + |x & z|}: the scalar in P|b> = factor (-1)^{|z & b|} |b ^ x>.
Complex string_factor(const PauliString &p, std::uint64_t x, std::uint64_t z) {
    return kPowersOfI[(p.phase() + std::popcount(x & z)) & 3];
}

inline double parity_sign(std::uint64_t v) { return (std::popcount(v) & 1) ? -1.0 : 1.0; }

bool all_terms_commute(const WeightedPauliSum &op) {
    for (auto a = op.terms().begin(); a != op.terms().end(); ++a) {
        for (auto b = std::next(a); b != op.terms().end(); ++b) {
            if (anticommutes(a->first, b->first)) return false;
        }
    }
    return true;
}

}  // namespace

ComplexMatrix densify(const PauliString &p) {
    require_dense_size(p.num_qubits(), kMaxDenseQubits, "densify");
    const std::size_t dim = std::size_t{1} << p.num_qubits();
    auto [x, z] = state_masks(p);
    const Complex f = string_factor(p, x, z);
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::uint64_t b = 0; b < dim; ++b) {
        m(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) = f * parity_sign(b & z);
    }
    return m;
}

ComplexMatrix densify(const WeightedPauliSum &op) {
    require_dense_size(op.num_qubits(), kMaxDenseQubits, "densify");
    const std::size_t dim = std::size_t{1} << op.num_qubits();
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto &[p, c] : op.terms()) {
        auto [x, z] = state_masks(p);
        const Complex f = c * string_factor(p, x, z);
        for (std::uint64_t b = 0; b < dim; ++b) {
            m(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) += f * parity_sign(b & z);
        }
    }
    return m;
}

PauliOperator::PauliOperator(const WeightedPauliSum &op) : num_qubits_(op.num_qubits()) {
    require_dense_size(num_qubits_, kMaxDenseQubits, "PauliOperator");
    for (const auto &[p, c] : op.terms()) {
        auto [x, z] = state_masks(p);
        terms_.push_back({x, z, c * string_factor(p, x, z)});
    }
}

ComplexVector PauliOperator::apply(const ComplexVector &psi) const {
    const std::uint64_t dim = std::uint64_t{1} << num_qubits_;
    if (static_cast<std::uint64_t>(psi.size()) != dim) throw DimensionError("state has wrong length");
    ComplexVector out = ComplexVector::Zero(psi.size());
    for (const auto &t : terms_) {
        for (std::uint64_t b = 0; b < dim; ++b) {
            out[static_cast<Eigen::Index>(b ^ t.flip)] += t.factor * parity_sign(b & t.sign_mask) * psi[static_cast<Eigen::Index>(b)];
        }
    }
    return out;
}

ComplexMatrix PauliOperator::apply(const ComplexMatrix &m) const {
    ComplexMatrix out(m.rows(), m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.col(c) = apply(ComplexVector(m.col(c)));
    return out;
}

Complex pauli_component(const PauliString &p, const ComplexMatrix &m) {
    const std::uint64_t dim = std::uint64_t{1} << p.num_qubits();
    if (static_cast<std::uint64_t>(m.rows()) != dim || m.rows() != m.cols()) throw DimensionError("matrix size mismatch");
    auto [x, z] = state_masks(p);
    const Complex f = string_factor(p, x, z);
    Complex acc = 0.0;
    // tr(P M) = sum_c P(c ^ x, c) M(c, c ^ x).
    for (std::uint64_t c = 0; c < dim; ++c) {
        acc += parity_sign(c & z) * m(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c ^ x));
    }
    return f * acc / static_cast<double>(dim);
}

BasisExpansion expand_dense(const OperatorBasis &basis, const ComplexMatrix &m) {
    BasisExpansion out;
    out.coefficients.resize(static_cast<Eigen::Index>(basis.size()));
    double captured = 0.0;
    for (std::size_t j = 0; j < basis.size(); ++j) {
        const double c = pauli_component(basis[j], m).real();
        out.coefficients[static_cast<Eigen::Index>(j)] = c;
        captured += c * c;
    }
    out.outside_weight = std::max(0.0, m.squaredNorm() / static_cast<double>(m.rows()) - captured);
    return out;
}

ComplexVector basis_state(std::size_t n, std::uint64_t bits) {
    require_dense_size(n, kMaxDenseQubits, "basis_state");
    ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(std::uint64_t{1} << n));
    psi[static_cast<Eigen::Index>(bits)] = 1.0;
    return psi;
}

ComplexVector initial_ground_state(std::size_t n) { return basis_state(n, (std::uint64_t{1} << n) - 1); }

WeightedPauliSum bin_hamiltonian(const GeneratorSet &gens, const PulseSchedule &schedule, std::size_t bin) {
    WeightedPauliSum h(gens.num_qubits());
    for (std::size_t k = 0; k < gens.size(); ++k) {
        const double a = schedule.amplitudes(static_cast<Eigen::Index>(bin), static_cast<Eigen::Index>(k));
        if (a != 0.0) h += a * gens[k].op;
    }
    return h;
}

ComplexMatrix expm_hermitian(const ComplexMatrix &h, double t) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    ComplexVector phases = (es.eigenvalues().cast<Complex>() * Complex(0.0, -t)).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix propagate_unitary(const GeneratorSet &gens, const PulseSchedule &schedule) {
    require_dense_size(gens.num_qubits(), kMaxUnitaryQubits, "propagate_unitary");
    schedule.validate(gens.size());
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << gens.num_qubits());
    ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
    for (std::size_t l = 0; l < schedule.bins(); ++l) {
        u = expm_hermitian(densify(bin_hamiltonian(gens, schedule, l)), schedule.dt) * u;
    }
    return u;
}

ComplexVector lanczos_expv(const PauliOperator &h, const ComplexVector &psi, double t, double tol) {
    constexpr int kMaxKrylov = 60;
    const double norm = psi.norm();
    if (norm == 0.0 || t == 0.0) return psi;
    for (int pieces = 1; pieces <= (1 << 16); pieces *= 2) {
        const double step = t / pieces;
        ComplexVector x = psi;
        bool ok = true;
        for (int s = 0; s < pieces && ok; ++s) {
            const double nx = x.norm();
            const int cap = static_cast<int>(std::min<Eigen::Index>(kMaxKrylov, x.size()));
            ComplexMatrix v(x.size(), cap + 1);
            std::vector<double> alpha, beta;
            v.col(0) = x / nx;
            ComplexVector result;
            for (int j = 0; j < cap; ++j) {
                ComplexVector w = h.apply(ComplexVector(v.col(j)));
                alpha.push_back(v.col(j).dot(w).real());
                for (int pass = 0; pass < 2; ++pass) {
                    ComplexVector coeffs = v.leftCols(j + 1).adjoint() * w;
                    w.noalias() -= v.leftCols(j + 1) * coeffs;
                }
                const double b = w.norm();
                const int m = j + 1;
                Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
                for (int q = 0; q < m; ++q) tri(q, q) = alpha[static_cast<std::size_t>(q)];
                for (int q = 0; q + 1 < m; ++q) tri(q, q + 1) = tri(q + 1, q) = beta[static_cast<std::size_t>(q)];
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
                ComplexVector coeff =
                    es.eigenvectors().cast<Complex>() *
                    ((es.eigenvalues().cast<Complex>() * Complex(0.0, -step)).array().exp() *
                     es.eigenvectors().row(0).transpose().cast<Complex>().array())
                        .matrix();
                const double estimate = b * std::abs(coeff[m - 1]);
                if (estimate <= tol || b < 1e-14) {
                    result = nx * (v.leftCols(m) * coeff);
                    break;
                }
                if (m == cap) break;
                beta.push_back(b);
                v.col(j + 1) = w / b;
            }
            if (result.size() == 0) {
                ok = false;
            } else {
                x = result;
            }
        }
        if (ok) return x;
    }
    throw IntegratorError("Lanczos state exponential did not converge", 0);
}

ComplexVector propagate_state(const GeneratorSet &gens, const PulseSchedule &schedule, const ComplexVector &psi0) {
    require_dense_size(gens.num_qubits(), kMaxDenseQubits, "propagate_state");
    schedule.validate(gens.size());
    ComplexVector psi = psi0;
    const bool small = (std::size_t{1} << gens.num_qubits()) <= 256;
    for (std::size_t l = 0; l < schedule.bins(); ++l) {
        WeightedPauliSum h = bin_hamiltonian(gens, schedule, l);
        if (small) {
            psi = expm_hermitian(densify(h), schedule.dt) * psi;
        } else {
            try {
                psi = lanczos_expv(PauliOperator(h), psi, schedule.dt);
            } catch (const IntegratorError &) {
                throw IntegratorError("Lanczos state exponential did not converge", l);
            }
        }
    }
    return psi;
}

double state_fidelity(const ComplexVector &psi, const ComplexVector &target) {
    if (psi.size() != target.size()) throw DimensionError("state size mismatch");
    return std::norm(target.dot(psi));
}

double state_fidelity(const ComplexMatrix &u, const ComplexVector &psi0, const ComplexVector &target) {
    if (u.cols() != psi0.size()) throw DimensionError("state size mismatch");
    return state_fidelity(ComplexVector(u * psi0), target);
}

double gate_fidelity(const ComplexMatrix &u, const ComplexMatrix &target) {
    if (u.rows() != target.rows() || u.cols() != target.cols()) throw DimensionError("unitary size mismatch");
    const double dim = static_cast<double>(u.rows());
    return std::norm((u.adjoint() * target).trace()) / (dim * dim);
}

double expectation(const WeightedPauliSum &op, const ComplexVector &psi) {
    return psi.dot(PauliOperator(op).apply(psi)).real();
}

LowLevels lowest_levels(const WeightedPauliSum &h) {
    const std::size_t n = h.num_qubits();
    require_dense_size(n, kMaxDenseQubits, "lowest_levels");
    LowLevels out;
    if (n <= 8) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(densify(h));
        out.e0 = es.eigenvalues()[0];
        out.e1 = es.eigenvalues().size() > 1 ? es.eigenvalues()[1] : es.eigenvalues()[0];
        out.ground = es.eigenvectors().col(0);
    } else {
        // Lanczos with full reorthogonalization from a seeded random start.
        PauliOperator op(h);
        const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
        const int cap = 400;
        std::mt19937_64 rng(20260101);
        std::normal_distribution<double> normal;
        ComplexVector start(dim);
        for (Eigen::Index i = 0; i < dim; ++i) start[i] = Complex(normal(rng), normal(rng));
        ComplexMatrix v(dim, cap + 1);
        v.col(0) = start.normalized();
        std::vector<double> alpha, beta;
        bool converged = false;
        for (int j = 0; j < cap; ++j) {
            ComplexVector w = op.apply(ComplexVector(v.col(j)));
            alpha.push_back(v.col(j).dot(w).real());
            for (int pass = 0; pass < 2; ++pass) {
                ComplexVector coeffs = v.leftCols(j + 1).adjoint() * w;
                w.noalias() -= v.leftCols(j + 1) * coeffs;
            }
            const double b = w.norm();
            const int m = j + 1;
            if (m >= 2 && (m % 10 == 0 || b < 1e-12 || m == cap)) {
                Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
                for (int q = 0; q < m; ++q) tri(q, q) = alpha[static_cast<std::size_t>(q)];
                for (int q = 0; q + 1 < m; ++q) tri(q, q + 1) = tri(q + 1, q) = beta[static_cast<std::size_t>(q)];
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
                const double r0 = b * std::abs(es.eigenvectors()(m - 1, 0));
                const double r1 = b * std::abs(es.eigenvectors()(m - 1, 1));
                if ((r0 < 1e-10 && r1 < 1e-10) || b < 1e-12 || m == cap) {
                    out.e0 = es.eigenvalues()[0];
                    out.e1 = es.eigenvalues()[1];
                    out.ground = (v.leftCols(m) * es.eigenvectors().col(0).cast<Complex>()).normalized();
                    converged = r0 < 1e-8 && r1 < 1e-8;
                    break;
                }
            }
            beta.push_back(b);
            v.col(j + 1) = w / b;
        }
        if (!converged) throw IntegratorError("Lanczos eigensolver did not converge", 0);
    }
    out.degenerate = out.e1 - out.e0 < 1e-10;
    return out;
}

std::size_t commutant_dimension(const std::vector<WeightedPauliSum> &ops) {
    if (ops.empty()) throw ConfigError("commutant_dimension needs at least one operator");
    const std::size_t n = ops.front().num_qubits();
    require_dense_size(n, kMaxCommutantQubits, "commutant_dimension");
    std::vector<PauliString> singles;
    std::vector<const WeightedPauliSum *> sums;
    for (const auto &op : ops) {
        if (op.num_qubits() != n) throw DimensionError("commutant operators disagree on qubit count");
        if (op.size() == 1) {
            singles.push_back(op.terms().begin()->first);
        } else if (op.size() > 1) {
            sums.push_back(&op);
        }
    }
    // Strings commuting with every single-string operator span an exact
    // coordinate subspace of the commutant candidates.
    std::vector<PauliString> candidates;
    const std::uint64_t total = std::uint64_t{1} << (2 * n);
    for (std::uint64_t code = 0; code < total; ++code) {
        PauliString p(n);
        for (std::size_t s = 0; s < n; ++s) p.set(s, "IXYZ"[(code >> (2 * s)) & 3]);
        bool ok = true;
        for (const auto &q : singles) {
            if (anticommutes(p, q)) {
                ok = false;
                break;
            }
        }
        if (ok) candidates.push_back(p);
    }
    if (sums.empty()) return candidates.size();
    // Stack the maps A -> i[A, op] for the multi-term operators.
    std::unordered_map<PauliString, Eigen::Index> rows;
    std::vector<Eigen::Triplet<double>> entries;
    Eigen::Index offset = 0;
    for (const auto *op : sums) {
        rows.clear();
        Eigen::Index used = 0;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            for (const auto &[s, coeff] : op->terms()) {
                auto w = commutator(candidates[c], s);
                if (!w) continue;
                auto [it, inserted] = rows.try_emplace(w->string, used);
                if (inserted) ++used;
                entries.emplace_back(offset + it->second, static_cast<Eigen::Index>(c), coeff * w->weight);
            }
        }
        offset += used;
    }
    if (offset == 0) return candidates.size();
    Eigen::SparseMatrix<double> sparse(offset, static_cast<Eigen::Index>(candidates.size()));
    sparse.setFromTriplets(entries.begin(), entries.end());
    Eigen::MatrixXd dense(sparse);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(dense);
    qr.setThreshold(1e-10);
    return candidates.size() - static_cast<std::size_t>(qr.rank());
}

ComplexMatrix rotation_matrix(const WeightedPauliSum &generator, double angle) {
    const std::size_t n = generator.num_qubits();
    require_dense_size(n, kMaxUnitaryQubits, "rotation_matrix");
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    if (!all_terms_commute(generator)) return expm_hermitian(densify(generator), -angle);
    ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
    for (const auto &[p, c] : generator.terms()) {
        const double theta = angle * c;
        ComplexMatrix factor = std::cos(theta) * ComplexMatrix::Identity(dim, dim) + kI * std::sin(theta) * densify(p);
        u = u * factor;
    }
    return u;
}

ComplexMatrix w_unitary(TargetId id, std::size_t n, WConstruction mode) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    ComplexMatrix w = ComplexMatrix::Identity(dim, dim);
    for (const auto &r : w_factors(id, n, mode)) w = w * rotation_matrix(r.generator, r.angle);
    return w;
}

AnalyticTargetReport verify_analytic_targets(std::size_t n, WConstruction mode, bool reverse_factor_order) {
    require_dense_size(n, kMaxUnitaryQubits, "verify_analytic_targets");
    AnalyticTargetReport report;
    report.n = n;
    const ComplexMatrix i0 = densify(initial_invariant(n));
    auto deviation = [&](TargetId id) {
        auto factors = w_factors(id, n, mode);
        if (reverse_factor_order) std::reverse(factors.begin(), factors.end());
        const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
        ComplexMatrix w = ComplexMatrix::Identity(dim, dim);
        for (const auto &r : factors) w = w * rotation_matrix(r.generator, r.angle);
        return (w.adjoint() * i0 * w - densify(target_hamiltonian(id, n))).cwiseAbs().maxCoeff();
    };
    report.ghz_deviation = deviation(TargetId::ghz);
    report.cluster_deviation = deviation(TargetId::cluster);
    return report;
}

}  // namespace lieopt
