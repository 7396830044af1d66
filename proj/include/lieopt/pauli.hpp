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

#ifndef LIEOPT_PAULI_HPP
#define LIEOPT_PAULI_HPP

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lieopt {

/// Maximum number of qubits a PauliString can address.
inline constexpr std::size_t kMaxQubits = 128;

/// An n-qubit Pauli string i^phase * P_1 (x) ... (x) P_n in symplectic form.
///
/// Site p carries I/X/Y/Z for (x, z) = (0,0)/(1,0)/(1,1)/(0,1). The pair (1,1)
/// denotes the Hermitian Y, so a string with phase 0 or 2 is Hermitian and one
/// with phase 1 or 3 is anti-Hermitian. Site 0 is qubit 1 in user-facing text
/// and the leftmost Kronecker factor in dense matrices.
///
/// Ordering compares the z mask as a big integer first, then the x mask, then
/// the phase; it is the canonical ordering used for basis indices.
class PauliString {
   public:
    static constexpr std::size_t kWords = kMaxQubits / 64;

    PauliString() = default;
    /// Identity string on `num_qubits` qubits.
    explicit PauliString(std::size_t num_qubits);

    /// Parses "XZIIY" with an optional leading "+", "-", "i", "+i" or "-i".
    static PauliString parse(std::string_view text);
    /// Single-site operator `op` in {I, X, Y, Z} at 0-based `site`.
    static PauliString single(std::size_t num_qubits, std::size_t site, char op);
    /// Product of single-site operators, e.g. {{0,'X'},{1,'Y'}}.
    static PauliString from_sites(std::size_t num_qubits, std::initializer_list<std::pair<std::size_t, char>> sites);

    std::size_t num_qubits() const { return num_qubits_; }
    /// Exponent of i in {0,1,2,3}.
    std::uint8_t phase() const { return phase_; }
    bool x(std::size_t site) const { return (x_[site >> 6] >> (site & 63)) & 1u; }
    bool z(std::size_t site) const { return (z_[site >> 6] >> (site & 63)) & 1u; }
    char op_at(std::size_t site) const;
    void set(std::size_t site, char op);

    const std::array<std::uint64_t, kWords> &x_words() const { return x_; }
    const std::array<std::uint64_t, kWords> &z_words() const { return z_; }

    /// Number of non-identity sites.
    std::size_t weight() const;
    bool is_identity() const;
    bool is_hermitian() const { return (phase_ & 1u) == 0; }
    /// Same masks with the phase dropped.
    PauliString canonical() const;
    PauliString with_phase(std::uint8_t phase) const;

    /// Masks only, e.g. "XZIIY".
    std::string label() const;
    /// Label with a sign prefix when the phase is not +1.
    std::string str() const;

    friend bool operator==(const PauliString &, const PauliString &) = default;
    friend std::strong_ordering operator<=>(const PauliString &a, const PauliString &b);
    friend PauliString multiply(const PauliString &p, const PauliString &q);

   private:
    std::uint32_t num_qubits_ = 0;
    std::uint8_t phase_ = 0;
    std::array<std::uint64_t, kWords> x_{};
    std::array<std::uint64_t, kWords> z_{};
};

/// True iff the symplectic product of the masks is odd.
bool anticommutes(const PauliString &p, const PauliString &q);

/// The product p*q including its accumulated phase.
PauliString multiply(const PauliString &p, const PauliString &q);

/// A canonical (phase-free, Hermitian) Pauli string with a real weight.
struct WeightedString {
    PauliString string;
    double weight = 0.0;
};

/// i[p, q] as weight * string, or nullopt when p and q commute.
///
/// Throws DimensionError on mismatched qubit counts and std::domain_error when
/// i[p, q] is not Hermitian (only possible for anti-Hermitian inputs).
std::optional<WeightedString> commutator(const PauliString &p, const PauliString &q);

/// Real linear combination of canonical Hermitian Pauli strings.
///
/// Terms are kept in canonical order with no zero coefficients.
class WeightedPauliSum {
   public:
    WeightedPauliSum() = default;
    explicit WeightedPauliSum(std::size_t num_qubits) : num_qubits_(num_qubits) {}
    /// Single term; the phase of `p` must be +1 or -1.
    WeightedPauliSum(const PauliString &p, double coefficient = 1.0);

    /// Parses "c1 S1; c2 S2; ..." (newlines also separate pairs).
    static WeightedPauliSum parse(std::string_view text);

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    const std::map<PauliString, double> &terms() const { return terms_; }
    double coefficient(const PauliString &p) const;

    /// Adds coefficient * p; a phase of -1 flips the sign, phases +-i throw.
    WeightedPauliSum &add(const PauliString &p, double coefficient);
    WeightedPauliSum &operator+=(const WeightedPauliSum &other);
    WeightedPauliSum &operator*=(double s);
    friend WeightedPauliSum operator+(WeightedPauliSum a, const WeightedPauliSum &b) { return a += b; }
    friend WeightedPauliSum operator*(double s, WeightedPauliSum a) { return a *= s; }
    friend bool operator==(const WeightedPauliSum &, const WeightedPauliSum &) = default;

    /// Drops terms with |coefficient| <= tol.
    void prune(double tol = 0.0);
    std::string str() const;

   private:
    std::size_t num_qubits_ = 0;
    std::map<PauliString, double> terms_;
};

/// tr(a b) / 2^n computed from matching canonical terms.
double hs_inner(const WeightedPauliSum &a, const WeightedPauliSum &b);

}  // namespace lieopt

template <>
struct std::hash<lieopt::PauliString> {
    std::size_t operator()(const lieopt::PauliString &p) const noexcept;
};

#endif
