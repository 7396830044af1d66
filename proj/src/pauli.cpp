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

#include "lieopt/pauli.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lieopt/errors.hpp"

namespace lieopt {

namespace {

void require_same_size(std::size_t a, std::size_t b) {
    if (a != b) {
        throw DimensionError("qubit count mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

PauliString::PauliString(std::size_t num_qubits) : num_qubits_(static_cast<std::uint32_t>(num_qubits)) {
    if (num_qubits > kMaxQubits) {
        throw DimensionError("at most " + std::to_string(kMaxQubits) + " qubits are supported");
    }
}

PauliString PauliString::parse(std::string_view text) {
    text = trim(text);
    std::uint8_t phase = 0;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
        if (text.front() == '-') phase = 2;
        text.remove_prefix(1);
    }
    if (!text.empty() && text.front() == 'i') {
        phase = static_cast<std::uint8_t>((phase + 1) & 3u);
        text.remove_prefix(1);
    }
    PauliString p(text.size());
    for (std::size_t k = 0; k < text.size(); ++k) {
        p.set(k, text[k]);
    }
    p.phase_ = phase;
    return p;
}

PauliString PauliString::single(std::size_t num_qubits, std::size_t site, char op) {
    PauliString p(num_qubits);
    p.set(site, op);
    return p;
}

PauliString PauliString::from_sites(std::size_t num_qubits,
                                    std::initializer_list<std::pair<std::size_t, char>> sites) {
    PauliString p(num_qubits);
    for (auto [site, op] : sites) {
        p = multiply(p, single(num_qubits, site, op));
    }
    return p;
}

char PauliString::op_at(std::size_t site) const {
    static constexpr char kOps[4] = {'I', 'X', 'Z', 'Y'};
    return kOps[(x(site) ? 1 : 0) | (z(site) ? 2 : 0)];
}

void PauliString::set(std::size_t site, char op) {
    if (site >= num_qubits_) {
        throw DimensionError("site " + std::to_string(site) + " out of range for " + std::to_string(num_qubits_) +
                             " qubits");
    }
    bool xb = false;
    bool zb = false;
    switch (op) {
        case 'I':
        case '_':
            break;
        case 'X':
            xb = true;
            break;
        case 'Y':
            xb = zb = true;
            break;
        case 'Z':
            zb = true;
            break;
        default:
            throw ConfigError(std::string("invalid Pauli character '") + op + "'");
    }
    const std::uint64_t bit = std::uint64_t{1} << (site & 63);
    auto &xw = x_[site >> 6];
    auto &zw = z_[site >> 6];
    xw = xb ? (xw | bit) : (xw & ~bit);
    zw = zb ? (zw | bit) : (zw & ~bit);
}

std::size_t PauliString::weight() const {
    std::size_t w = 0;
    for (std::size_t k = 0; k < kWords; ++k) w += std::popcount(x_[k] | z_[k]);
    return w;
}

bool PauliString::is_identity() const {
    for (std::size_t k = 0; k < kWords; ++k) {
        if (x_[k] | z_[k]) return false;
    }
    return true;
}

PauliString PauliString::canonical() const { return with_phase(0); }

PauliString PauliString::with_phase(std::uint8_t phase) const {
    PauliString p = *this;
    p.phase_ = phase & 3u;
    return p;
}

std::string PauliString::label() const {
    std::string s(num_qubits_, 'I');
    for (std::size_t k = 0; k < num_qubits_; ++k) s[k] = op_at(k);
    return s;
}

std::string PauliString::str() const {
    static constexpr const char *kPrefix[4] = {"", "i", "-", "-i"};
    return kPrefix[phase_] + label();
}

std::strong_ordering operator<=>(const PauliString &a, const PauliString &b) {
    if (auto c = a.num_qubits_ <=> b.num_qubits_; c != 0) return c;
    for (std::size_t k = PauliString::kWords; k-- > 0;) {
        if (auto c = a.z_[k] <=> b.z_[k]; c != 0) return c;
    }
    for (std::size_t k = PauliString::kWords; k-- > 0;) {
        if (auto c = a.x_[k] <=> b.x_[k]; c != 0) return c;
    }
    return a.phase_ <=> b.phase_;
}

bool anticommutes(const PauliString &p, const PauliString &q) {
    require_same_size(p.num_qubits(), q.num_qubits());
    unsigned parity = 0;
    for (std::size_t k = 0; k < PauliString::kWords; ++k) {
        parity ^= std::popcount((p.x_words()[k] & q.z_words()[k]) ^ (p.z_words()[k] & q.x_words()[k])) & 1u;
    }
    return parity != 0;
}

PauliString multiply(const PauliString &p, const PauliString &q) {
    require_same_size(p.num_qubits(), q.num_qubits());
    // Per site, sigma_a sigma_b = i^{+1} sigma_c for the cyclic pairs XY, YZ, ZX
    // and i^{-1} for the reversed pairs.
    int exponent = p.phase() + q.phase();
    PauliString r(p.num_qubits());
    for (std::size_t k = 0; k < PauliString::kWords; ++k) {
        const std::uint64_t x1 = p.x_[k], z1 = p.z_[k];
        const std::uint64_t x2 = q.x_[k], z2 = q.z_[k];
        const std::uint64_t X1 = x1 & ~z1, Y1 = x1 & z1, Z1 = ~x1 & z1;
        const std::uint64_t X2 = x2 & ~z2, Y2 = x2 & z2, Z2 = ~x2 & z2;
        const std::uint64_t plus = (X1 & Y2) | (Y1 & Z2) | (Z1 & X2);
        const std::uint64_t minus = (Y1 & X2) | (Z1 & Y2) | (X1 & Z2);
        exponent += std::popcount(plus) - std::popcount(minus);
        r.x_[k] = x1 ^ x2;
        r.z_[k] = z1 ^ z2;
    }
    r.phase_ = static_cast<std::uint8_t>(exponent & 3);
    return r;
}

std::optional<WeightedString> commutator(const PauliString &p, const PauliString &q) {
    if (!anticommutes(p, q)) return std::nullopt;
    // [p, q] = 2 p q, so i[p, q] = 2 i^{1 + e} S for p q = i^e S.
    const PauliString prod = multiply(p, q);
    const std::uint8_t e = (prod.phase() + 1) & 3u;
    if (e & 1u) {
        throw std::domain_error("i[p, q] is not Hermitian for " + p.str() + ", " + q.str());
    }
    return WeightedString{prod.canonical(), e == 0 ? 2.0 : -2.0};
}

WeightedPauliSum::WeightedPauliSum(const PauliString &p, double coefficient) : num_qubits_(p.num_qubits()) {
    add(p, coefficient);
}

WeightedPauliSum WeightedPauliSum::parse(std::string_view text) {
    WeightedPauliSum sum;
    bool sized = false;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find_first_of(";\n", start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view item = trim(text.substr(start, end - start));
        start = end + 1;
        if (item.empty()) continue;
        const std::size_t space = item.find_first_of(" \t");
        if (space == std::string_view::npos) {
            throw ConfigError("expected '<coefficient> <pauli>' but got '" + std::string(item) + "'");
        }
        const std::string coeff_text(trim(item.substr(0, space)));
        double c = 0.0;
        try {
            std::size_t used = 0;
            c = std::stod(coeff_text, &used);
            if (used != coeff_text.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception &) {
            throw ConfigError("invalid coefficient '" + coeff_text + "'");
        }
        PauliString p = PauliString::parse(item.substr(space + 1));
        if (!sized) {
            sum = WeightedPauliSum(p.num_qubits());
            sized = true;
        }
        sum.add(p, c);
    }
    return sum;
}

double WeightedPauliSum::coefficient(const PauliString &p) const {
    auto it = terms_.find(p.canonical());
    if (it == terms_.end()) return 0.0;
    return p.phase() == 2 ? -it->second : it->second;
}

WeightedPauliSum &WeightedPauliSum::add(const PauliString &p, double coefficient) {
    if (terms_.empty() && num_qubits_ == 0) num_qubits_ = p.num_qubits();
    require_same_size(num_qubits_, p.num_qubits());
    if (!p.is_hermitian()) {
        throw std::domain_error("term " + p.str() + " is not Hermitian");
    }
    const double c = p.phase() == 2 ? -coefficient : coefficient;
    if (c == 0.0) return *this;
    auto [it, inserted] = terms_.try_emplace(p.canonical(), c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
    return *this;
}

WeightedPauliSum &WeightedPauliSum::operator+=(const WeightedPauliSum &other) {
    if (other.terms_.empty()) return *this;
    for (const auto &[p, c] : other.terms_) add(p, c);
    return *this;
}

WeightedPauliSum &WeightedPauliSum::operator*=(double s) {
    if (s == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto &[p, c] : terms_) c *= s;
    return *this;
}

void WeightedPauliSum::prune(double tol) {
    std::erase_if(terms_, [tol](const auto &kv) { return std::abs(kv.second) <= tol; });
}

std::string WeightedPauliSum::str() const {
    std::ostringstream out;
    out.precision(17);
    bool first = true;
    for (const auto &[p, c] : terms_) {
        if (!first) out << "; ";
        out << c << ' ' << p.label();
        first = false;
    }
    return out.str();
}

double hs_inner(const WeightedPauliSum &a, const WeightedPauliSum &b) {
    if (!a.empty() && !b.empty()) require_same_size(a.num_qubits(), b.num_qubits());
    const auto &small = a.size() <= b.size() ? a : b;
    const auto &large = a.size() <= b.size() ? b : a;
    double acc = 0.0;
    for (const auto &[p, c] : small.terms()) {
        auto it = large.terms().find(p);
        if (it != large.terms().end()) acc += c * it->second;
    }
    return acc;
}

}  // namespace lieopt

std::size_t std::hash<lieopt::PauliString>::operator()(const lieopt::PauliString &p) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ p.num_qubits();
    for (std::size_t k = 0; k < lieopt::PauliString::kWords; ++k) {
        h ^= p.x_words()[k] + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h ^= p.z_words()[k] * 0xff51afd7ed558ccdull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h ^ p.phase());
}
