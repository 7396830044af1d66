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

#include "lieopt/models.hpp"

#include <numbers>

#include "lieopt/errors.hpp"

namespace lieopt {

namespace {

PauliString sites(std::size_t n, std::initializer_list<std::pair<std::size_t, char>> ops) {
    return PauliString::from_sites(n, ops);
}

Generator control(const PauliString &p, std::string label) { return {WeightedPauliSum(p), false, std::move(label)}; }

WeightedPauliSum xx_chain(std::size_t n) {
    WeightedPauliSum s(n);
    for (std::size_t j = 0; j + 1 < n; ++j) s.add(sites(n, {{j, 'X'}, {j + 1, 'X'}}), 1.0);
    return s;
}

WeightedPauliSum z_string(std::size_t n) {
    PauliString p(n);
    for (std::size_t j = 0; j < n; ++j) p.set(j, 'Z');
    return WeightedPauliSum(p);
}

}  // namespace

std::string to_string(ModelId id) {
    switch (id) {
        case ModelId::chain: return "chain";
        case ModelId::comb: return "comb";
        case ModelId::hex_ladder: return "hex-ladder";
    }
    return "?";
}

ModelId parse_model_id(std::string_view text) {
    if (text == "chain") return ModelId::chain;
    if (text == "comb") return ModelId::comb;
    if (text == "hex-ladder" || text == "hex_ladder" || text == "ladder") return ModelId::hex_ladder;
    throw ConfigError("unknown model '" + std::string(text) + "'");
}

std::string ModelSpec::site_layout() const {
    if (id == ModelId::chain) return "site j -> index j-1";
    const std::size_t m = num_qubits / 2;
    return "row-1 site j -> index j-1, row-2 site j -> index " + std::to_string(m) + "+j-1";
}

ModelSpec chain_model(std::size_t n) {
    if (n < 2) throw ConfigError("chain model needs n >= 2, got " + std::to_string(n));
    std::vector<Generator> gens;
    for (std::size_t j = 0; j < n; ++j) gens.push_back(control(sites(n, {{j, 'Z'}}), "f" + std::to_string(j + 1)));
    gens.push_back(control(sites(n, {{0, 'X'}}), "w1"));
    gens.push_back(control(sites(n, {{n - 1, 'X'}}), "w" + std::to_string(n)));
    gens.push_back({xx_chain(n), true, "g"});
    return {ModelId::chain, n, GeneratorSet(n, std::move(gens))};
}

ModelSpec comb_model(std::size_t n) {
    if (n < 4 || n % 2 != 0) throw ConfigError("comb model needs even n >= 4, got " + std::to_string(n));
    const std::size_t m = n / 2;
    auto top = [](std::size_t j) { return j - 1; };
    auto bottom = [m](std::size_t j) { return m + j - 1; };
    std::vector<Generator> gens;
    for (std::size_t j = 1; j <= m; ++j) {
        gens.push_back(control(sites(n, {{top(j), 'Z'}, {bottom(j), 'Z'}}), "zz" + std::to_string(j)));
    }
    for (std::size_t j = 1; j <= m; ++j) gens.push_back(control(sites(n, {{bottom(j), 'X'}}), "x" + std::to_string(j)));
    for (std::size_t j = 1; j < m; ++j) {
        gens.push_back(control(sites(n, {{top(j), 'X'}, {top(j + 1), 'Y'}}), "xy" + std::to_string(j)));
    }
    return {ModelId::comb, n, GeneratorSet(n, std::move(gens))};
}

ModelSpec hex_ladder_model(std::size_t n) {
    // Row length m = n/2 must be odd so that the bond ranges j <= (m-1)/2 and
    // l <= (m+1)/2 tile both rows; that is exactly n = 4 n_h + 2.
    if (n < 6 || (n - 2) % 4 != 0) {
        throw ConfigError("hex-ladder model needs n = 4*n_h + 2 with n_h >= 1, got " + std::to_string(n));
    }
    const std::size_t m = n / 2;
    auto top = [](std::size_t j) { return j - 1; };
    auto bottom = [m](std::size_t j) { return m + j - 1; };
    const std::size_t half = (m - 1) / 2;
    std::vector<Generator> gens;
    for (std::size_t j = 1; j <= half; ++j) {
        gens.push_back(control(sites(n, {{top(2 * j - 1), 'Y'}, {top(2 * j), 'Y'}}), "yy" + std::to_string(j)));
    }
    for (std::size_t j = 1; j <= half; ++j) {
        gens.push_back(control(sites(n, {{top(2 * j), 'Z'}, {top(2 * j + 1), 'Z'}}), "zz" + std::to_string(j)));
    }
    for (std::size_t j = 1; j <= half; ++j) {
        gens.push_back(control(sites(n, {{bottom(2 * j), 'X'}, {bottom(2 * j + 1), 'X'}}), "xx" + std::to_string(j)));
    }
    for (std::size_t j = 1; j <= half; ++j) {
        gens.push_back(control(sites(n, {{bottom(2 * j - 1), 'Z'}, {bottom(2 * j), 'X'}}), "zx" + std::to_string(j)));
    }
    for (std::size_t l = 1; l <= (m + 1) / 2; ++l) {
        gens.push_back(control(sites(n, {{top(2 * l - 1), 'X'}, {bottom(2 * l - 1), 'Y'}}), "xy" + std::to_string(l)));
    }
    return {ModelId::hex_ladder, n, GeneratorSet(n, std::move(gens))};
}

ModelSpec make_model(ModelId id, std::size_t n) {
    switch (id) {
        case ModelId::chain: return chain_model(n);
        case ModelId::comb: return comb_model(n);
        case ModelId::hex_ladder: return hex_ladder_model(n);
    }
    throw ConfigError("unknown model");
}

std::optional<std::size_t> closure_dimension_formula(ModelId id, std::size_t n) {
    switch (id) {
        case ModelId::chain:
            if (n < 2) return std::nullopt;
            return 2 * n * n + 3 * n + 1;
        case ModelId::comb: {
            if (n < 4 || n % 2) return std::nullopt;
            const std::size_t m = n / 2;
            return 3 * m * (3 * m - 1) / 2;
        }
        case ModelId::hex_ladder:
            if (n < 6 || (n - 2) % 4) return std::nullopt;
            return (25 * n * n - 40 * n + 12) / 32;
    }
    return std::nullopt;
}

GeneratorSet ising_generators(std::size_t n) {
    if (n < 2) throw ConfigError("Ising generators need n >= 2");
    std::vector<Generator> gens;
    for (std::size_t j = 0; j < n; ++j) gens.push_back(control(sites(n, {{j, 'Z'}}), "f" + std::to_string(j + 1)));
    gens.push_back({xx_chain(n), true, "g"});
    return GeneratorSet(n, std::move(gens));
}

std::string to_string(TargetId id) {
    switch (id) {
        case TargetId::ghz: return "G";
        case TargetId::cluster: return "C";
        case TargetId::d: return "D";
    }
    return "?";
}

TargetId parse_target_id(std::string_view text) {
    if (text.starts_with("H_") || text.starts_with("U_")) text.remove_prefix(2);
    if (text == "G") return TargetId::ghz;
    if (text == "C") return TargetId::cluster;
    if (text == "D") return TargetId::d;
    throw ConfigError("unknown target '" + std::string(text) + "'");
}

WeightedPauliSum initial_invariant(std::size_t n) {
    WeightedPauliSum s(n);
    for (std::size_t j = 0; j < n; ++j) s.add(sites(n, {{j, 'Z'}}), 1.0);
    return s;
}

WeightedPauliSum target_hamiltonian(TargetId id, std::size_t n) {
    if (n < 3) throw ConfigError("target Hamiltonians need n >= 3, got " + std::to_string(n));
    switch (id) {
        case TargetId::ghz: return -1.0 * xx_chain(n) + (-1.0) * z_string(n);
        case TargetId::cluster: {
            WeightedPauliSum s(n);
            s.add(sites(n, {{0, 'Z'}, {1, 'X'}}), 1.0);
            for (std::size_t j = 0; j + 2 < n; ++j) s.add(sites(n, {{j, 'X'}, {j + 1, 'Z'}, {j + 2, 'X'}}), 1.0);
            s.add(sites(n, {{n - 2, 'X'}, {n - 1, 'Z'}}), 1.0);
            return s;
        }
        case TargetId::d: return target_hamiltonian(TargetId::cluster, n) + xx_chain(n);
    }
    throw ConfigError("unknown target");
}

WeightedPauliSum bridge_hamiltonian(std::size_t n) {
    WeightedPauliSum s = initial_invariant(n) + xx_chain(n);
    s.add(sites(n, {{0, 'X'}}), 1.0);
    s.add(sites(n, {{n - 1, 'X'}}), 1.0);
    return s;
}

std::vector<Rotation> w_factors(TargetId id, std::size_t n, WConstruction mode) {
    if (n < 2) throw ConfigError("W construction needs n >= 2");
    constexpr double kQuarter = std::numbers::pi / 4;
    std::vector<Rotation> out;
    const bool odd = n % 2 == 1;
    const bool flip = mode == WConstruction::parity_corrected && odd;
    if (id == TargetId::ghz) {
        for (std::size_t k = 0; k + 1 < n; ++k) out.push_back({WeightedPauliSum(sites(n, {{k, 'X'}, {k + 1, 'Y'}})), -kQuarter});
        WeightedPauliSum ends(n);
        ends.add(sites(n, {{0, 'X'}}), 1.0);
        ends.add(sites(n, {{n - 1, 'X'}}), flip ? 1.0 : -1.0);
        out.push_back({ends, kQuarter});
    } else if (id == TargetId::cluster) {
        for (std::size_t k = 0; k + 1 < n; ++k) {
            // 1-based bond index k+1 carries the sign (-1)^(k+1).
            const double sign = (k % 2 == 0) ? -1.0 : 1.0;
            out.push_back({WeightedPauliSum(sites(n, {{k, 'X'}, {k + 1, 'X'}})), sign * kQuarter});
        }
        WeightedPauliSum ends(n);
        ends.add(sites(n, {{0, 'X'}}), 1.0);
        ends.add(sites(n, {{n - 1, 'X'}}), flip ? -1.0 : 1.0);
        out.push_back({ends, kQuarter});
    } else {
        throw ConfigError("no analytic W construction for target D");
    }
    return out;
}

Eigen::VectorXd analytic_target(const OperatorBasis &basis, TargetId id) {
    if (id == TargetId::d) throw ConfigError("target D has no analytic invariant; use the adiabatic target");
    return expand_in_basis(basis, target_hamiltonian(id, basis.num_qubits()));
}

}  // namespace lieopt
