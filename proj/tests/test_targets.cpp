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

#include <gtest/gtest.h>

#include <cmath>

#include "dense_oracle.hpp"
#include "lieopt/models.hpp"
#include "lieopt/errors.hpp"
#include "lieopt/targets.hpp"

using namespace lieopt;

namespace {

oracle::Mat dense_of(const OperatorBasis &basis, const Eigen::VectorXd &c) {
    std::vector<std::pair<double, std::string>> terms;
    for (std::size_t j = 0; j < basis.size(); ++j) terms.emplace_back(c[static_cast<Eigen::Index>(j)], basis[j].label());
    return oracle::dense_sum(terms, static_cast<int>(basis.num_qubits()));
}

oracle::Mat dense_of(const WeightedPauliSum &op) {
    std::vector<std::pair<double, std::string>> terms;
    for (const auto &[p, c] : op.terms()) terms.emplace_back(c, p.label());
    return oracle::dense_sum(terms, static_cast<int>(op.num_qubits()));
}

}  // namespace

TEST(Adiabatic, RampEndpointsAndNorm) {
    const std::size_t n = 4;
    auto basis = generate_closure(chain_model(n).generators);
    Eigen::VectorXd a0 = expand_in_basis(basis, initial_invariant(n));
    EXPECT_NEAR(a0.norm(), std::sqrt(4.0), 1e-15);
    AdiabaticSpec spec{5.0, 0};
    EXPECT_EQ(spec.resolved_steps(), 100u);
    Eigen::VectorXd ad = adiabatic_target(basis, spec);
    EXPECT_NEAR(ad.norm(), a0.norm(), 1e-10);
    EXPECT_THROW((AdiabaticSpec{0.0, 0}).resolved_steps(), Error);
}

TEST(Adiabatic, StepDoublingConverges) {
    const std::size_t n = 4;
    auto basis = generate_closure(chain_model(n).generators);
    const double ta = 10.0;
    auto at = [&](std::size_t per_tau) {
        return adiabatic_target(basis, AdiabaticSpec{ta, static_cast<std::size_t>(ta * per_tau)});
    };
    Eigen::VectorXd a20 = at(20), a40 = at(40), a80 = at(80), a1280 = at(1280), a2560 = at(2560);
    // Midpoint sampling is second order: halving the step quarters the change.
    const double ratio = (a20 - a40).norm() / (a40 - a80).norm();
    EXPECT_GT(ratio, 3.5);
    EXPECT_LT(ratio, 4.5);
    EXPECT_LT((a1280 - a2560).norm(), 1e-6);
}

TEST(Adiabatic, ErrorVanishesForTargetItself) {
    const std::size_t n = 5;
    auto basis = generate_closure(chain_model(n).generators);
    auto h = target_hamiltonian(TargetId::d, n);
    EXPECT_NEAR(adiabatic_error(basis, expand_in_basis(basis, h), h, 75 * kTauG), 0.0, 1e-10);
}

TEST(Adiabatic, HoldTimeRange) {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 100; ++k) {
        double t = draw_hold_time(rng);
        EXPECT_GE(t, 50 * kTauG);
        EXPECT_LE(t, 100 * kTauG);
    }
}

TEST(Adiabatic, SpectrumPreserved) {
    for (std::size_t n : {3u, 4u, 5u, 6u}) {
        auto basis = generate_closure(chain_model(n).generators);
        Eigen::VectorXd ad = adiabatic_target(basis, AdiabaticSpec{20.0, 0});
        Eigen::SelfAdjointEigenSolver<oracle::Mat> got(dense_of(basis, ad));
        Eigen::SelfAdjointEigenSolver<oracle::Mat> want(dense_of(initial_invariant(n)));
        EXPECT_LT((got.eigenvalues() - want.eigenvalues()).cwiseAbs().maxCoeff(), 1e-8) << n;
    }
}

TEST(Adiabatic, ErrorDecreasesWithRampDuration) {
    const std::size_t n = 4;
    auto basis = generate_closure(chain_model(n).generators);
    auto h = target_hamiltonian(TargetId::d, n);
    std::vector<double> errors;
    for (double ta : {50.0, 250.0, 1250.0}) {
        Eigen::VectorXd ad = adiabatic_target(basis, AdiabaticSpec{ta, 0});
        errors.push_back(adiabatic_error(basis, ad, h, 75 * kTauG));
    }
    EXPECT_GT(errors[0], errors[1]);
    EXPECT_GT(errors[1], errors[2]);
}

TEST(Adiabatic, GroundStateOverlapAtFiveHundredTau) {
    const std::size_t n = 4;
    auto basis = generate_closure(chain_model(n).generators);
    Eigen::VectorXd ad = adiabatic_target(basis, AdiabaticSpec{500.0, 0});
    Eigen::SelfAdjointEigenSolver<oracle::Mat> id(dense_of(basis, ad));
    Eigen::SelfAdjointEigenSolver<oracle::Mat> hd(dense_of(target_hamiltonian(TargetId::d, n)));
    const double overlap = std::norm(id.eigenvectors().col(0).dot(hd.eigenvectors().col(0)));
    EXPECT_GT(overlap, 0.999);
}
