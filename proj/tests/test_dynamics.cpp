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

#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "dense_oracle.hpp"
#include "lieopt/dynamics.hpp"
#include "lieopt/errors.hpp"
#include "lieopt/models.hpp"

using namespace lieopt;

namespace {

struct Chain {
    ModelSpec model;
    OperatorBasis basis;
    StructureConstants sc;
    explicit Chain(std::size_t n)
        : model(chain_model(n)), basis(generate_closure(model.generators)), sc(structure_constants(basis, model.generators)) {}
};

PulseSchedule random_schedule(std::mt19937 &rng, std::size_t bins, double dt, std::size_t generators, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Eigen::MatrixXd amps(static_cast<Eigen::Index>(bins), static_cast<Eigen::Index>(generators));
    for (Eigen::Index r = 0; r < amps.rows(); ++r)
        for (Eigen::Index c = 0; c < amps.cols(); ++c) amps(r, c) = u(rng);
    amps.col(amps.cols() - 1).setOnes();  // chain drift g = 1
    return PulseSchedule(dt, amps);
}

Eigen::VectorXd random_unit(std::mt19937 &rng, std::size_t d) {
    std::normal_distribution<double> g;
    Eigen::VectorXd v(static_cast<Eigen::Index>(d));
    for (auto &x : v) x = g(rng);
    return v.normalized();
}

}  // namespace

TEST(Expv, MatchesDenseExponential) {
    std::mt19937 rng(2);
    std::normal_distribution<double> g;
    for (int t = 0; t < 10; ++t) {
        const int d = 30 + 10 * t;
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
        for (int k = 0; k < 4 * d; ++k) {
            int r = static_cast<int>(rng() % d), c = static_cast<int>(rng() % d);
            if (r == c) continue;
            double v = g(rng);
            a(r, c) += v;
            a(c, r) -= v;
        }
        SparseMatrix s = a.sparseView();
        Eigen::VectorXd v = random_unit(rng, static_cast<std::size_t>(d));
        const double time = 0.3 + 0.5 * t;
        ExpvStats stats;
        Eigen::VectorXd got = expv(time, s, v, {}, &stats);
        Eigen::MatrixXd scaled = time * a;
        Eigen::VectorXd expected = scaled.exp() * v;
        EXPECT_TRUE(stats.converged);
        EXPECT_LT((got - expected).norm(), 1e-10) << "t=" << t;
        EXPECT_NEAR(got.norm(), 1.0, 1e-13);
    }
}

TEST(Expv, SplitsLongIntervals) {
    // exp(t A) for a 2x2 rotation generator over many periods.
    Eigen::MatrixXd a(2, 2);
    a << 0, -1, 1, 0;
    SparseMatrix s = a.sparseView();
    Eigen::VectorXd v(2);
    v << 1, 0;
    ExpvStats stats;
    Eigen::VectorXd got = expv(200.0, s, v, {}, &stats);
    EXPECT_NEAR(got[0], std::cos(200.0), 1e-11);
    EXPECT_NEAR(got[1], std::sin(200.0), 1e-11);
}

TEST(KAssembler, LinearAndAntisymmetric) {
    Chain c(4);
    KAssembler assembler(c.sc);
    const auto d0 = static_cast<Eigen::Index>(c.sc.num_generators());
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(d0);
    EXPECT_EQ(Eigen::MatrixXd(assembler.assemble(zero)).cwiseAbs().maxCoeff(), 0.0);
    Eigen::VectorXd one = Eigen::VectorXd::Zero(d0);
    one[0] = 2.0;
    EXPECT_EQ((Eigen::MatrixXd(assembler.assemble(one)) - 2.0 * Eigen::MatrixXd(c.sc.k_matrices[0])).cwiseAbs().maxCoeff(), 0.0);
    std::mt19937 rng(4);
    Eigen::VectorXd amps = Eigen::VectorXd::Random(d0);
    Eigen::MatrixXd k = assembler.assemble(amps);
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(k.rows(), k.cols());
    for (Eigen::Index g = 0; g < d0; ++g) expected += amps[g] * Eigen::MatrixXd(c.sc.k_matrices[static_cast<std::size_t>(g)]);
    EXPECT_LT((k - expected).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_EQ((k + k.transpose()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_THROW(assembler.assemble(Eigen::VectorXd::Zero(2)), DimensionError);
}

TEST(KAssembler, ChainN2MatchesDenseTrace) {
    Chain c(2);
    Eigen::VectorXd amps = Eigen::VectorXd::Ones(5);
    Eigen::MatrixXd k = assemble_k(c.sc, amps);
    oracle::Mat h = oracle::dense_sum({{1, "ZI"}, {1, "IZ"}, {1, "XI"}, {1, "IX"}, {1, "XX"}}, 2);
    const oracle::cd i(0, 1);
    for (std::size_t j = 0; j < c.basis.size(); ++j) {
        oracle::Mat aj = oracle::dense_label(c.basis[j].label());
        for (std::size_t l = 0; l < c.basis.size(); ++l) {
            oracle::Mat al = oracle::dense_label(c.basis[l].label());
            double expected = (i * oracle::normalized_trace(aj * h - h * aj, al)).real();
            EXPECT_NEAR(k(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)), expected, 1e-14);
        }
    }
}

TEST(Propagate, ZeroScheduleIsIdentity) {
    Chain c(3);
    PulseSchedule s(0.1, Eigen::MatrixXd::Zero(5, static_cast<Eigen::Index>(c.sc.num_generators())));
    std::mt19937 rng(1);
    Eigen::VectorXd a0 = random_unit(rng, c.sc.dim);
    EXPECT_EQ((propagate(c.sc, s, a0) - a0).norm(), 0.0);
}

// Dense Schroedinger oracle: U(T) I(0) U(T)^dagger expanded by trace.
TEST(Propagate, MatchesDenseConjugation) {
    std::mt19937 rng(9);
    for (std::size_t n = 2; n <= 4; ++n) {
        Chain c(n);
        for (int trial = 0; trial < 3; ++trial) {
            PulseSchedule s = random_schedule(rng, 6, 0.2, c.sc.num_generators(), 1.5);
            Eigen::VectorXd a0 = random_unit(rng, c.sc.dim);
            for (auto dense_threshold : {std::size_t{0}, std::size_t{1000}}) {
                PropagationOptions opt;
                opt.dense_threshold = dense_threshold;
                Eigen::VectorXd aT = propagate(c.sc, s, a0, opt);

                const int dim = 1 << n;
                oracle::Mat u = oracle::Mat::Identity(dim, dim);
                for (std::size_t l = 0; l < s.bins(); ++l) {
                    std::vector<std::pair<double, std::string>> terms;
                    for (std::size_t k = 0; k < c.model.generators.size(); ++k)
                        for (const auto &[p, coeff] : c.model.generators[k].op.terms())
                            terms.emplace_back(coeff * s.amplitudes(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)), p.label());
                    u = oracle::expi(oracle::dense_sum(terms, static_cast<int>(n)), s.dt) * u;
                }
                oracle::Mat i0 = oracle::Mat::Zero(dim, dim);
                for (std::size_t j = 0; j < c.basis.size(); ++j) i0 += a0[static_cast<Eigen::Index>(j)] * oracle::dense_label(c.basis[j].label());
                oracle::Mat iT = u * i0 * u.adjoint();
                double max_err = 0.0;
                for (std::size_t j = 0; j < c.basis.size(); ++j) {
                    double coeff = oracle::normalized_trace(iT, oracle::dense_label(c.basis[j].label())).real();
                    max_err = std::max(max_err, std::abs(coeff - aT[static_cast<Eigen::Index>(j)]));
                }
                EXPECT_LT(max_err, 1e-10) << "n=" << n;
                EXPECT_NEAR(aT.norm(), 1.0, 1e-12);
            }
        }
    }
}

TEST(Propagate, NormPreservedOverManyBins) {
    Chain c(10);
    std::mt19937 rng(10);
    PulseSchedule s = random_schedule(rng, 100, 0.1, c.sc.num_generators(), 2.0);
    Eigen::VectorXd a0 = random_unit(rng, c.sc.dim);
    EXPECT_NEAR(propagate(c.sc, s, a0).norm(), 1.0, 1e-10);
}

TEST(Propagate, NormStressThousandBins) {
    Chain c(4);
    std::mt19937 rng(12);
    PulseSchedule s = random_schedule(rng, 1000, 0.05, c.sc.num_generators(), 2.0);
    Eigen::VectorXd a0 = random_unit(rng, c.sc.dim);
    EXPECT_NEAR(propagate(c.sc, s, a0).norm(), 1.0, 1e-10);
}

TEST(Propagate, TimeReversalRecoversInitial) {
    Chain c(5);
    std::mt19937 rng(13);
    PulseSchedule s = random_schedule(rng, 40, 0.1, c.sc.num_generators(), 1.0);
    Eigen::VectorXd a0 = random_unit(rng, c.sc.dim);
    Eigen::VectorXd back = propagate(c.sc, time_reversed(s), propagate(c.sc, s, a0));
    EXPECT_LT((back - a0).norm(), 1e-9);
}

TEST(Propagate, CachesAgreeAndOverlapIsConstant) {
    Chain c(4);
    std::mt19937 rng(14);
    PulseSchedule s = random_schedule(rng, 20, 0.1, c.sc.num_generators(), 1.0);
    Eigen::VectorXd a0 = random_unit(rng, c.sc.dim);
    Eigen::VectorXd target = random_unit(rng, c.sc.dim);
    auto fwd = propagate_with_cache(c.sc, s, a0);
    ASSERT_EQ(fwd.size(), 21u);
    EXPECT_EQ(fwd.back(), propagate(c.sc, s, a0));
    auto back = propagate_with_cache(c.sc, s, fwd.back(), true);
    EXPECT_LT((back.front() - a0).norm(), 1e-10);
    auto adj = propagate_with_cache(c.sc, s, target, true);
    const double overlap = adj.back().dot(fwd.back());
    for (std::size_t m = 0; m <= s.bins(); ++m) EXPECT_NEAR(adj[m].dot(fwd[m]), overlap, 1e-12);
}

TEST(PulseSchedule, ValidationErrors) {
    PulseSchedule empty(0.1, Eigen::MatrixXd(0, 3));
    EXPECT_THROW(empty.validate(3), ConfigError);
    PulseSchedule bad_dt(0.0, Eigen::MatrixXd::Zero(2, 3));
    EXPECT_THROW(bad_dt.validate(3), ConfigError);
    PulseSchedule ok(0.1, Eigen::MatrixXd::Zero(2, 3));
    EXPECT_THROW(ok.validate(4), DimensionError);
    ok.amplitudes(1, 2) = 1.0;
    EXPECT_THROW(ok.validate(3, {2}), ConfigError);
}
