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

#include "dense_oracle.hpp"
#include "lieopt/errors.hpp"
#include "lieopt/pauli.hpp"

using namespace lieopt;

namespace {

const oracle::cd kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

oracle::Mat dense(const PauliString &p) { return kPhases[p.phase()] * oracle::dense_label(p.label()); }

PauliString random_string(std::mt19937 &rng, std::size_t n, bool with_phase) {
    std::uniform_int_distribution<int> op(0, 3);
    PauliString p(n);
    for (std::size_t k = 0; k < n; ++k) p.set(k, "IXYZ"[op(rng)]);
    if (with_phase) p = p.with_phase(static_cast<std::uint8_t>(op(rng)));
    return p;
}

}  // namespace

TEST(PauliString, ParseAndPrint) {
    auto p = PauliString::parse("-iXZIIY");
    EXPECT_EQ(p.num_qubits(), 5u);
    EXPECT_EQ(p.phase(), 3);
    EXPECT_EQ(p.label(), "XZIIY");
    EXPECT_EQ(p.str(), "-iXZIIY");
    EXPECT_EQ(p.weight(), 3u);
    EXPECT_THROW(PauliString::parse("XQ"), ConfigError);
}

TEST(PauliString, SingleQubitProduct) {
    auto r = multiply(PauliString::parse("XI"), PauliString::parse("ZI"));
    EXPECT_EQ(r, PauliString::parse("-iYI"));
}

TEST(PauliString, Involution) {
    auto r = multiply(PauliString::parse("ZZ"), PauliString::parse("ZZ"));
    EXPECT_EQ(r, PauliString::parse("II"));
    auto s = multiply(PauliString::parse("iXY"), PauliString::parse("iXY"));
    EXPECT_EQ(s, PauliString::parse("-II"));
}

TEST(PauliString, TwoQubitProductMatchesDense) {
    auto p = PauliString::parse("XX");
    auto q = PauliString::parse("ZI");
    auto r = multiply(p, q);
    EXPECT_EQ(r, PauliString::parse("-iYX"));
    EXPECT_TRUE(dense(r).isApprox(dense(p) * dense(q), 1e-14));
}

TEST(PauliString, MismatchedSizesThrow) {
    EXPECT_THROW(multiply(PauliString::parse("X"), PauliString::parse("XX")), DimensionError);
    EXPECT_THROW(commutator(PauliString::parse("X"), PauliString::parse("XX")), DimensionError);
}

TEST(PauliString, ProductOracleEquivalence) {
    std::mt19937 rng(11);
    for (std::size_t n = 1; n <= 4; ++n) {
        for (int t = 0; t < 200; ++t) {
            auto p = random_string(rng, n, true);
            auto q = random_string(rng, n, true);
            ASSERT_TRUE(dense(multiply(p, q)).isApprox(dense(p) * dense(q), 1e-14)) << p.str() << " * " << q.str();
        }
    }
}

TEST(PauliString, WideStringsCrossWordBoundary) {
    const std::size_t n = 100;
    auto p = PauliString::from_sites(n, {{3, 'X'}, {70, 'Y'}, {99, 'Z'}});
    auto q = PauliString::from_sites(n, {{3, 'Z'}, {70, 'X'}, {99, 'Z'}});
    auto r = multiply(p, q);
    // XZ = -iY, YX = -iZ, ZZ = I.
    EXPECT_EQ(r, PauliString::from_sites(n, {{3, 'Y'}, {70, 'Z'}}).with_phase(2));
    EXPECT_FALSE(anticommutes(p, q));
}

TEST(Commutator, ChainExample) {
    auto c = commutator(PauliString::parse("ZI"), PauliString::parse("XX"));
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(c->string, PauliString::parse("YX"));
    EXPECT_DOUBLE_EQ(c->weight, -2.0);
    oracle::cd i(0, 1);
    oracle::Mat lhs = i * (oracle::dense_label("ZI") * oracle::dense_label("XX") -
                           oracle::dense_label("XX") * oracle::dense_label("ZI"));
    EXPECT_TRUE(lhs.isApprox(-2.0 * oracle::dense_label("YX"), 1e-14));
}

TEST(Commutator, CommutingPairsGiveNone) {
    EXPECT_FALSE(commutator(PauliString::parse("ZI"), PauliString::parse("IZ")));
    EXPECT_FALSE(commutator(PauliString::parse("XI"), PauliString::parse("XX")));
}

TEST(Commutator, AntisymmetryAndParityRule) {
    std::mt19937 rng(5);
    for (int t = 0; t < 500; ++t) {
        std::size_t n = 1 + t % 4;
        auto p = random_string(rng, n, false);
        auto q = random_string(rng, n, false);
        auto pq = commutator(p, q);
        auto qp = commutator(q, p);
        int sym = 0;
        for (std::size_t k = 0; k < n; ++k) sym += (p.x(k) && q.z(k)) + (p.z(k) && q.x(k));
        ASSERT_EQ(pq.has_value(), sym % 2 == 1);
        ASSERT_EQ(pq.has_value(), qp.has_value());
        if (pq) {
            EXPECT_EQ(pq->string, qp->string);
            EXPECT_EQ(pq->weight, -qp->weight);
        }
    }
}

TEST(Commutator, MatchesDenseAndSatisfiesJacobi) {
    std::mt19937 rng(7);
    const oracle::cd i(0, 1);
    auto comm = [&](const oracle::Mat &a, const oracle::Mat &b) -> oracle::Mat { return i * (a * b - b * a); };
    for (int t = 0; t < 300; ++t) {
        std::size_t n = 1 + t % 4;
        auto p = random_string(rng, n, false);
        auto q = random_string(rng, n, false);
        auto r = random_string(rng, n, false);
        auto c = commutator(p, q);
        oracle::Mat expected = comm(dense(p), dense(q));
        oracle::Mat got = c ? oracle::Mat(c->weight * dense(c->string)) : oracle::Mat::Zero(1 << n, 1 << n);
        ASSERT_TRUE(got.isApprox(expected, 1e-13) || (expected.norm() < 1e-13 && got.norm() < 1e-13));

        // Jacobi built from the symbolic commutator applied twice.
        auto nested = [&](const PauliString &a, const PauliString &b, const PauliString &cc) -> oracle::Mat {
            auto inner = commutator(b, cc);
            if (!inner) return oracle::Mat::Zero(1 << n, 1 << n);
            auto outer = commutator(a, inner->string);
            if (!outer) return oracle::Mat::Zero(1 << n, 1 << n);
            return inner->weight * outer->weight * dense(outer->string);
        };
        oracle::Mat jacobi = nested(p, q, r) + nested(q, r, p) + nested(r, p, q);
        ASSERT_LT(jacobi.norm(), 1e-12);
    }
}

TEST(WeightedPauliSum, ParseCanonicalAndPrune) {
    auto s = WeightedPauliSum::parse("1 ZI; 2 XX; -1 ZI\n0.5 -YY");
    EXPECT_EQ(s.size(), 2u);
    EXPECT_DOUBLE_EQ(s.coefficient(PauliString::parse("XX")), 2.0);
    EXPECT_DOUBLE_EQ(s.coefficient(PauliString::parse("YY")), -0.5);
    EXPECT_DOUBLE_EQ(s.coefficient(PauliString::parse("-YY")), 0.5);
    EXPECT_THROW(WeightedPauliSum(PauliString::parse("iXX")), std::domain_error);
    auto t = s;
    t.add(PauliString::parse("ZZ"), 1e-20);
    t.prune(1e-15);
    EXPECT_EQ(t, s);
}

TEST(WeightedPauliSum, HsInner) {
    auto z1 = WeightedPauliSum::parse("1 ZI");
    auto x1 = WeightedPauliSum::parse("1 XI");
    auto mix = WeightedPauliSum::parse("1 ZI; 2 XX");
    auto xx = WeightedPauliSum::parse("1 XX");
    EXPECT_DOUBLE_EQ(hs_inner(z1, z1), 1.0);
    EXPECT_DOUBLE_EQ(hs_inner(z1, x1), 0.0);
    EXPECT_DOUBLE_EQ(hs_inner(mix, xx), 2.0);
    EXPECT_DOUBLE_EQ(hs_inner(xx, mix), 2.0);
    auto dense_value = oracle::normalized_trace(oracle::dense_sum({{1, "ZI"}, {2, "XX"}}, 2), oracle::dense_label("XX"));
    EXPECT_NEAR(dense_value.real(), 2.0, 1e-14);
    EXPECT_THROW(hs_inner(z1, WeightedPauliSum::parse("1 Z")), DimensionError);
}

TEST(WeightedPauliSum, HsInnerMatchesDenseTrace) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> coeff(-1, 1);
    for (int t = 0; t < 50; ++t) {
        std::size_t n = 1 + t % 4;
        WeightedPauliSum a(n), b(n);
        oracle::Mat da = oracle::Mat::Zero(1 << n, 1 << n), db = da;
        for (int k = 0; k < 4; ++k) {
            auto p = random_string(rng, n, false);
            auto q = random_string(rng, n, false);
            double cp = coeff(rng), cq = coeff(rng);
            a.add(p, cp);
            b.add(q, cq);
            da += cp * dense(p);
            db += cq * dense(q);
        }
        EXPECT_NEAR(hs_inner(a, b), oracle::normalized_trace(da, db).real(), 1e-12);
    }
}

TEST(PauliString, OrderingIsZMaskFirst) {
    // z mask compared as an integer before the x mask.
    auto a = PauliString::parse("XI");  // z=0
    auto b = PauliString::parse("ZI");  // z=1
    auto c = PauliString::parse("YI");  // z=1, x=1
    EXPECT_LT(a, b);
    EXPECT_LT(b, c);
}
