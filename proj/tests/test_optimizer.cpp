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

#include <numbers>
#include <random>

#include "lieopt/errors.hpp"
#include "lieopt/optimizer.hpp"

using namespace lieopt;

namespace {

struct Fixture {
    ModelSpec model;
    OperatorBasis basis;
    std::shared_ptr<const StructureConstants> sc;
};

Fixture chain_fixture(std::size_t n) {
    Fixture f{chain_model(n), {}, nullptr};
    f.basis = generate_closure(f.model.generators);
    f.sc = std::make_shared<StructureConstants>(structure_constants(f.basis, f.model.generators));
    return f;
}

ControlProblem ghz_problem(const Fixture &f) {
    const std::size_t n = f.model.num_qubits;
    return ControlProblem(f.sc, state_prep_objective(expand_in_basis(f.basis, initial_invariant(n)),
                                                     analytic_target(f.basis, TargetId::ghz)));
}

PulseSchedule random_schedule(std::mt19937 &rng, const Fixture &f, std::size_t bins, double dt, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    const auto ng = static_cast<Eigen::Index>(f.model.generators.size());
    PulseSchedule s(dt, Eigen::MatrixXd(static_cast<Eigen::Index>(bins), ng));
    for (Eigen::Index l = 0; l < s.amplitudes.rows(); ++l) {
        for (Eigen::Index k = 0; k < ng; ++k) s.amplitudes(l, k) = f.model.generators[static_cast<std::size_t>(k)].drift ? 1.0 : u(rng);
    }
    return s;
}

Eigen::MatrixXd central_difference(const ControlProblem &p, const PulseSchedule &s, double h = 1e-6) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(s.amplitudes.rows(), s.amplitudes.cols());
    for (Eigen::Index l = 0; l < g.rows(); ++l) {
        for (Eigen::Index k = 0; k < g.cols(); ++k) {
            PulseSchedule plus = s, minus = s;
            plus.amplitudes(l, k) += h;
            minus.amplitudes(l, k) -= h;
            g(l, k) = (p.value(plus) - p.value(minus)) / (2 * h);
        }
    }
    return g;
}

double relative_error(const Eigen::MatrixXd &got, const Eigen::MatrixXd &want) {
    return (got - want).cwiseAbs().maxCoeff() / want.cwiseAbs().maxCoeff();
}

}  // namespace

TEST(Gradient, ExactMatchesFiniteDifferences) {
    std::mt19937 rng(21);
    for (std::size_t n : {3u, 4u}) {
        auto f = chain_fixture(n);
        auto p = ghz_problem(f);
        for (int trial = 0; trial < 3; ++trial) {
            auto s = random_schedule(rng, f, 20, 0.05 * kTauG);
            auto ev = p.evaluate(s);
            EXPECT_NEAR(ev.value, p.value(s), 1e-14);
            EXPECT_LT(relative_error(ev.gradient, central_difference(p, s)), 1e-6) << "n=" << n;
        }
    }
}

TEST(Gradient, ExactHandlesLongBinsAndGateObjectives) {
    std::mt19937 rng(4);
    auto f = chain_fixture(4);
    auto gate = make_gate_problem(f.basis, GateMode::reduced, target_hamiltonian(TargetId::cluster, 4), std::numbers::pi / 8);
    ControlProblem p(f.sc, gate_objective(gate));
    // dt |K| well above one forces several Taylor panels per bin.
    auto s = random_schedule(rng, f, 6, 0.6, 3.0);
    EXPECT_LT(relative_error(p.evaluate(s).gradient, central_difference(p, s)), 1e-6);
}

TEST(Gradient, SecondOrderConvergesQuadratically) {
    std::mt19937 rng(8);
    auto f = chain_fixture(3);
    auto p = ghz_problem(f);
    auto s = random_schedule(rng, f, 10, 0.02);
    auto exact = p.evaluate(s).gradient;
    const double e1 = relative_error(p.evaluate(s, GradientMethod::second_order).gradient, exact);
    s.dt /= 2;
    exact = p.evaluate(s).gradient;
    const double e2 = relative_error(p.evaluate(s, GradientMethod::second_order).gradient, exact);
    EXPECT_LT(e1, 5e-3);
    EXPECT_GT(e1 / e2, 3.0);
}

TEST(Gradient, TiedParameterSumsConstituents) {
    std::mt19937 rng(2);
    const std::size_t n = 5;
    auto f = chain_fixture(n);
    auto p = ghz_problem(f);
    auto s = random_schedule(rng, f, 4, 0.2);
    auto g = p.evaluate(s).gradient;
    auto stage1 = ControlParametrization::chain_stage(Stage::translational, n);
    Eigen::VectorXd tied = stage1.contract(g);
    for (Eigen::Index l = 0; l < 4; ++l) {
        EXPECT_NEAR(tied[3 * l], g.row(l).head(n).sum(), 1e-14);
        EXPECT_NEAR(tied[3 * l + 1], g(l, 0) + g(l, n - 1), 1e-14);
        EXPECT_NEAR(tied[3 * l + 2], g(l, n) + g(l, n + 1), 1e-14);
    }
}

TEST(Gradient, VanishesAtExactOptimum) {
    std::mt19937 rng(6);
    auto f = chain_fixture(3);
    auto s = random_schedule(rng, f, 1, 0.4);
    Eigen::VectorXd a0 = expand_in_basis(f.basis, initial_invariant(3));
    ControlProblem p(f.sc, state_prep_objective(a0, propagate(*f.sc, s, a0)));
    auto ev = p.evaluate(s);
    EXPECT_NEAR(ev.value, 0.0, 1e-14);
    EXPECT_LT(ev.gradient.cwiseAbs().maxCoeff(), 1e-13);
}

TEST(DurationGradient, StaticAndSign) {
    auto f = chain_fixture(4);
    auto p = ghz_problem(f);
    PulseSchedule still(0.1, Eigen::MatrixXd::Zero(5, 7));
    EXPECT_EQ(p.duration_gradient(still), 0.0);
    std::mt19937 rng(9);
    auto s = random_schedule(rng, f, 20, 0.05);
    auto at = [&](double duration) {
        PulseSchedule t = s;
        t.dt = duration / 20.0;
        return p.value(t);
    };
    const double central = (at(s.duration() + 1e-6) - at(s.duration() - 1e-6)) / 2e-6;
    const double forward = p.duration_gradient(s);
    EXPECT_GT(std::abs(central), 1e-3);
    EXPECT_EQ(std::signbit(forward), std::signbit(central));
    EXPECT_NEAR(forward, central, 1e-4 * std::abs(central) + 1e-5);
}

TEST(Lbfgs, QuadraticBowl) {
    Eigen::VectorXd scale(6);
    scale << 1, 2, 5, 10, 0.5, 3;
    ObjectiveFunction f = [&](const Eigen::VectorXd &x, Eigen::VectorXd &g) {
        Eigen::VectorXd d = x - Eigen::VectorXd::Ones(6);
        g = 2 * scale.cwiseProduct(d);
        return d.dot(scale.cwiseProduct(d));
    };
    LbfgsOptions o;
    o.max_evals = 50;
    auto r = lbfgs_minimize(f, Eigen::VectorXd::Zero(6), o);
    EXPECT_LT(r.value, 1e-10);
    EXPECT_LE(r.evaluations, 50u);
    EXPECT_LT((r.x - Eigen::VectorXd::Ones(6)).norm(), 1e-5);
}

TEST(Lbfgs, RosenbrockAndBounds) {
    ObjectiveFunction rosen = [](const Eigen::VectorXd &x, Eigen::VectorXd &g) {
        const double a = 1 - x[0], b = x[1] - x[0] * x[0];
        g[0] = -2 * a - 400 * x[0] * b;
        g[1] = 200 * b;
        return a * a + 100 * b * b;
    };
    LbfgsOptions o;
    o.max_evals = 500;
    auto r = lbfgs_minimize(rosen, Eigen::Vector2d(-1.2, 1.0), o);
    EXPECT_LT(r.value, 1e-12);
    o.upper = Eigen::Vector2d(0.5, 10.0);
    auto boxed = lbfgs_minimize(rosen, Eigen::Vector2d(-1.2, 1.0), o);
    EXPECT_LE(boxed.x[0], 0.5);
    EXPECT_NEAR(boxed.x[0], 0.5, 1e-6);
    EXPECT_NEAR(boxed.x[1], 0.25, 1e-4);
}

TEST(Lbfgs, StopsAtThresholdAndTracksBest) {
    ObjectiveFunction f = [](const Eigen::VectorXd &x, Eigen::VectorXd &g) {
        g = 2 * x;
        return x.squaredNorm();
    };
    LbfgsOptions o;
    o.threshold = 1e-3;
    std::vector<double> best;
    auto r = lbfgs_minimize(f, Eigen::VectorXd::Constant(3, 2.0), o,
                            [&](std::size_t, double, double, double b) { best.push_back(b); });
    EXPECT_EQ(r.reason, StopReason::threshold);
    EXPECT_LT(r.value, 1e-3);
    for (std::size_t k = 1; k < best.size(); ++k) EXPECT_LE(best[k], best[k - 1]);
}

TEST(Parametrization, StageCounts) {
    for (std::size_t n = 3; n <= 12; ++n) {
        EXPECT_EQ(ControlParametrization::chain_stage(Stage::translational, n).params_per_bin(), 3u);
        EXPECT_EQ(ControlParametrization::chain_stage(Stage::inversion, n).params_per_bin(), (n + 1) / 2 + 1);
        EXPECT_EQ(ControlParametrization::chain_stage(Stage::free, n).params_per_bin(), n + 2);
    }
}

TEST(Parametrization, ExpandRestrictRoundTrip) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (std::size_t n : {5u, 6u}) {
        for (Stage st : {Stage::translational, Stage::inversion, Stage::free}) {
            auto params = ControlParametrization::chain_stage(st, n);
            Eigen::VectorXd theta(static_cast<Eigen::Index>(7 * params.params_per_bin()));
            for (auto &x : theta) x = u(rng);
            auto s = params.expand(theta, 7, 0.1);
            EXPECT_TRUE((s.amplitudes.col(static_cast<Eigen::Index>(n + 2)).array() == 1.0).all());
            EXPECT_LT((params.restrict(s) - theta).norm(), 1e-12);
            if (st != Stage::free) {
                for (std::size_t j = 0; j < n; ++j) {
                    EXPECT_NEAR((s.amplitudes.col(static_cast<Eigen::Index>(j)) - s.amplitudes.col(static_cast<Eigen::Index>(n - 1 - j))).norm(), 0.0, 1e-15);
                }
            }
            // A stage-1 schedule is representable by every later stage.
            auto later = ControlParametrization::chain_stage(Stage::free, n);
            EXPECT_LT((later.expand(later.restrict(s), 7, 0.1).amplitudes - s.amplitudes).norm(), 1e-12);
        }
    }
}

TEST(Optimizer, SmallGhzReachesThresholdMonotonically) {
    const std::size_t n = 3;
    auto f = chain_fixture(n);
    auto p = ghz_problem(f);
    OptimizerConfig cfg;
    cfg.threshold = 1e-8;
    cfg.restarts = 3;
    auto params = ControlParametrization::chain_stage(Stage::translational, n);
    auto start = initial_guess(params, 10 * n, n * kTauG / 4, cfg);
    std::vector<TraceRecord> trace;
    OptimizerObserver obs;
    obs.on_eval = [&](const TraceRecord &r) { trace.push_back(r); };
    auto result = staged_optimize(p, n, start, cfg, obs);
    EXPECT_TRUE(result.reached_threshold);
    EXPECT_LT(p.value(result.schedule), 1e-8);
    EXPECT_EQ(result.schedule.bins(), 30u);
    EXPECT_NEAR(result.schedule.duration(), n * kTauG / 4, 1e-12);
    for (const auto &st : result.stages) EXPECT_LE(st.best_value, st.initial_value);
    for (std::size_t k = 1; k < trace.size(); ++k) {
        if (trace[k].stage == trace[k - 1].stage) EXPECT_LE(trace[k].best, trace[k - 1].best);
    }

    // Same seed, same trace.
    std::vector<TraceRecord> again;
    obs.on_eval = [&](const TraceRecord &r) { again.push_back(r); };
    auto rerun = staged_optimize(p, n, start, cfg, obs);
    ASSERT_EQ(again.size(), trace.size());
    for (std::size_t k = 0; k < trace.size(); ++k) {
        EXPECT_EQ(again[k].value, trace[k].value);
        EXPECT_EQ(again[k].grad_norm, trace[k].grad_norm);
    }
    EXPECT_EQ(rerun.schedule.amplitudes, result.schedule.amplitudes);
}

TEST(Optimizer, DurationIsOptimizedWhenRequested) {
    const std::size_t n = 3;
    auto f = chain_fixture(n);
    auto p = ghz_problem(f);
    OptimizerConfig cfg;
    cfg.threshold = 1e-6;
    cfg.restarts = 2;
    cfg.optimize_duration = true;
    auto params = ControlParametrization::chain_stage(Stage::free, n);
    auto start = initial_guess(params, 20, 0.5, cfg);
    auto r = optimize_stage(p, params, start, cfg);
    EXPECT_LE(r.value, p.value(start));
    EXPECT_EQ(r.schedule.bins(), 20u);
}

TEST(Optimizer, CheckpointsAndBounds) {
    const std::size_t n = 3;
    auto f = chain_fixture(n);
    auto p = ghz_problem(f);
    OptimizerConfig cfg;
    cfg.threshold = 1e-12;
    cfg.restarts = 1;
    cfg.max_evals = 250;
    cfg.amplitude_bound = 0.3;
    auto params = ControlParametrization::chain_stage(Stage::free, n);
    std::size_t checkpoints = 0;
    OptimizerObserver obs;
    obs.on_checkpoint = [&](const PulseSchedule &s, const TraceRecord &r) {
        ++checkpoints;
        EXPECT_EQ(r.eval % 100, 0u);
        EXPECT_LE(s.amplitudes.leftCols(n + 2).cwiseAbs().maxCoeff(), 0.3 + 1e-15);
    };
    auto r = optimize_stage(p, params, initial_guess(params, 30, n * kTauG / 4, cfg), cfg, obs);
    EXPECT_EQ(checkpoints, r.evaluations / 100);
    EXPECT_LE(r.schedule.amplitudes.leftCols(n + 2).cwiseAbs().maxCoeff(), 0.3 + 1e-15);
}

TEST(Smoothing, WindowOneIsIdentityAndWidthShrinks) {
    std::mt19937 rng(12);
    auto f = chain_fixture(4);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = random_schedule(rng, f, 40, 0.1);
        EXPECT_EQ(smooth(s, 1, {6}).amplitudes, s.amplitudes);
        auto sm = smooth(s, 5, {6});
        EXPECT_TRUE((sm.amplitudes.col(6).array() == 1.0).all());
        EXPECT_LE(spectral_width(sm, {6}), spectral_width(s, {6}));
    }
    EXPECT_THROW(smooth(random_schedule(rng, f, 4, 0.1), 0), ConfigError);
}
