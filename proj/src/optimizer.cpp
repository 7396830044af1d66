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

#include "lieopt/optimizer.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>

#include "lieopt/errors.hpp"

namespace lieopt {

std::string to_string(GradientMethod method) { return method == GradientMethod::exact ? "exact" : "second-order"; }

GradientMethod parse_gradient_method(std::string_view text) {
    if (text == "exact") return GradientMethod::exact;
    if (text == "second-order" || text == "second_order") return GradientMethod::second_order;
    throw ConfigError("unknown gradient method '" + std::string(text) + "'");
}

std::string to_string(Stage stage) {
    switch (stage) {
        case Stage::translational: return "translational";
        case Stage::inversion: return "inversion";
        case Stage::free: return "free";
    }
    return "unknown";
}

Stage parse_stage(std::string_view text) {
    if (text == "translational") return Stage::translational;
    if (text == "inversion") return Stage::inversion;
    if (text == "free") return Stage::free;
    throw ConfigError("unknown stage '" + std::string(text) + "'");
}

namespace {

// Taylor panels for int_0^1 exp(-sA) u (exp(-sA) w)^T ds.
struct PanelPlan {
    int panels = 1;
    int degree = 0;
    Eigen::MatrixXd coeff;
    Eigen::VectorXd advance;
};

PanelPlan plan_panels(double norm) {
    PanelPlan plan;
    plan.panels = std::max(1, static_cast<int>(std::ceil(norm / 0.75)));
    const double h = 1.0 / plan.panels;
    const double x = h * norm;
    double term = x;
    while (term > 1e-17 && plan.degree < 40) {
        ++plan.degree;
        term *= x / (plan.degree + 1);
    }
    const int p1 = plan.degree + 1;
    std::vector<double> fact(static_cast<std::size_t>(p1), 1.0);
    for (int p = 1; p < p1; ++p) fact[static_cast<std::size_t>(p)] = fact[static_cast<std::size_t>(p - 1)] * p;
    plan.coeff.resize(p1, p1);
    plan.advance.resize(p1);
    for (int p = 0; p < p1; ++p) {
        plan.advance[p] = std::pow(-h, p) / fact[static_cast<std::size_t>(p)];
        for (int q = 0; q < p1; ++q) {
            plan.coeff(p, q) = ((p + q) % 2 ? -1.0 : 1.0) * std::pow(h, p + q + 1) /
                               (fact[static_cast<std::size_t>(p)] * fact[static_cast<std::size_t>(q)] * (p + q + 1));
        }
    }
    return plan;
}

double max_row_sum(const SparseMatrix &a) {
    double best = 0.0;
    for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
        double s = 0.0;
        for (SparseMatrix::InnerIterator it(a, r); it; ++it) s += std::abs(it.value());
        best = std::max(best, s);
    }
    return best;
}

// Rows hold A^p v for p = 0..degree, stored column-major so that the column
// for one basis index is contiguous.
void powers(const SparseMatrix &a, const Eigen::VectorXd &v, Eigen::MatrixXd &out) {
    Eigen::VectorXd cur = v;
    out.row(0) = cur.transpose();
    for (Eigen::Index p = 1; p < out.rows(); ++p) {
        cur = a * cur;
        out.row(p) = cur.transpose();
    }
}

}  // namespace

ControlProblem::ControlProblem(std::shared_ptr<const StructureConstants> sc, ControlObjective objective,
                               PropagationOptions options)
    : sc_(std::move(sc)), objective_(std::move(objective)), options_(options) {
    if (!sc_) throw ConfigError("control problem needs structure constants");
    if (objective_.pairs.empty()) throw ConfigError("control problem needs at least one trajectory");
    for (const auto &p : objective_.pairs) {
        if (static_cast<std::size_t>(p.initial.size()) != sc_->dim || static_cast<std::size_t>(p.target.size()) != sc_->dim) {
            throw DimensionError("trajectory vectors do not match the algebra dimension " + std::to_string(sc_->dim));
        }
    }
    assembler_ = std::make_shared<KAssembler>(*sc_);
}

std::vector<Eigen::VectorXd> ControlProblem::finals(const PulseSchedule &schedule) const {
    schedule.validate(num_generators());
    BinPropagators props(assembler_, schedule, options_);
    std::vector<Eigen::VectorXd> out;
    for (const auto &p : objective_.pairs) {
        Eigen::VectorXd v = p.initial;
        for (std::size_t l = 0; l < props.bins(); ++l) v = props.apply(l, v);
        out.push_back(std::move(v));
    }
    return out;
}

double ControlProblem::value(const PulseSchedule &schedule) const { return objective_.value(finals(schedule)); }

Evaluation ControlProblem::evaluate(const PulseSchedule &schedule, GradientMethod method) const {
    schedule.validate(num_generators());
    BinPropagators props(assembler_, schedule, options_);
    const std::size_t bins = props.bins();
    const std::size_t pairs = objective_.pairs.size();
    std::vector<std::vector<Eigen::VectorXd>> fwd(pairs), bwd(pairs);
    double overlap = 0.0;
    for (std::size_t j = 0; j < pairs; ++j) {
        const auto &p = objective_.pairs[j];
        fwd[j] = forward_cache(props, p.initial);
        bwd[j] = backward_cache(props, p.weight * p.target);
        overlap += fwd[j].back().dot(bwd[j].back());
    }
    Evaluation ev;
    ev.value = 1.0 - overlap;
    ev.gradient = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(bins), static_cast<Eigen::Index>(num_generators()));

    const KAssembler &kas = *assembler_;
    const SparseMatrix &pattern = kas.pattern();
    const auto &rows = kas.rows();
    const auto *cols = pattern.innerIndexPtr();
    const auto nnz = static_cast<Eigen::Index>(rows.size());
    Eigen::VectorXd gpos(nnz);

    for (std::size_t l = 0; l < bins; ++l) {
        const SparseMatrix &a = props.generator(l);
        gpos.setZero();
        if (method == GradientMethod::exact) {
            const PanelPlan plan = plan_panels(max_row_sum(a));
            const Eigen::Index p1 = plan.degree + 1;
            Eigen::MatrixXd ut(p1, a.rows()), wt(p1, a.rows()), yt;
            for (std::size_t j = 0; j < pairs; ++j) {
                Eigen::VectorXd u = bwd[j][l + 1], w = fwd[j][l + 1];
                for (int panel = 0; panel < plan.panels; ++panel) {
                    powers(a, u, ut);
                    powers(a, w, wt);
                    yt.noalias() = plan.coeff * wt;
                    for (Eigen::Index pos = 0; pos < nnz; ++pos) {
                        gpos[pos] += ut.col(rows[static_cast<std::size_t>(pos)]).dot(yt.col(cols[pos]));
                    }
                    u.noalias() = ut.transpose() * plan.advance;
                    w.noalias() = wt.transpose() * plan.advance;
                }
            }
        } else {
            for (std::size_t j = 0; j < pairs; ++j) {
                const Eigen::VectorXd &x = fwd[j][l], &y = bwd[j][l];
                const Eigen::VectorXd ax = a * x, ay = a * y;
                for (Eigen::Index pos = 0; pos < nnz; ++pos) {
                    const auto r = rows[static_cast<std::size_t>(pos)];
                    const auto c = cols[pos];
                    gpos[pos] += y[r] * x[c] + 0.5 * (ay[r] * x[c] + y[r] * ax[c]);
                }
            }
        }
        for (std::size_t k = 0; k < num_generators(); ++k) {
            double acc = 0.0;
            for (const auto &e : kas.entries(k)) acc += e.value * gpos[e.position];
            ev.gradient(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) = -schedule.dt * acc;
        }
    }
    return ev;
}

double ControlProblem::duration_gradient(const PulseSchedule &schedule, double step) const {
    if (!(step > 0.0)) throw ConfigError("duration step must be positive");
    PulseSchedule longer = schedule;
    longer.dt = (schedule.duration() + step) / static_cast<double>(schedule.bins());
    return (value(longer) - value(schedule)) / step;
}

ControlParametrization::ControlParametrization(Eigen::MatrixXd map, std::vector<std::size_t> drift_columns, Stage stage)
    : map_(std::move(map)), drift_(std::move(drift_columns)), stage_(stage) {
    for (auto k : drift_) {
        if (k >= num_generators()) throw DimensionError("drift column out of range");
        if (map_.row(static_cast<Eigen::Index>(k)).squaredNorm() != 0.0) {
            throw ConfigError("drift column " + std::to_string(k) + " cannot depend on free parameters");
        }
    }
    if (map_.cols() == 0) throw ConfigError("parametrization has no free parameters");
}

ControlParametrization ControlParametrization::free(const GeneratorSet &gens) {
    auto controls = gens.control_indices();
    Eigen::MatrixXd map = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(gens.size()), static_cast<Eigen::Index>(controls.size()));
    for (std::size_t p = 0; p < controls.size(); ++p) map(static_cast<Eigen::Index>(controls[p]), static_cast<Eigen::Index>(p)) = 1.0;
    return {map, gens.drift_indices(), Stage::free};
}

ControlParametrization ControlParametrization::chain_stage(Stage stage, std::size_t n) {
    if (n < 2) throw ConfigError("chain parametrization needs n >= 2");
    // Generator order of chain_model: Z_1..Z_n, X_1, X_n, drift.
    const auto ng = static_cast<Eigen::Index>(n + 3);
    const auto ni = static_cast<Eigen::Index>(n);
    const std::vector<std::size_t> drift = {n + 2};
    switch (stage) {
        case Stage::translational: {
            Eigen::MatrixXd map = Eigen::MatrixXd::Zero(ng, 3);
            for (Eigen::Index j = 0; j < ni; ++j) map(j, 0) = 1.0;
            map(0, 1) += 1.0;
            map(ni - 1, 1) += 1.0;
            map(ni, 2) = map(ni + 1, 2) = 1.0;
            return {map, drift, stage};
        }
        case Stage::inversion: {
            const Eigen::Index half = (ni + 1) / 2;
            Eigen::MatrixXd map = Eigen::MatrixXd::Zero(ng, half + 1);
            // f_j (Z_j + Z_{n+1-j}); the middle site of an odd chain gets 2 f_j.
            for (Eigen::Index j = 0; j < half; ++j) {
                map(j, j) += 1.0;
                map(ni - 1 - j, j) += 1.0;
            }
            map(ni, half) = map(ni + 1, half) = 1.0;
            return {map, drift, stage};
        }
        case Stage::free:
            return free(chain_model(n).generators);
    }
    throw ConfigError("unknown stage");
}

PulseSchedule ControlParametrization::expand(const Eigen::VectorXd &theta, std::size_t bins, double dt,
                                             double drift_value) const {
    const auto per_bin = static_cast<Eigen::Index>(params_per_bin());
    if (theta.size() != static_cast<Eigen::Index>(bins) * per_bin) throw DimensionError("parameter vector has wrong length");
    Eigen::Map<const Eigen::MatrixXd> grid(theta.data(), per_bin, static_cast<Eigen::Index>(bins));
    PulseSchedule s(dt, (map_ * grid).transpose());
    for (auto k : drift_) s.amplitudes.col(static_cast<Eigen::Index>(k)).setConstant(drift_value);
    return s;
}

Eigen::VectorXd ControlParametrization::contract(const Eigen::MatrixXd &amplitude_gradient) const {
    if (amplitude_gradient.cols() != map_.rows()) throw DimensionError("gradient has wrong generator count");
    Eigen::MatrixXd grid = map_.transpose() * amplitude_gradient.transpose();
    return Eigen::Map<const Eigen::VectorXd>(grid.data(), grid.size());
}

Eigen::VectorXd ControlParametrization::restrict(const PulseSchedule &schedule) const {
    if (schedule.amplitudes.cols() != map_.rows()) throw DimensionError("schedule has wrong generator count");
    Eigen::MatrixXd controls = schedule.amplitudes.transpose();
    for (auto k : drift_) controls.row(static_cast<Eigen::Index>(k)).setZero();
    Eigen::MatrixXd grid = map_.colPivHouseholderQr().solve(controls);
    return Eigen::Map<const Eigen::VectorXd>(grid.data(), grid.size());
}

void OptimizerConfig::validate() const {
    if (max_evals == 0 || restarts == 0 || memory == 0) throw ConfigError("max_evals, restarts and memory must be positive");
    if (!(perturbation >= 0.0) || !(initial_noise >= 0.0)) throw ConfigError("noise scales must be non-negative");
    if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must lie in (0, 1)");
    if (!(plateau_tolerance >= 0.0)) throw ConfigError("plateau tolerance must be non-negative");
    if (!(duration_step > 0.0)) throw ConfigError("duration step must be positive");
    if (amplitude_bound && !(*amplitude_bound > 0.0)) throw ConfigError("amplitude bound must be positive");
    if (checkpoint_every == 0) throw ConfigError("checkpoint interval must be positive");
}

PulseSchedule initial_guess(const ControlParametrization &params, std::size_t bins, double duration,
                            const OptimizerConfig &config) {
    if (bins == 0 || !(duration > 0.0)) throw ConfigError("schedule needs bins >= 1 and a positive duration");
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd theta(static_cast<Eigen::Index>(bins * params.params_per_bin()));
    for (auto &x : theta) x = config.initial_noise * u(rng);
    return params.expand(theta, bins, duration / static_cast<double>(bins), config.drift_value);
}

OptimizationResult optimize_stage(const ControlProblem &problem, const ControlParametrization &params,
                                  const PulseSchedule &start, const OptimizerConfig &config,
                                  const OptimizerObserver &observer) {
    config.validate();
    start.validate(problem.num_generators());
    const auto clock_start = std::chrono::steady_clock::now();
    const std::size_t bins = start.bins();
    const Eigen::VectorXd theta0 = params.restrict(start);
    const Eigen::Index nt = theta0.size();
    const Eigen::Index nx = nt + (config.optimize_duration ? 1 : 0);

    Eigen::VectorXd x_start(nx);
    x_start.head(nt) = theta0;
    if (config.optimize_duration) x_start[nt] = start.duration();

    auto schedule_of = [&](const Eigen::VectorXd &x) {
        const double duration = config.optimize_duration ? x[nt] : start.duration();
        return params.expand(x.head(nt), bins, duration / static_cast<double>(bins), config.drift_value);
    };

    LbfgsOptions lopt;
    lopt.memory = config.memory;
    lopt.max_evals = config.max_evals;
    lopt.threshold = config.threshold;
    lopt.grad_tol = config.grad_tol;
    lopt.perturbation = config.perturbation;
    if (config.amplitude_bound || config.optimize_duration) {
        const double inf = std::numeric_limits<double>::infinity();
        const double b = config.amplitude_bound.value_or(inf);
        Eigen::VectorXd lo = Eigen::VectorXd::Constant(nx, -b), hi = Eigen::VectorXd::Constant(nx, b);
        if (config.optimize_duration) {
            lo[nt] = 1e-3 * start.duration();
            hi[nt] = inf;
        }
        lopt.lower = lo;
        lopt.upper = hi;
    }

    OptimizationResult result;
    StageSummary summary;
    summary.stage = params.stage();
    Eigen::VectorXd best_x = x_start;
    double best = std::numeric_limits<double>::infinity();
    std::size_t total = 0;
    TraceRecord record;
    record.stage = params.stage();

    double previous_restart = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t r = 0; r < config.restarts; ++r) {
        std::seed_seq seq{config.seed, static_cast<std::uint64_t>(params.stage()), static_cast<std::uint64_t>(r)};
        std::mt19937_64 rng(seq);
        Eigen::VectorXd x0 = x_start;
        if (r > 0) {
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            for (Eigen::Index i = 0; i < nt; ++i) x0[i] += config.perturbation * u(rng);
        }
        lopt.seed = rng();
        record.restart = r;

        double restart_best = std::numeric_limits<double>::infinity();
        ObjectiveFunction fn = [&](const Eigen::VectorXd &x, Eigen::VectorXd &g) {
            const PulseSchedule s = schedule_of(x);
            Evaluation ev = problem.evaluate(s, config.gradient);
            g.head(nt) = params.contract(ev.gradient);
            if (config.optimize_duration) {
                PulseSchedule longer = s;
                longer.dt = (s.duration() + config.duration_step) / static_cast<double>(bins);
                g[nt] = (problem.value(longer) - ev.value) / config.duration_step;
            }
            restart_best = std::min(restart_best, ev.value);
            if (ev.value < best) {
                best = ev.value;
                best_x = x;
            }
            if (total == 0) summary.initial_value = ev.value;
            ++total;
            record.eval = total;
            record.value = ev.value;
            record.grad_norm = g.norm();
            record.best = best;
            record.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
            if (observer.on_eval) observer.on_eval(record);
            if (observer.on_checkpoint && total % config.checkpoint_every == 0) {
                observer.on_checkpoint(schedule_of(best_x), record);
            }
            return ev.value;
        };
        LbfgsResult lr = lbfgs_minimize(fn, x0, lopt);
        summary.line_search_restarts += lr.restarts;
        ++summary.restarts_run;
        if (best < config.threshold) break;
        if (config.plateau_tolerance > 0.0 &&
            std::abs(restart_best - previous_restart) <= config.plateau_tolerance * restart_best) {
            summary.plateau = true;
            break;
        }
        previous_restart = restart_best;
    }
    summary.best_value = best;
    summary.evaluations = total;
    result.schedule = schedule_of(best_x);
    result.value = best;
    result.evaluations = total;
    result.reached_threshold = best < config.threshold;
    result.stages.push_back(summary);
    return result;
}

OptimizationResult staged_optimize(const ControlProblem &problem, std::size_t n, const PulseSchedule &start,
                                   const OptimizerConfig &config, const OptimizerObserver &observer, Stage first) {
    if (problem.num_generators() != n + 3) throw ConfigError("staged optimization needs the chain model generators");
    OptimizationResult total;
    PulseSchedule current = start;
    for (Stage stage : {Stage::translational, Stage::inversion, Stage::free}) {
        if (static_cast<int>(stage) < static_cast<int>(first)) continue;
        auto params = ControlParametrization::chain_stage(stage, n);
        OptimizationResult r = optimize_stage(problem, params, current, config, observer);
        total.evaluations += r.evaluations;
        total.stages.push_back(r.stages.front());
        current = r.schedule;
        total.schedule = r.schedule;
        total.value = r.value;
        total.reached_threshold = r.reached_threshold;
        if (r.reached_threshold) break;
    }
    return total;
}

PulseSchedule smooth(const PulseSchedule &schedule, std::size_t window, const std::vector<std::size_t> &drift_columns) {
    if (window == 0) throw ConfigError("smoothing window must be positive");
    PulseSchedule out = schedule;
    const auto bins = static_cast<Eigen::Index>(schedule.bins());
    const auto half = static_cast<Eigen::Index>(window / 2);
    const auto extra = static_cast<Eigen::Index>(window % 2 == 0 ? 1 : 0);
    for (Eigen::Index k = 0; k < schedule.amplitudes.cols(); ++k) {
        if (std::find(drift_columns.begin(), drift_columns.end(), static_cast<std::size_t>(k)) != drift_columns.end()) continue;
        for (Eigen::Index l = 0; l < bins; ++l) {
            const Eigen::Index lo = std::max<Eigen::Index>(0, l - half + extra);
            const Eigen::Index hi = std::min<Eigen::Index>(bins - 1, l + half);
            out.amplitudes(l, k) = schedule.amplitudes.col(k).segment(lo, hi - lo + 1).mean();
        }
    }
    return out;
}

SmoothingResult smooth_and_reoptimize(const ControlProblem &problem, const ControlParametrization &params,
                                      const PulseSchedule &schedule, const OptimizerConfig &config, std::size_t window,
                                      const OptimizerObserver &observer) {
    SmoothingResult out;
    out.before = problem.value(schedule);
    PulseSchedule smoothed = smooth(schedule, window, params.drift_columns());
    out.smoothed = problem.value(smoothed);
    out.optimized = optimize_stage(problem, params, smoothed, config, observer);
    return out;
}

double spectral_width(const PulseSchedule &schedule, const std::vector<std::size_t> &drift_columns, double fraction) {
    const auto m = static_cast<Eigen::Index>(schedule.bins());
    const Eigen::Index nf = m / 2 + 1;
    Eigen::VectorXd energy = Eigen::VectorXd::Zero(nf);
    for (Eigen::Index k = 0; k < schedule.amplitudes.cols(); ++k) {
        if (std::find(drift_columns.begin(), drift_columns.end(), static_cast<std::size_t>(k)) != drift_columns.end()) continue;
        for (Eigen::Index f = 0; f < nf; ++f) {
            std::complex<double> acc = 0.0;
            for (Eigen::Index l = 0; l < m; ++l) {
                acc += schedule.amplitudes(l, k) * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(f * l) / static_cast<double>(m));
            }
            energy[f] += std::norm(acc);
        }
    }
    const double total = energy.sum();
    if (total == 0.0) return 0.0;
    double acc = 0.0;
    for (Eigen::Index f = 0; f < nf; ++f) {
        acc += energy[f];
        if (acc >= fraction * total) return static_cast<double>(f);
    }
    return static_cast<double>(nf - 1);
}

}  // namespace lieopt
