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

#include "lieopt/workflow.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <random>

#include "lieopt/errors.hpp"
#include "lieopt/exact.hpp"

namespace lieopt {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double> &v) { return v ? json(*v) : json(nullptr); }

}  // namespace

ControlProblem RunSetup::problem() const { return ControlProblem(constants, objective, config.propagation); }

bool RunSetup::staged() const { return config.staged && config.model == ModelId::chain; }

ControlParametrization RunSetup::parametrization(Stage stage) const {
    if (config.model == ModelId::chain && stage != Stage::free) return ControlParametrization::chain_stage(stage, config.n);
    return ControlParametrization::free(model.generators);
}

ControlParametrization RunSetup::first_parametrization() const {
    return parametrization(staged() ? Stage::translational : Stage::free);
}

PulseMetadata RunSetup::metadata(Stage stage, double value) const {
    PulseMetadata meta;
    meta.num_qubits = config.n;
    meta.model = to_string(config.model);
    for (const auto &g : model.generators.generators()) meta.generators.push_back(g.label);
    meta.drift_columns = model.generators.drift_indices();
    meta.generator_hash = constants->generator_hash;
    meta.basis_hash = constants->basis_hash;
    meta.config_hash = config.hash();
    meta.stage = to_string(stage);
    meta.value = value;
    return meta;
}

RunSetup prepare_run(const RunConfig &config, const AlgebraCache *cache) {
    RunSetup s;
    s.config = config;
    s.model = make_model(config.model, config.n);
    Algebra algebra = cache ? cache->load_or_build(s.model.generators, config.max_dim, &s.cache_hit)
                            : build_algebra(s.model.generators, config.max_dim);
    s.algebra = std::make_shared<const Algebra>(std::move(algebra));
    s.constants = std::shared_ptr<const StructureConstants>(s.algebra, &s.algebra->constants);
    s.target_hamiltonian = target_hamiltonian(config.target, config.n);
    const OperatorBasis &basis = s.algebra->basis;

    if (config.problem == ProblemType::gate) {
        s.gate = make_gate_problem(basis, config.gate_mode, s.target_hamiltonian, config.theta, config.propagation);
        s.full_gate = config.gate_mode == GateMode::full
                          ? *s.gate
                          : make_gate_problem(basis, GateMode::full, s.target_hamiltonian, config.theta,
                                              config.propagation);
        s.objective = gate_objective(*s.gate);
        return s;
    }

    s.initial = expand_in_basis(basis, initial_invariant(config.n));
    if (config.target == TargetId::d) {
        s.target = adiabatic_target(basis, config.adiabatic, config.propagation);
        std::seed_seq seq{config.seed, std::uint64_t{0xad}};
        std::mt19937_64 rng(seq);
        s.hold_time = draw_hold_time(rng);
        s.adiabatic_error = adiabatic_error(basis, s.target, s.target_hamiltonian, *s.hold_time, config.propagation);
    } else {
        s.target = expand_in_basis(basis, s.target_hamiltonian);
    }
    s.objective = state_prep_objective(s.initial, s.target);
    return s;
}

std::string Diagnostics::to_json() const {
    json j = {{"J", value},
              {"trajectories", trajectories},
              {"mode", mode},
              {"expectation", optional_number(expectation)},
              {"bound", optional_number(bound)},
              {"deviation", optional_number(deviation)},
              {"e0", optional_number(e0)},
              {"e1", optional_number(e1)},
              {"gap", e0 && e1 ? json(*e1 - *e0) : json(nullptr)},
              {"full_J", optional_number(full_value)},
              {"adiabatic_error", optional_number(adiabatic_error)}};
    return j.dump(2);
}

Diagnostics diagnose(const RunSetup &setup, const PulseSchedule &schedule) {
    const ControlProblem problem = setup.problem();
    Diagnostics d;
    d.value = problem.value(schedule);
    d.trajectories = setup.objective.pairs.size();
    d.adiabatic_error = setup.adiabatic_error;
    if (setup.gate) {
        d.mode = to_string(setup.gate->mode);
        if (setup.gate->mode == GateMode::full) {
            d.full_value = d.value;
        } else {
            ControlProblem full(setup.constants, gate_objective(*setup.full_gate), setup.config.propagation);
            d.full_value = full.value(schedule);
        }
        return d;
    }
    d.mode = "state";
    if (setup.config.target == TargetId::d) return d;
    // H_G and H_C are unitarily equivalent to sum_j Z_j.
    const double n = static_cast<double>(setup.config.n);
    d.e0 = -n;
    d.e1 = -n + 2.0;
    d.expectation = backpropagated_expectation(*setup.constants, setup.basis(), schedule, setup.target,
                                               setup.config.propagation);
    d.bound = fidelity_bound(*d.expectation, *d.e0, *d.e1);
    if (d.value > 0.0) d.deviation = bound_deviation(d.value, *d.bound, *d.e0, *d.e1, setup.config.n);
    return d;
}

bool VerificationReport::passed() const {
    for (const auto &c : checks) {
        if (!c.passed) return false;
    }
    return true;
}

std::string VerificationReport::to_json() const {
    json j;
    j["diagnostics"] = json::parse(diagnostics.to_json());
    j["dense_infidelity"] = optional_number(dense_infidelity);
    j["reconstruction_error"] = optional_number(reconstruction_error);
    j["checks"] = json::array();
    for (const auto &c : checks) {
        j["checks"].push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"passed", c.passed}});
    }
    j["skipped"] = skipped;
    j["passed"] = passed();
    return j.dump(2);
}

namespace {

void add_check(VerificationReport &r, std::string name, double value, double limit) {
    r.checks.push_back({std::move(name), value, limit, value <= limit});
}

struct Reconstruction {
    double coefficient_error = 0.0;
    double outside_fraction = 0.0;
};

// Compares U A_j U^dagger with the propagated a_j(T). The weight outside the
// basis is a difference of squared norms, so it is checked relative to |a_j|^2.
Reconstruction reconstruct(const RunSetup &setup, const ComplexMatrix &u, const std::vector<Eigen::VectorXd> &initials,
                           const std::vector<Eigen::VectorXd> &finals) {
    Reconstruction r;
    for (std::size_t j = 0; j < initials.size(); ++j) {
        const ComplexMatrix a0 = densify(setup.basis().to_operator(initials[j]));
        const BasisExpansion e = expand_dense(setup.basis(), u * a0 * u.adjoint());
        r.coefficient_error = std::max(r.coefficient_error, (e.coefficients - finals[j]).cwiseAbs().maxCoeff());
        r.outside_fraction = std::max(r.outside_fraction, std::abs(e.outside_weight) / initials[j].squaredNorm());
    }
    return r;
}

}  // namespace

VerificationReport verify_run(const RunSetup &setup, const PulseSchedule &schedule) {
    schedule.validate(setup.model.generators.size(), setup.model.generators.drift_indices());
    VerificationReport r;
    r.diagnostics = diagnose(setup, schedule);
    const std::size_t n = setup.config.n;
    const GeneratorSet &gens = setup.model.generators;

    std::optional<ComplexMatrix> u;
    if (n <= kMaxUnitaryQubits && (setup.gate || n <= kMaxReconstructionQubits)) u = propagate_unitary(gens, schedule);

    if (setup.gate) {
        if (u) {
            const ComplexMatrix target = expm_hermitian(densify(setup.target_hamiltonian), setup.config.theta);
            r.dense_infidelity = 1.0 - gate_fidelity(*u, target);
            add_check(r, "dense_gate_infidelity_tracks_operator", *r.dense_infidelity,
                      kGateTrackingFactor * *r.diagnostics.full_value + kBoundSlack);
        } else {
            r.skipped.push_back("dense gate infidelity: n > " + std::to_string(kMaxUnitaryQubits));
        }
    } else {
        if (n <= kMaxDenseQubits) {
            const ComplexVector psi = propagate_state(gens, schedule, initial_ground_state(n));
            const LowLevels levels = lowest_levels(setup.target_hamiltonian);
            if (levels.degenerate) {
                r.skipped.push_back("dense state fidelity: degenerate target ground state");
            } else {
                r.dense_infidelity = 1.0 - state_fidelity(psi, levels.ground);
                if (r.diagnostics.bound) {
                    add_check(r, "infidelity_within_bound", *r.dense_infidelity - *r.diagnostics.bound, kBoundSlack);
                }
            }
        } else {
            r.skipped.push_back("dense state fidelity: n > " + std::to_string(kMaxDenseQubits));
        }
    }

    if (u && n <= kMaxReconstructionQubits) {
        const ControlProblem problem = setup.problem();
        std::vector<Eigen::VectorXd> initials;
        for (const auto &p : setup.objective.pairs) initials.push_back(p.initial);
        const Reconstruction rec = reconstruct(setup, *u, initials, problem.finals(schedule));
        r.reconstruction_error = rec.coefficient_error;
        add_check(r, "operator_reconstruction", rec.coefficient_error, kReconstructionTolerance);
        add_check(r, "operator_outside_basis", rec.outside_fraction, kOutsideWeightTolerance);
    } else {
        r.skipped.push_back("operator reconstruction: n > " + std::to_string(kMaxReconstructionQubits));
    }
    return r;
}

PulseSchedule load_matching_pulse(const RunSetup &setup, const std::filesystem::path &csv, PulseMetadata *meta) {
    PulseMetadata m;
    PulseSchedule s = read_pulse(csv, &m);
    if (m.config_hash != setup.config.hash()) {
        throw IntegrityError("pulse " + csv.string() + " was produced by a different config");
    }
    if (m.generator_hash != setup.constants->generator_hash || m.basis_hash != setup.constants->basis_hash) {
        throw IntegrityError("pulse " + csv.string() + " does not match the model algebra");
    }
    s.validate(setup.model.generators.size(), setup.model.generators.drift_indices());
    if (meta) *meta = m;
    return s;
}

namespace {

std::filesystem::path checkpoint_name(const RunPaths &paths, const TraceRecord &r) {
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%06zu.csv", to_string(r.stage).c_str(), r.eval);
    return paths.checkpoints() / name;
}

}  // namespace

RunOutcome run_optimization(const RunSetup &setup, const RunPaths &paths, bool resume, std::ostream *log) {
    namespace fs = std::filesystem;
    fs::create_directories(paths.checkpoints());
    const RunConfig &config = setup.config;
    RunOutcome outcome;

    if (resume && fs::exists(paths.resolved_config())) {
        if (RunConfig::parse(read_text(paths.resolved_config())).hash() != config.hash()) {
            throw ConfigError("cannot resume: " + paths.resolved_config().string() + " holds a different config");
        }
    }
    write_text(paths.resolved_config(), config.to_json() + "\n");

    const ControlProblem problem = setup.problem();
    Stage first = setup.staged() ? Stage::translational : Stage::free;
    PulseSchedule start = initial_guess(setup.first_parametrization(), config.bins, config.duration(), config.optimizer);
    if (resume) {
        std::optional<fs::path> from;
        if (fs::exists(paths.pulse())) {
            from = paths.pulse();
        } else if (fs::exists(paths.latest_checkpoint())) {
            from = paths.checkpoints() / read_text(paths.latest_checkpoint());
        }
        if (from) {
            PulseMetadata meta;
            start = load_matching_pulse(setup, *from, &meta);
            first = parse_stage(meta.stage);
            outcome.resumed = true;
            if (log) *log << "resuming from " << from->string() << " (stage " << meta.stage << ")\n";
        }
    }

    std::ofstream trace(paths.trace(), outcome.resumed ? std::ios::app : std::ios::trunc);
    if (!trace) throw Error("cannot open " + paths.trace().string());
    OptimizerObserver observer;
    observer.on_eval = [&](const TraceRecord &r) { trace << trace_line(r) << '\n'; };
    observer.on_checkpoint = [&](const PulseSchedule &s, const TraceRecord &r) {
        const fs::path path = checkpoint_name(paths, r);
        write_pulse(path, s, setup.metadata(r.stage, r.best));
        write_text(paths.latest_checkpoint(), path.filename().string());
        trace.flush();
    };

    if (setup.staged()) {
        outcome.result = staged_optimize(problem, config.n, start, config.optimizer, observer, first);
    } else {
        outcome.result = optimize_stage(problem, setup.parametrization(Stage::free), start, config.optimizer, observer);
    }
    Stage last = outcome.result.stages.empty() ? first : outcome.result.stages.back().stage;
    if (config.smoothing_window > 0) {
        outcome.smoothing = smooth_and_reoptimize(problem, setup.parametrization(last), outcome.result.schedule,
                                                  config.optimizer, config.smoothing_window, observer);
        const OptimizationResult &o = outcome.smoothing->optimized;
        outcome.result.schedule = o.schedule;
        outcome.result.value = o.value;
        outcome.result.evaluations += o.evaluations;
        outcome.result.reached_threshold = o.reached_threshold;
        outcome.result.stages.insert(outcome.result.stages.end(), o.stages.begin(), o.stages.end());
    }
    trace.close();

    const PulseSchedule &best = outcome.result.schedule;
    write_pulse(paths.pulse(), best, setup.metadata(last, outcome.result.value));
    std::vector<std::string> labels;
    for (const auto &g : setup.model.generators.generators()) labels.push_back(g.label);
    write_plot_csv(paths.plot(), best, labels, setup.model.generators.drift_indices());
    outcome.diagnostics = diagnose(setup, best);

    json diag = json::parse(outcome.diagnostics.to_json());
    diag["config_hash"] = config.hash();
    diag["evaluations"] = outcome.result.evaluations;
    diag["reached_threshold"] = outcome.result.reached_threshold;
    diag["resumed"] = outcome.resumed;
    diag["stages"] = json::array();
    for (const auto &st : outcome.result.stages) {
        diag["stages"].push_back({{"stage", to_string(st.stage)},
                                  {"initial_J", st.initial_value},
                                  {"best_J", st.best_value},
                                  {"evaluations", st.evaluations},
                                  {"restarts", st.restarts_run},
                                  {"line_search_restarts", st.line_search_restarts},
                                  {"plateau", st.plateau}});
    }
    if (outcome.smoothing) {
        diag["smoothing"] = {{"window", config.smoothing_window},
                             {"before_J", outcome.smoothing->before},
                             {"smoothed_J", outcome.smoothing->smoothed}};
    }
    write_text(paths.diagnostics(), diag.dump(2) + "\n");
    if (log) {
        *log << "J = " << outcome.result.value << " after " << outcome.result.evaluations << " evaluations\n";
    }
    return outcome;
}

}  // namespace lieopt
