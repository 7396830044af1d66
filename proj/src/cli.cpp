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

#include "lieopt/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>

#include "lieopt/errors.hpp"
#include "lieopt/workflow.hpp"

namespace lieopt {

namespace {

using nlohmann::json;

std::string error_kind(const std::exception &e) {
    if (dynamic_cast<const ClosureOverflow *>(&e)) return "closure-overflow";
    if (dynamic_cast<const ClosureViolation *>(&e)) return "closure-violation";
    if (dynamic_cast<const MembershipError *>(&e)) return "membership";
    if (dynamic_cast<const IntegratorError *>(&e)) return "integrator";
    if (dynamic_cast<const DimensionError *>(&e)) return "dimension";
    if (dynamic_cast<const IntegrityError *>(&e)) return "integrity";
    if (dynamic_cast<const ConfigError *>(&e)) return "config";
    if (dynamic_cast<const Error *>(&e)) return "lieopt";
    return "internal";
}

std::optional<AlgebraCache> cache_from_env() { return AlgebraCache::from_environment(); }

const AlgebraCache *pointer(const std::optional<AlgebraCache> &c) { return c ? &*c : nullptr; }

int cmd_algebra(const std::string &model_name, std::size_t n, std::size_t max_dim, const std::string &out_path,
                std::ostream &out) {
    const ModelId id = parse_model_id(model_name);
    const ModelSpec model = make_model(id, n);
    const auto cache = cache_from_env();
    bool hit = false;
    const Algebra algebra = cache ? cache->load_or_build(model.generators, max_dim, &hit)
                                  : build_algebra(model.generators, max_dim);
    if (!out_path.empty()) write_algebra(out_path, algebra);
    const auto formula = closure_dimension_formula(id, n);
    json report = {{"model", to_string(id)},
                   {"n", n},
                   {"d", algebra.basis.size()},
                   {"d0", algebra.num_generator_strings},
                   {"formula", formula ? json(*formula) : json(nullptr)},
                   {"generator_hash", algebra.constants.generator_hash},
                   {"basis_hash", algebra.constants.basis_hash},
                   {"cache", cache ? json(hit ? "hit" : "stored") : json("disabled")}};
    out << report.dump(2) << '\n';
    return formula && *formula != algebra.basis.size() ? kExitToleranceFailure : kExitOk;
}

int cmd_target(const std::string &config_path, const std::string &out_path, std::optional<double> max_error,
               std::ostream &out) {
    const RunConfig config = RunConfig::load(config_path);
    if (config.problem != ProblemType::state_prep) throw ConfigError("target expects a state-prep config");
    const auto cache = cache_from_env();
    const RunSetup setup = prepare_run(config, pointer(cache));
    json meta = {{"target", to_string(config.target)}, {"n", config.n}, {"config_hash", config.hash()}};
    if (setup.hold_time) {
        meta["hold_time"] = *setup.hold_time;
        meta["adiabatic_error"] = *setup.adiabatic_error;
    }
    if (!out_path.empty()) write_coefficients(out_path, setup.target, setup.basis(), meta.dump());
    meta["norm"] = setup.target.norm();
    out << meta.dump(2) << '\n';
    if (max_error && setup.adiabatic_error && *setup.adiabatic_error > *max_error) return kExitToleranceFailure;
    return kExitOk;
}

int cmd_optimize(const std::string &config_path, const std::string &out_dir, bool resume, std::ostream &out,
                 std::ostream &err) {
    const RunConfig config = RunConfig::load(config_path);
    const auto cache = cache_from_env();
    const RunSetup setup = prepare_run(config, pointer(cache));
    RunPaths paths{out_dir.empty() ? std::filesystem::path(config.output_dir) : std::filesystem::path(out_dir)};
    const RunOutcome outcome = run_optimization(setup, paths, resume, &err);
    json summary = json::parse(outcome.diagnostics.to_json());
    summary["evaluations"] = outcome.result.evaluations;
    summary["reached_threshold"] = outcome.result.reached_threshold;
    summary["pulse"] = paths.pulse().string();
    out << summary.dump(2) << '\n';
    return outcome.result.reached_threshold ? kExitOk : kExitToleranceFailure;
}

int cmd_verify(const std::string &config_path, const std::string &pulse_path, const std::string &report_path,
               std::ostream &out) {
    const RunConfig config = RunConfig::load(config_path);
    const auto cache = cache_from_env();
    const RunSetup setup = prepare_run(config, pointer(cache));
    const PulseSchedule schedule = load_matching_pulse(setup, pulse_path);
    const VerificationReport report = verify_run(setup, schedule);
    const std::string text = report.to_json();
    if (!report_path.empty()) write_text(report_path, text + "\n");
    out << text << '\n';
    return report.passed() ? kExitOk : kExitToleranceFailure;
}

int cmd_bound(const std::string &config_path, const std::string &pulse_path, std::ostream &out) {
    const RunConfig config = RunConfig::load(config_path);
    if (config.problem != ProblemType::state_prep || config.target == TargetId::d) {
        throw ConfigError("bound needs a G or C state-prep config");
    }
    const auto cache = cache_from_env();
    const RunSetup setup = prepare_run(config, pointer(cache));
    const PulseSchedule schedule = load_matching_pulse(setup, pulse_path);
    out << diagnose(setup, schedule).to_json() << '\n';
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Operator-space pulse design for Lie-algebraic spin models", "lieopt"};
    app.require_subcommand(1);

    std::string model = "chain", out_path, config_path, pulse_path, out_dir, report_path;
    std::size_t n = 0, max_dim = kDefaultMaxDim;
    bool resume = false;
    std::optional<double> max_error;

    auto *algebra = app.add_subcommand("algebra", "Closure dimension and structure constants of a catalog model");
    algebra->add_option("--model", model, "chain, comb or hex-ladder")->capture_default_str();
    algebra->add_option("--n", n, "Number of qubits")->required();
    algebra->add_option("--max-dim", max_dim, "Closure size limit")->capture_default_str();
    algebra->add_option("--out", out_path, "Write the structure-constant file here");

    auto *target = app.add_subcommand("target", "Target invariant of a state-prep config");
    target->add_option("--config", config_path, "Run config (JSON)")->required()->check(CLI::ExistingFile);
    target->add_option("--out", out_path, "Write the coefficient file here");
    target->add_option("--max-error", max_error, "Fail when the adiabatic error exceeds this");

    auto *optimize = app.add_subcommand("optimize", "Optimize a pulse and write the run directory");
    optimize->add_option("--config", config_path, "Run config (JSON)")->required()->check(CLI::ExistingFile);
    optimize->add_option("--out", out_dir, "Run directory (defaults to output_dir of the config)");
    optimize->add_flag("--resume", resume, "Continue from the latest checkpoint");

    auto *verify = app.add_subcommand("verify", "Dense verification of a pulse");
    verify->add_option("--config", config_path, "Run config (JSON)")->required()->check(CLI::ExistingFile);
    verify->add_option("--pulse", pulse_path, "Pulse CSV")->required()->check(CLI::ExistingFile);
    verify->add_option("--report", report_path, "Also write the JSON report here");

    auto *bound = app.add_subcommand("bound", "Fidelity bound and deviation of a state-prep pulse");
    bound->add_option("--config", config_path, "Run config (JSON)")->required()->check(CLI::ExistingFile);
    bound->add_option("--pulse", pulse_path, "Pulse CSV")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (algebra->parsed()) return cmd_algebra(model, n, max_dim, out_path, out);
        if (target->parsed()) return cmd_target(config_path, out_path, max_error, out);
        if (optimize->parsed()) return cmd_optimize(config_path, out_dir, resume, out, err);
        if (verify->parsed()) return cmd_verify(config_path, pulse_path, report_path, out);
        if (bound->parsed()) return cmd_bound(config_path, pulse_path, out);
    } catch (const std::exception &e) {
        err << "error[" << error_kind(e) << "]: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

}  // namespace lieopt
