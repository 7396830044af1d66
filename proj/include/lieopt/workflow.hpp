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

#ifndef LIEOPT_WORKFLOW_HPP
#define LIEOPT_WORKFLOW_HPP

#include <Eigen/Core>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lieopt/config.hpp"
#include "lieopt/io.hpp"

namespace lieopt {

/// Everything a run needs before optimization starts.
struct RunSetup {
    RunConfig config;
    ModelSpec model;
    std::shared_ptr<const Algebra> algebra;
    std::shared_ptr<const StructureConstants> constants;
    bool cache_hit = false;
    WeightedPauliSum target_hamiltonian;
    /// State preparation: sum_j Z_j and the target invariant.
    Eigen::VectorXd initial;
    Eigen::VectorXd target;
    /// Adiabatic error of the D target and the hold time it was drawn with.
    std::optional<double> adiabatic_error;
    std::optional<double> hold_time;
    /// Gate problems: the optimized set and the full set used for reporting.
    std::optional<GateProblem> gate;
    std::optional<GateProblem> full_gate;
    ControlObjective objective;

    const OperatorBasis &basis() const { return algebra->basis; }
    ControlProblem problem() const;
    /// Translational start for staged chain runs, otherwise free controls.
    ControlParametrization first_parametrization() const;
    ControlParametrization parametrization(Stage stage) const;
    bool staged() const;
    PulseMetadata metadata(Stage stage, double value) const;
};

/// Builds the algebra (through `cache` when given), targets and objective.
RunSetup prepare_run(const RunConfig &config, const AlgebraCache *cache = nullptr);

/// Operator-space figures of merit for one schedule.
struct Diagnostics {
    double value = 0.0;
    std::size_t trajectories = 0;
    std::string mode;
    /// <H_T> at the end of the pulse, the fidelity bound (<H_T> - E0)/(E1 - E0) and the
    /// bound deviation. Present for the G and C state preparations.
    std::optional<double> expectation;
    std::optional<double> bound;
    std::optional<double> deviation;
    std::optional<double> e0;
    std::optional<double> e1;
    /// Gate problems: infidelity of the full 2n-operator set.
    std::optional<double> full_value;
    std::optional<double> adiabatic_error;

    std::string to_json() const;
};

Diagnostics diagnose(const RunSetup &setup, const PulseSchedule &schedule);

struct VerificationCheck {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    bool passed = false;
};

/// Dense cross-checks of a schedule. States are checked up to 14 qubits,
/// unitaries up to 10 and the operator reconstruction up to 8.
struct VerificationReport {
    Diagnostics diagnostics;
    std::optional<double> dense_infidelity;
    std::optional<double> reconstruction_error;
    std::vector<VerificationCheck> checks;
    std::vector<std::string> skipped;

    bool passed() const;
    std::string to_json() const;
};

inline constexpr std::size_t kMaxReconstructionQubits = 8;
inline constexpr double kReconstructionTolerance = 1e-8;
inline constexpr double kOutsideWeightTolerance = 1e-10;
inline constexpr double kBoundSlack = 1e-10;
inline constexpr double kGateTrackingFactor = 10.0;

VerificationReport verify_run(const RunSetup &setup, const PulseSchedule &schedule);

/// File names inside a run directory.
struct RunPaths {
    std::filesystem::path dir;
    std::filesystem::path resolved_config() const { return dir / "resolved_config.json"; }
    std::filesystem::path pulse() const { return dir / "pulse.csv"; }
    std::filesystem::path plot() const { return dir / "pulse_plot.csv"; }
    std::filesystem::path trace() const { return dir / "trace.jsonl"; }
    std::filesystem::path diagnostics() const { return dir / "diagnostics.json"; }
    std::filesystem::path checkpoints() const { return dir / "checkpoints"; }
    std::filesystem::path latest_checkpoint() const { return checkpoints() / "latest"; }
};

struct RunOutcome {
    OptimizationResult result;
    Diagnostics diagnostics;
    std::optional<SmoothingResult> smoothing;
    bool resumed = false;
};

/// Optimizes and writes the resolved config, trace, checkpoints, pulse,
/// plot export and diagnostics into `paths.dir`. With `resume` the run
/// continues from the final pulse or the latest checkpoint when present.
RunOutcome run_optimization(const RunSetup &setup, const RunPaths &paths, bool resume = false,
                            std::ostream *log = nullptr);

/// Reads a pulse and refuses it unless its hashes match the setup.
PulseSchedule load_matching_pulse(const RunSetup &setup, const std::filesystem::path &csv,
                                  PulseMetadata *meta = nullptr);

}  // namespace lieopt

#endif
