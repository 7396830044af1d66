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

#ifndef LIEOPT_OPTIMIZER_HPP
#define LIEOPT_OPTIMIZER_HPP

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lieopt/dynamics.hpp"
#include "lieopt/lbfgs.hpp"
#include "lieopt/models.hpp"
#include "lieopt/objectives.hpp"

namespace lieopt {

enum class GradientMethod {
    /// Exact derivative of each bin exponential (Taylor panels of the
    /// Duhamel integral, accurate to rounding).
    exact,
    /// -b^T {dt K_k - (dt^2/2)[K_l, K_k]} a with a, b taken at the start of bin l.
    second_order,
};
std::string to_string(GradientMethod method);
GradientMethod parse_gradient_method(std::string_view text);

struct Evaluation {
    double value = 0.0;
    /// dJ/dc for every bin (rows) and generator (columns); drift columns included.
    Eigen::MatrixXd gradient;
};

/// Objective J = 1 - sum_j w_j a_j(T) . t_j over a fixed structure-constant set.
class ControlProblem {
   public:
    ControlProblem(std::shared_ptr<const StructureConstants> sc, ControlObjective objective,
                   PropagationOptions options = {});

    const StructureConstants &structure_constants() const { return *sc_; }
    const ControlObjective &objective() const { return objective_; }
    const PropagationOptions &options() const { return options_; }
    std::size_t num_generators() const { return sc_->num_generators(); }

    double value(const PulseSchedule &schedule) const;
    Evaluation evaluate(const PulseSchedule &schedule, GradientMethod method = GradientMethod::exact) const;
    /// Final vectors a_j(T).
    std::vector<Eigen::VectorXd> finals(const PulseSchedule &schedule) const;
    /// (J(T + dT) - J(T)) / dT with amplitudes fixed and dt scaled.
    double duration_gradient(const PulseSchedule &schedule, double step = 1e-10) const;

   private:
    std::shared_ptr<const StructureConstants> sc_;
    std::shared_ptr<const KAssembler> assembler_;
    ControlObjective objective_;
    PropagationOptions options_;
};

enum class Stage { translational = 1, inversion = 2, free = 3 };
std::string to_string(Stage stage);

/// Linear map from per-bin free parameters to generator amplitudes:
/// amplitudes(l, k) = sum_p map(k, p) theta(l, p), drift columns fixed.
class ControlParametrization {
   public:
    ControlParametrization(Eigen::MatrixXd map, std::vector<std::size_t> drift_columns, Stage stage);

    /// One parameter per control generator.
    static ControlParametrization free(const GeneratorSet &gens);
    /// Tyings of the chain model for the three relaxation stages.
    static ControlParametrization chain_stage(Stage stage, std::size_t n);

    Stage stage() const { return stage_; }
    std::size_t params_per_bin() const { return static_cast<std::size_t>(map_.cols()); }
    std::size_t num_generators() const { return static_cast<std::size_t>(map_.rows()); }
    const Eigen::MatrixXd &map() const { return map_; }
    const std::vector<std::size_t> &drift_columns() const { return drift_; }

    /// theta has bins * params_per_bin entries, bin-major.
    PulseSchedule expand(const Eigen::VectorXd &theta, std::size_t bins, double dt, double drift_value = 1.0) const;
    Eigen::VectorXd contract(const Eigen::MatrixXd &amplitude_gradient) const;
    /// Least-squares parameters reproducing the control amplitudes of `schedule`.
    Eigen::VectorXd restrict(const PulseSchedule &schedule) const;

   private:
    Eigen::MatrixXd map_;
    std::vector<std::size_t> drift_;
    Stage stage_;
};

struct OptimizerConfig {
    std::size_t max_evals = 1000;
    std::size_t restarts = 12;
    /// Scale of the uniform perturbation applied to the initial guess of each restart.
    double perturbation = 0.05;
    /// Scale of the uniform noise in the zero-control initial guess.
    double initial_noise = 0.01;
    double threshold = 1e-4;
    bool optimize_duration = false;
    double duration_step = 1e-10;
    std::uint64_t seed = 1;
    std::size_t memory = 20;
    double grad_tol = 1e-12;
    std::optional<double> amplitude_bound;
    GradientMethod gradient = GradientMethod::exact;
    std::size_t checkpoint_every = 100;
    double drift_value = 1.0;
    /// A stage ends early when two consecutive restarts finish at the same
    /// value to this relative tolerance (a symmetry-constrained optimum); 0 disables.
    double plateau_tolerance = 1e-8;

    void validate() const;
};

struct TraceRecord {
    std::size_t eval = 0;
    double value = 0.0;
    double grad_norm = 0.0;
    double best = 0.0;
    Stage stage = Stage::free;
    std::size_t restart = 0;
    double wall_time = 0.0;
};

struct OptimizerObserver {
    std::function<void(const TraceRecord &)> on_eval;
    /// Best schedule so far, every `checkpoint_every` evaluations.
    std::function<void(const PulseSchedule &, const TraceRecord &)> on_checkpoint;
};

struct StageSummary {
    Stage stage = Stage::free;
    double initial_value = 0.0;
    double best_value = 0.0;
    std::size_t evaluations = 0;
    std::size_t restarts_run = 0;
    std::size_t line_search_restarts = 0;
    bool plateau = false;
};

struct OptimizationResult {
    PulseSchedule schedule;
    double value = 0.0;
    std::size_t evaluations = 0;
    bool reached_threshold = false;
    std::vector<StageSummary> stages;
};

/// Multi-start L-BFGS over one parametrization, warm-started from `start`.
/// Restart r begins at start + perturbation (restart 0 unperturbed).
OptimizationResult optimize_stage(const ControlProblem &problem, const ControlParametrization &params,
                                  const PulseSchedule &start, const OptimizerConfig &config,
                                  const OptimizerObserver &observer = {});

/// Zero controls plus seeded uniform noise of scale config.initial_noise.
PulseSchedule initial_guess(const ControlParametrization &params, std::size_t bins, double duration,
                            const OptimizerConfig &config);

/// Translational, then inversion-symmetric, then free chain controls; stops
/// once the threshold is met. `first` skips the earlier stages.
OptimizationResult staged_optimize(const ControlProblem &problem, std::size_t n, const PulseSchedule &start,
                                   const OptimizerConfig &config, const OptimizerObserver &observer = {},
                                   Stage first = Stage::translational);
Stage parse_stage(std::string_view text);

/// Centered moving average over bins (window shrinks at the ends); drift columns untouched.
PulseSchedule smooth(const PulseSchedule &schedule, std::size_t window, const std::vector<std::size_t> &drift_columns = {});

struct SmoothingResult {
    OptimizationResult optimized;
    double before = 0.0;
    double smoothed = 0.0;
};
SmoothingResult smooth_and_reoptimize(const ControlProblem &problem, const ControlParametrization &params,
                                      const PulseSchedule &schedule, const OptimizerConfig &config,
                                      std::size_t window = 5, const OptimizerObserver &observer = {});

/// Bandwidth (in bins^-1 units of the DFT index) holding 99% of the spectral energy of the controls.
double spectral_width(const PulseSchedule &schedule, const std::vector<std::size_t> &drift_columns = {},
                      double fraction = 0.99);

}  // namespace lieopt

#endif
