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

#ifndef LIEOPT_CONFIG_HPP
#define LIEOPT_CONFIG_HPP

#include <cstdint>
#include <numbers>
#include <string>

#include "lieopt/dynamics.hpp"
#include "lieopt/models.hpp"
#include "lieopt/objectives.hpp"
#include "lieopt/optimizer.hpp"
#include "lieopt/targets.hpp"

namespace lieopt {

enum class ProblemType { state_prep, gate };
std::string to_string(ProblemType type);

/// One optimization run. Parsed from JSON; unknown keys are rejected and
/// every default is filled in so that `to_json()` is the resolved snapshot.
///
///     {
///       "model": "chain", "n": 5, "seed": 1, "output_dir": "runs/ghz5",
///       "problem": {"type": "state-prep", "target": "G"},
///       "schedule": {"duration_tau": 1.25, "bins": 50},
///       "optimizer": {"threshold": 1e-4, "restarts": 12},
///       "adiabatic": {"duration_tau": 2500},
///       "propagation": {"dense_threshold": 32}
///     }
struct RunConfig {
    ModelId model = ModelId::chain;
    std::size_t n = 0;
    ProblemType problem = ProblemType::state_prep;
    TargetId target = TargetId::ghz;
    double theta = std::numbers::pi / 8;
    GateMode gate_mode = GateMode::reduced;
    /// Duration in units of tau_g.
    double duration_tau = 0.0;
    std::size_t bins = 0;
    OptimizerConfig optimizer;
    bool staged = true;
    /// Moving-average window for a smoothing pass after optimization; 0 skips it.
    std::size_t smoothing_window = 0;
    AdiabaticSpec adiabatic;
    PropagationOptions propagation;
    std::size_t max_dim = kDefaultMaxDim;
    std::string output_dir = "lieopt-run";
    std::uint64_t seed = 1;

    static RunConfig parse(const std::string &json_text);
    static RunConfig load(const std::string &path);
    /// Resolved snapshot, pretty-printed.
    std::string to_json() const;
    /// SHA-256 of the resolved snapshot without `output_dir`.
    std::string hash() const;

    double duration() const { return duration_tau * kTauG; }
};

/// Default (duration in tau_g, bins) for a problem on n qubits.
std::pair<double, std::size_t> default_schedule(ProblemType type, TargetId target, std::size_t n);

}  // namespace lieopt

#endif
