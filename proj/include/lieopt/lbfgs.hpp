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

#ifndef LIEOPT_LBFGS_HPP
#define LIEOPT_LBFGS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>

namespace lieopt {

/// Returns f(x) and writes the gradient into the second argument.
using ObjectiveFunction = std::function<double(const Eigen::VectorXd &, Eigen::VectorXd &)>;

struct LbfgsOptions {
    std::size_t memory = 20;
    std::size_t max_evals = 1000;
    /// Stop as soon as f < threshold.
    double threshold = -std::numeric_limits<double>::infinity();
    double grad_tol = 1e-12;
    /// Optional box; iterates are projected onto it.
    std::optional<Eigen::VectorXd> lower;
    std::optional<Eigen::VectorXd> upper;
    /// Uniform perturbation applied to the best iterate after a failed line search.
    double perturbation = 0.05;
    std::uint64_t seed = 0;
    std::size_t max_line_search = 30;
    /// Stop after this many consecutive line-search failures.
    std::size_t max_failures = 5;
    /// Stop after `stall_iterations` consecutive steps that each lower f by at
    /// most ftol * max(1, |f|).
    double ftol = 1e-12;
    std::size_t stall_iterations = 10;
};

enum class StopReason { threshold, max_evals, gradient, stalled };
std::string to_string(StopReason reason);

struct LbfgsResult {
    Eigen::VectorXd x;
    double value = std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
    std::size_t iterations = 0;
    /// Perturbed restarts triggered by line-search failures.
    std::size_t restarts = 0;
    StopReason reason = StopReason::max_evals;
};

/// Called after every evaluation with (evaluation index from 1, f, |grad|, best f).
using EvaluationCallback = std::function<void(std::size_t, double, double, double)>;

/// Limited-memory BFGS with a weak Wolfe line search and box projection.
/// The returned point is the best one evaluated; runs are deterministic.
LbfgsResult lbfgs_minimize(const ObjectiveFunction &f, const Eigen::VectorXd &x0, const LbfgsOptions &options,
                           const EvaluationCallback &on_eval = {});

}  // namespace lieopt

#endif
