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

#ifndef LIEOPT_DYNAMICS_HPP
#define LIEOPT_DYNAMICS_HPP

#include <Eigen/Core>
#include <memory>
#include <numbers>
#include <vector>

#include "lieopt/closure.hpp"
#include "lieopt/expv.hpp"

namespace lieopt {

/// Interaction timescale 2 pi / g in units where g = 1.
inline constexpr double kTauG = 2.0 * std::numbers::pi;

/// Piecewise-constant amplitudes: row l holds every generator amplitude
/// (drift included) during bin l, which lasts `dt`.
struct PulseSchedule {
    double dt = 0.0;
    Eigen::MatrixXd amplitudes;

    PulseSchedule() = default;
    PulseSchedule(double dt, Eigen::MatrixXd amplitudes) : dt(dt), amplitudes(std::move(amplitudes)) {}
    /// All-zero amplitudes except drift columns, which are set to `drift_value`.
    static PulseSchedule with_drift(std::size_t bins, double duration, std::size_t num_generators,
                                    const std::vector<std::size_t> &drift_columns, double drift_value = 1.0);

    std::size_t bins() const { return static_cast<std::size_t>(amplitudes.rows()); }
    std::size_t num_generators() const { return static_cast<std::size_t>(amplitudes.cols()); }
    double duration() const { return dt * static_cast<double>(bins()); }

    /// Throws ConfigError or DimensionError when the schedule is malformed.
    void validate(std::size_t num_generators, const std::vector<std::size_t> &drift_columns = {}) const;
};

/// Reversed bin order with every amplitude negated; undoes `s`.
PulseSchedule time_reversed(const PulseSchedule &s);

/// Builds K = sum_k h_k K_k on a precomputed union sparsity pattern.
class KAssembler {
   public:
    explicit KAssembler(const StructureConstants &sc);

    SparseMatrix assemble(const Eigen::Ref<const Eigen::VectorXd> &amplitudes) const;
    std::size_t num_generators() const { return entries_.size(); }
    std::size_t dim() const { return static_cast<std::size_t>(pattern_.rows()); }

    /// Union pattern with zero values; `entries(k)` indexes its value array.
    const SparseMatrix &pattern() const { return pattern_; }
    struct Entry {
        Eigen::Index position;
        double value;
    };
    const std::vector<Entry> &entries(std::size_t k) const { return entries_[k]; }
    /// Row index of every pattern position.
    const std::vector<Eigen::Index> &rows() const { return rows_; }

   private:
    SparseMatrix pattern_;
    std::vector<std::vector<Entry>> entries_;
    std::vector<Eigen::Index> rows_;
};

/// K = sum_k h_k K_k for one bin.
SparseMatrix assemble_k(const StructureConstants &sc, const Eigen::VectorXd &amplitudes);

struct PropagationOptions {
    ExpvOptions expv;
    /// Below this dimension bins use dense exponentials.
    std::size_t dense_threshold = 32;
    /// Equal sub-intervals per bin.
    int substeps = 1;
};

/// exp(t K) v with the dense or Krylov path chosen as for schedules.
Eigen::VectorXd exp_action(const SparseMatrix &k, double t, const Eigen::VectorXd &v,
                           const PropagationOptions &options = {});

/// Per-bin propagators U_l = exp(dt K_l) for one schedule.
class BinPropagators {
   public:
    BinPropagators(std::shared_ptr<const KAssembler> assembler, const PulseSchedule &schedule,
                   const PropagationOptions &options = {});
    BinPropagators(const StructureConstants &sc, const PulseSchedule &schedule, const PropagationOptions &options = {});

    std::size_t bins() const { return generators_.size(); }
    /// U_l v, or U_l^T v when `transpose` is set. `bin` is 0-based.
    Eigen::VectorXd apply(std::size_t bin, const Eigen::VectorXd &v, bool transpose = false) const;
    /// dt K_l.
    const SparseMatrix &generator(std::size_t bin) const { return generators_[bin]; }
    const KAssembler &assembler() const { return *assembler_; }

   private:
    std::shared_ptr<const KAssembler> assembler_;
    PropagationOptions options_;
    std::vector<SparseMatrix> generators_;
    std::vector<Eigen::MatrixXd> dense_;
};

/// a(T) = U_M ... U_1 a0.
Eigen::VectorXd propagate(const StructureConstants &sc, const PulseSchedule &schedule, const Eigen::VectorXd &a0,
                          const PropagationOptions &options = {});

/// a_0 .. a_M with a_m = U_m a_{m-1}.
std::vector<Eigen::VectorXd> forward_cache(const BinPropagators &props, const Eigen::VectorXd &a0);
/// b_0 .. b_M with b_M = target and b_{m-1} = U_m^T b_m, so b_m . a_m is
/// constant along the trajectory.
std::vector<Eigen::VectorXd> backward_cache(const BinPropagators &props, const Eigen::VectorXd &target);

/// Forward (or adjoint, when `adjoint` is set) cached propagation.
std::vector<Eigen::VectorXd> propagate_with_cache(const StructureConstants &sc, const PulseSchedule &schedule,
                                                  const Eigen::VectorXd &v, bool adjoint = false,
                                                  const PropagationOptions &options = {});

}  // namespace lieopt

#endif
