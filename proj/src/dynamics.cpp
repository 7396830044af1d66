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

#include "lieopt/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "lieopt/errors.hpp"

namespace lieopt {

PulseSchedule PulseSchedule::with_drift(std::size_t bins, double duration, std::size_t num_generators,
                                        const std::vector<std::size_t> &drift_columns, double drift_value) {
    if (bins == 0) throw ConfigError("schedule needs at least one bin");
    PulseSchedule s(duration / static_cast<double>(bins),
                    Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(bins), static_cast<Eigen::Index>(num_generators)));
    for (auto k : drift_columns) s.amplitudes.col(static_cast<Eigen::Index>(k)).setConstant(drift_value);
    return s;
}

void PulseSchedule::validate(std::size_t num_generators, const std::vector<std::size_t> &drift_columns) const {
    if (bins() == 0) throw ConfigError("schedule needs at least one bin");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("schedule bin width must be positive and finite");
    if (this->num_generators() != num_generators) {
        throw DimensionError("schedule has " + std::to_string(this->num_generators()) + " amplitude columns, expected " +
                             std::to_string(num_generators));
    }
    if (!amplitudes.allFinite()) throw ConfigError("schedule amplitudes must be finite");
    for (auto k : drift_columns) {
        const auto col = amplitudes.col(static_cast<Eigen::Index>(k));
        if ((col.array() != col(0)).any()) {
            throw ConfigError("drift amplitude " + std::to_string(k) + " varies across bins");
        }
    }
}

PulseSchedule time_reversed(const PulseSchedule &s) {
    return PulseSchedule(s.dt, -s.amplitudes.colwise().reverse());
}

KAssembler::KAssembler(const StructureConstants &sc) : entries_(sc.num_generators()) {
    const auto d = static_cast<Eigen::Index>(sc.dim);
    SparseMatrix pattern(d, d);
    for (const auto &k : sc.k_matrices) {
        SparseMatrix ones = k;
        ones.coeffs().setOnes();
        pattern += ones;
    }
    pattern.makeCompressed();
    pattern.coeffs().setZero();
    pattern_ = std::move(pattern);

    rows_.resize(static_cast<std::size_t>(pattern_.nonZeros()));
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index p = pattern_.outerIndexPtr()[r]; p < pattern_.outerIndexPtr()[r + 1]; ++p) {
            rows_[static_cast<std::size_t>(p)] = r;
        }
    }
    for (std::size_t g = 0; g < sc.num_generators(); ++g) {
        const auto &k = sc.k_matrices[g];
        for (Eigen::Index r = 0; r < d; ++r) {
            Eigen::Index p = pattern_.outerIndexPtr()[r];
            const Eigen::Index p_end = pattern_.outerIndexPtr()[r + 1];
            for (SparseMatrix::InnerIterator it(k, r); it; ++it) {
                while (p < p_end && pattern_.innerIndexPtr()[p] < it.col()) ++p;
                entries_[g].push_back({p, it.value()});
            }
        }
    }
}

SparseMatrix KAssembler::assemble(const Eigen::Ref<const Eigen::VectorXd> &amplitudes) const {
    if (static_cast<std::size_t>(amplitudes.size()) != entries_.size()) {
        throw DimensionError("amplitude vector has length " + std::to_string(amplitudes.size()) + ", expected " +
                             std::to_string(entries_.size()));
    }
    SparseMatrix k = pattern_;
    double *values = k.valuePtr();
    for (std::size_t g = 0; g < entries_.size(); ++g) {
        const double h = amplitudes[static_cast<Eigen::Index>(g)];
        if (h == 0.0) continue;
        for (const auto &e : entries_[g]) values[e.position] += h * e.value;
    }
    return k;
}

SparseMatrix assemble_k(const StructureConstants &sc, const Eigen::VectorXd &amplitudes) {
    return KAssembler(sc).assemble(amplitudes);
}

BinPropagators::BinPropagators(std::shared_ptr<const KAssembler> assembler, const PulseSchedule &schedule,
                               const PropagationOptions &options)
    : assembler_(std::move(assembler)), options_(options) {
    schedule.validate(assembler_->num_generators());
    if (options_.substeps < 1) throw ConfigError("substeps must be >= 1");
    const bool dense = assembler_->dim() < options_.dense_threshold;
    generators_.reserve(schedule.bins());
    for (std::size_t l = 0; l < schedule.bins(); ++l) {
        SparseMatrix k = assembler_->assemble(schedule.amplitudes.row(static_cast<Eigen::Index>(l)).transpose());
        k *= schedule.dt;
        if (dense) dense_.push_back(expm_dense(Eigen::MatrixXd(k)));
        generators_.push_back(std::move(k));
    }
}

BinPropagators::BinPropagators(const StructureConstants &sc, const PulseSchedule &schedule,
                               const PropagationOptions &options)
    : BinPropagators(std::make_shared<KAssembler>(sc), schedule, options) {}

Eigen::VectorXd BinPropagators::apply(std::size_t bin, const Eigen::VectorXd &v, bool transpose) const {
    if (static_cast<std::size_t>(v.size()) != assembler_->dim()) {
        throw DimensionError("vector length " + std::to_string(v.size()) + " != dimension " +
                             std::to_string(assembler_->dim()));
    }
    if (!dense_.empty()) {
        return transpose ? Eigen::VectorXd(dense_[bin].transpose() * v) : Eigen::VectorXd(dense_[bin] * v);
    }
    const double step = (transpose ? -1.0 : 1.0) / options_.substeps;
    Eigen::VectorXd x = v;
    for (int s = 0; s < options_.substeps; ++s) {
        ExpvStats stats;
        x = expv(step, generators_[bin], x, options_.expv, &stats);
        if (!stats.converged) {
            throw IntegratorError("Krylov exponential did not reach tolerance " + std::to_string(options_.expv.tol),
                                  bin);
        }
    }
    return x;
}

Eigen::VectorXd exp_action(const SparseMatrix &k, double t, const Eigen::VectorXd &v, const PropagationOptions &options) {
    if (k.rows() != v.size()) throw DimensionError("exp_action: vector length does not match the matrix");
    if (static_cast<std::size_t>(k.rows()) < options.dense_threshold) return expm_dense(Eigen::MatrixXd(k), t) * v;
    ExpvStats stats;
    Eigen::VectorXd out = expv(t, k, v, options.expv, &stats);
    if (!stats.converged) throw IntegratorError("Krylov exponential did not reach tolerance", 0);
    return out;
}

std::vector<Eigen::VectorXd> forward_cache(const BinPropagators &props, const Eigen::VectorXd &a0) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(props.bins() + 1);
    out.push_back(a0);
    for (std::size_t l = 0; l < props.bins(); ++l) out.push_back(props.apply(l, out.back()));
    return out;
}

std::vector<Eigen::VectorXd> backward_cache(const BinPropagators &props, const Eigen::VectorXd &target) {
    std::vector<Eigen::VectorXd> out(props.bins() + 1);
    out[props.bins()] = target;
    for (std::size_t l = props.bins(); l-- > 0;) out[l] = props.apply(l, out[l + 1], true);
    return out;
}

Eigen::VectorXd propagate(const StructureConstants &sc, const PulseSchedule &schedule, const Eigen::VectorXd &a0,
                          const PropagationOptions &options) {
    BinPropagators props(sc, schedule, options);
    Eigen::VectorXd a = a0;
    for (std::size_t l = 0; l < props.bins(); ++l) a = props.apply(l, a);
    return a;
}

std::vector<Eigen::VectorXd> propagate_with_cache(const StructureConstants &sc, const PulseSchedule &schedule,
                                                  const Eigen::VectorXd &v, bool adjoint,
                                                  const PropagationOptions &options) {
    BinPropagators props(sc, schedule, options);
    return adjoint ? backward_cache(props, v) : forward_cache(props, v);
}

}  // namespace lieopt
