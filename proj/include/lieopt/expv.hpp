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

#ifndef LIEOPT_EXPV_HPP
#define LIEOPT_EXPV_HPP

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace lieopt {

struct ExpvOptions {
    /// Target error relative to the input norm, per application.
    double tol = 1e-12;
    /// Largest Krylov subspace tried before the step is split.
    int max_krylov = 40;
    /// Maximum number of step halvings before giving up.
    int max_halvings = 16;
};

/// Outcome of one exponential-times-vector application.
struct ExpvStats {
    int matvecs = 0;
    int substeps = 0;
    bool converged = true;
};

/// exp(t A) v for real skew-symmetric sparse A.
///
/// Lanczos with full reorthogonalization builds an exactly skew tridiagonal
/// projection, so the result has the norm of `v` to rounding error even when
/// the error estimate is loose. When the estimate misses `tol` at the maximum
/// subspace size the interval is split in halves. `stats->converged` is false
/// if the estimate still fails after `max_halvings` splits.
Eigen::VectorXd expv(double t, const Eigen::SparseMatrix<double, Eigen::RowMajor> &A, const Eigen::VectorXd &v,
                     const ExpvOptions &options = {}, ExpvStats *stats = nullptr);

/// Dense exp(t A) by scaling and squaring.
Eigen::MatrixXd expm_dense(const Eigen::MatrixXd &A, double t = 1.0);

}  // namespace lieopt

#endif
