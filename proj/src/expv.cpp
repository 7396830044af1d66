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

#include "lieopt/expv.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace lieopt {

namespace {

using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// exp(t Hbar) e_1 where Hbar is the (m+1)x(m+1) Lanczos matrix: the skew
// tridiagonal H_m bordered by the single entry Hbar(m, m-1) = beta[m-1]. The
// first m entries equal exp(t H_m) e_1 and the last one is the a posteriori
// error estimate of the Krylov approximation.
Eigen::VectorXd bordered_exp_first_column(const std::vector<double> &beta, int m, double t) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (int j = 0; j + 1 < m; ++j) {
        h(j + 1, j) = beta[j];
        h(j, j + 1) = -beta[j];
    }
    h(m, m - 1) = beta[m - 1];
    Eigen::MatrixXd e = (t * h).exp();
    return e.col(0);
}

Eigen::VectorXd small_exp_first_column(const std::vector<double> &beta, int m, double t) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j + 1 < m; ++j) {
        h(j + 1, j) = beta[j];
        h(j, j + 1) = -beta[j];
    }
    Eigen::MatrixXd e = (t * h).exp();
    return e.col(0);
}

// One Krylov step over the full interval t. Returns false if the error
// estimate exceeds tol * |v|.
bool krylov_step(double t, const Sparse &A, const Eigen::VectorXd &v, const ExpvOptions &opt, Eigen::VectorXd &out,
                 ExpvStats &stats) {
    const double norm_v = v.norm();
    if (norm_v == 0.0 || t == 0.0) {
        out = v;
        return true;
    }
    const Eigen::Index d = v.size();
    const int cap = static_cast<int>(std::min<Eigen::Index>(opt.max_krylov, d));
    Eigen::MatrixXd basis(d, cap + 1);
    std::vector<double> beta;
    beta.reserve(cap);
    basis.col(0) = v / norm_v;
    // Scale for detecting an invariant subspace.
    const double breakdown = 1e-14 * std::max(1.0, std::abs(t));
    int next_check = std::min(cap, 6);
    for (int j = 0; j < cap; ++j) {
        Eigen::VectorXd w = A * basis.col(j);
        ++stats.matvecs;
        // Two passes of classical Gram-Schmidt against every previous vector.
        for (int pass = 0; pass < 2; ++pass) {
            Eigen::VectorXd coeffs = basis.leftCols(j + 1).transpose() * w;
            w.noalias() -= basis.leftCols(j + 1) * coeffs;
        }
        const double b = w.norm();
        const int m = j + 1;
        if (b * std::abs(t) < breakdown) {
            out = norm_v * (basis.leftCols(m) * small_exp_first_column(beta, m, t));
            return true;
        }
        beta.push_back(b);
        basis.col(j + 1) = w / b;
        if (m == next_check || m == cap) {
            Eigen::VectorXd y = bordered_exp_first_column(beta, m, t);
            const double estimate = std::abs(y(m));
            if (estimate <= opt.tol || m == cap) {
                out = norm_v * (basis.leftCols(m) * y.head(m));
                return estimate <= opt.tol;
            }
            next_check = std::min(cap, m + 6);
        }
    }
    return false;
}

}  // namespace

Eigen::VectorXd expv(double t, const Sparse &A, const Eigen::VectorXd &v, const ExpvOptions &options,
                     ExpvStats *stats_out) {
    ExpvStats stats;
    Eigen::VectorXd result = v;
    int pieces = 1;
    for (int halving = 0;; ++halving) {
        Eigen::VectorXd x = v;
        bool ok = true;
        const double h = t / pieces;
        for (int s = 0; s < pieces; ++s) {
            Eigen::VectorXd y;
            ok = krylov_step(h, A, x, options, y, stats) && ok;
            if (!ok && halving < options.max_halvings) break;
            x.swap(y);
        }
        stats.substeps = pieces;
        if (ok || halving >= options.max_halvings) {
            stats.converged = ok;
            result.swap(x);
            break;
        }
        pieces *= 2;
    }
    if (stats_out) *stats_out = stats;
    return result;
}

Eigen::MatrixXd expm_dense(const Eigen::MatrixXd &A, double t) {
    Eigen::MatrixXd scaled = t * A;
    return scaled.exp();
}

}  // namespace lieopt
