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

// Test-only dense reference built directly from Kronecker products of 2x2
// matrices. It shares no code with the library's symbolic or dense paths.

#ifndef LIEOPT_TESTS_DENSE_ORACLE_HPP
#define LIEOPT_TESTS_DENSE_ORACLE_HPP

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat pauli2(char c) {
    Mat m(2, 2);
    const cd i(0, 1);
    switch (c) {
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, -i, i, 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: m << 1, 0, 0, 1; break;
    }
    return m;
}

inline Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    return out;
}

/// Leftmost character is the leftmost Kronecker factor.
inline Mat dense_label(const std::string &label) {
    Mat m = Mat::Identity(1, 1);
    for (char c : label) m = kron(m, pauli2(c));
    return m;
}

/// Sum of (coefficient, label) pairs.
inline Mat dense_sum(const std::vector<std::pair<double, std::string>> &terms, int n) {
    Mat m = Mat::Zero(1 << n, 1 << n);
    for (const auto &[c, l] : terms) m += c * dense_label(l);
    return m;
}

/// All 4^n labels in a fixed order.
inline std::vector<std::string> all_labels(int n) {
    std::vector<std::string> out{""};
    for (int k = 0; k < n; ++k) {
        std::vector<std::string> next;
        for (const auto &s : out)
            for (char c : std::string("IXYZ")) next.push_back(s + c);
        out.swap(next);
    }
    return out;
}

inline cd normalized_trace(const Mat &a, const Mat &b) { return (a * b).trace() / static_cast<double>(a.rows()); }

/// Matrix exponential of -i t H for Hermitian H via eigen-decomposition.
inline Mat expi(const Mat &h, double t) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    Eigen::VectorXcd phases = (es.eigenvalues().cast<cd>() * cd(0, -t)).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace oracle

#endif
