// Copyright 2026 The Gravcat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gravcat/expm.h"

#include <array>
#include <cmath>
#include <stdexcept>

namespace gravcat {
namespace {

using Eigen::MatrixXcd;

// Largest 1-norms for which the degree-m Padé approximant has backward error
// below 2^-53 (Higham, SIAM J. Matrix Anal. Appl. 26, 2005).
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                           30270240.0,    2162160.0,    110880.0,     3960.0,
                                           90.0,          1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

double one_norm(const MatrixXcd& a) {
    return a.cwiseAbs().colwise().sum().maxCoeff();
}

MatrixXcd solve_pade(const MatrixXcd& u, const MatrixXcd& v) {
    return (v - u).partialPivLu().solve(v + u);
}

template <std::size_t N>
MatrixXcd pade_low_degree(const MatrixXcd& a, const std::array<double, N>& b) {
    const Eigen::Index n = a.rows();
    const MatrixXcd ident = MatrixXcd::Identity(n, n);
    const MatrixXcd a2 = a * a;
    MatrixXcd power = ident;
    MatrixXcd odd = MatrixXcd::Zero(n, n);
    MatrixXcd even = MatrixXcd::Zero(n, n);
    for (std::size_t k = 0; k + 1 < N; k += 2) {
        even += b[k] * power;
        odd += b[k + 1] * power;
        power = power * a2;
    }
    return solve_pade(a * odd, even);
}

MatrixXcd pade13(const MatrixXcd& a) {
    const Eigen::Index n = a.rows();
    const auto& b = kPade13;
    const MatrixXcd ident = MatrixXcd::Identity(n, n);
    const MatrixXcd a2 = a * a;
    const MatrixXcd a4 = a2 * a2;
    const MatrixXcd a6 = a4 * a2;
    const MatrixXcd u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                              b[3] * a2 + b[1] * ident;
    const MatrixXcd u = a * u_inner;
    const MatrixXcd v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                        b[2] * a2 + b[0] * ident;
    return solve_pade(u, v);
}

}  // namespace

MatrixXcd expm(const MatrixXcd& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("expm: matrix must be square");
    }
    if (!a.allFinite()) {
        throw std::overflow_error("expm: matrix has non-finite entries");
    }
    const Eigen::Index n = a.rows();
    if (n == 0) {
        return a;
    }
    const double norm = one_norm(a);
    if (norm <= kTheta3) {
        return pade_low_degree(a, kPade3);
    }
    if (norm <= kTheta5) {
        return pade_low_degree(a, kPade5);
    }
    if (norm <= kTheta7) {
        return pade_low_degree(a, kPade7);
    }
    if (norm <= kTheta9) {
        return pade_low_degree(a, kPade9);
    }
    const int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
    if (squarings > 1000) {
        throw std::overflow_error("expm: norm too large for scaling and squaring");
    }
    MatrixXcd result = pade13(a * std::ldexp(1.0, -squarings));
    for (int k = 0; k < squarings; ++k) {
        result = result * result;
    }
    if (!result.allFinite()) {
        throw std::overflow_error("expm: result overflowed");
    }
    return result;
}

}  // namespace gravcat
