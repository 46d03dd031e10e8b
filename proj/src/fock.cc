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

#include "gravcat/fock.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gravcat/expm.h"

namespace gravcat::fock {

FockSpace::FockSpace(int dim) : dim_(dim) {
    if (dim < 2) {
        throw std::invalid_argument("FockSpace: dimension must be at least 2, got " +
                                    std::to_string(dim));
    }
}

FockVector::FockVector(FockSpace s, Eigen::VectorXcd a) : space(s), amplitudes(std::move(a)) {
    if (amplitudes.size() != space.dim()) {
        throw std::invalid_argument("FockVector: length does not match space dimension");
    }
    if (!amplitudes.allFinite()) {
        throw std::invalid_argument("FockVector: non-finite amplitude");
    }
}

Complex FockVector::inner(const FockVector& other) const {
    if (!(space == other.space)) {
        throw std::invalid_argument("FockVector::inner: spaces differ");
    }
    return amplitudes.dot(other.amplitudes);
}

FockOperator::FockOperator(FockSpace s, Eigen::MatrixXcd m) : space(s), matrix(std::move(m)) {
    if (matrix.rows() != space.dim() || matrix.cols() != space.dim()) {
        throw std::invalid_argument("FockOperator: shape does not match space dimension");
    }
}

FockVector FockOperator::apply(const FockVector& v) const {
    if (!(space == v.space)) {
        throw std::invalid_argument("FockOperator::apply: spaces differ");
    }
    return FockVector(space, matrix * v.amplitudes);
}

FockOperator FockOperator::adjoint() const { return FockOperator(space, matrix.adjoint()); }

FockOperator FockOperator::operator*(const FockOperator& other) const {
    if (!(space == other.space)) {
        throw std::invalid_argument("FockOperator product: spaces differ");
    }
    return FockOperator(space, matrix * other.matrix);
}

std::pair<FockOperator, FockOperator> ladder_operators(const FockSpace& space) {
    const int d = space.dim();
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 1; n < d; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    Eigen::MatrixXcd ad = a.adjoint();
    return {FockOperator(space, std::move(a)), FockOperator(space, std::move(ad))};
}

FockOperator number_operator(const FockSpace& space) {
    const int d = space.dim();
    Eigen::VectorXcd diag(d);
    for (int n = 0; n < d; ++n) {
        diag(n) = static_cast<double>(n);
    }
    return FockOperator(space, diag.asDiagonal().toDenseMatrix());
}

FockOperator identity(const FockSpace& space) {
    return FockOperator(space, Eigen::MatrixXcd::Identity(space.dim(), space.dim()));
}

FockOperator matrix_exponential(const FockOperator& op, Complex scale) {
    return FockOperator(op.space, expm(scale * op.matrix));
}

FockOperator displacement(const FockSpace& space, Complex w) {
    if (w == Complex(0.0)) {
        return identity(space);
    }
    const auto [a, ad] = ladder_operators(space);
    return FockOperator(space, expm(w * ad.matrix - std::conj(w) * a.matrix));
}

FockOperator free_rotation(const FockSpace& space, double phase) {
    const int d = space.dim();
    Eigen::VectorXcd diag(d);
    for (int n = 0; n < d; ++n) {
        diag(n) = std::exp(-kI * (phase * n));
    }
    return FockOperator(space, diag.asDiagonal().toDenseMatrix());
}

std::optional<Warning> truncation_warning(const FockSpace& space, Complex w) {
    const FockOperator disp = displacement(space, w);
    const double tail = std::abs(disp.matrix(space.dim() - 1, 0));
    if (tail > 1e-6) {
        return Warning{"TruncationInadequate",
                       "displaced vacuum has amplitude " + std::to_string(tail) +
                           " on the highest retained level; increase the Fock dimension"};
    }
    return std::nullopt;
}

bool truncation_adequate(const FockSpace& space, Complex w) {
    return std::norm(w) <= space.dim() / 4.0;
}

FockVector number_state(const FockSpace& space, int n) {
    if (n < 0 || n >= space.dim()) {
        throw std::out_of_range("number_state: level outside the truncated space");
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dim());
    v(n) = 1.0;
    return FockVector(space, std::move(v));
}

FockVector coherent_state(const FockSpace& space, Complex zeta) {
    return displacement(space, zeta).apply(number_state(space, 0));
}

}  // namespace gravcat::fock
