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

#ifndef GRAVCAT_FOCK_H
#define GRAVCAT_FOCK_H

#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "gravcat/common.h"

namespace gravcat::fock {

/// Oscillator Hilbert space truncated to the number states |0>..|dim-1>.
class FockSpace {
  public:
    explicit FockSpace(int dim);

    int dim() const { return dim_; }

    friend bool operator==(const FockSpace&, const FockSpace&) = default;

  private:
    int dim_;
};

struct FockVector {
    FockSpace space;
    Eigen::VectorXcd amplitudes;

    FockVector(FockSpace s, Eigen::VectorXcd a);

    double norm() const { return amplitudes.norm(); }
    Complex inner(const FockVector& other) const;  // <this|other>
};

struct FockOperator {
    FockSpace space;
    Eigen::MatrixXcd matrix;

    FockOperator(FockSpace s, Eigen::MatrixXcd m);

    FockVector apply(const FockVector& v) const;
    FockOperator adjoint() const;
    FockOperator operator*(const FockOperator& other) const;
};

/// Returns (a, a_dagger) with <n-1|a|n> = sqrt(n).
std::pair<FockOperator, FockOperator> ladder_operators(const FockSpace& space);

FockOperator number_operator(const FockSpace& space);
FockOperator identity(const FockSpace& space);

/// exp(scale * op) by scaling and squaring.
FockOperator matrix_exponential(const FockOperator& op, Complex scale);

/// exp(w a_dagger - conj(w) a) on the truncated space.
FockOperator displacement(const FockSpace& space, Complex w);

/// Free rotation exp(-i phase n), diagonal.
FockOperator free_rotation(const FockSpace& space, double phase);

/// Set when the displaced vacuum leaks more than 1e-6 amplitude into the last
/// retained level, meaning the cutoff distorts D(w).
std::optional<Warning> truncation_warning(const FockSpace& space, Complex w);

/// Rule of thumb for adequate truncation: |w|^2 <= dim/4.
bool truncation_adequate(const FockSpace& space, Complex w);

FockVector number_state(const FockSpace& space, int n);
FockVector coherent_state(const FockSpace& space, Complex zeta);

}  // namespace gravcat::fock

#endif  // GRAVCAT_FOCK_H
