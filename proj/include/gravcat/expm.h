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

#ifndef GRAVCAT_EXPM_H
#define GRAVCAT_EXPM_H

#include <Eigen/Dense>

namespace gravcat {

/// Dense complex matrix exponential by scaling and squaring with diagonal
/// Padé approximants of degree 3, 5, 7, 9 or 13, chosen from the 1-norm so
/// that the backward error stays at double-precision unit roundoff.
///
/// Throws std::overflow_error for non-finite input or norms so large that the
/// squaring phase cannot produce a finite result.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

}  // namespace gravcat

#endif  // GRAVCAT_EXPM_H
