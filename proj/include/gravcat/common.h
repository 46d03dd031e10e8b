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

#ifndef GRAVCAT_COMMON_H
#define GRAVCAT_COMMON_H

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gravcat {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Raised when parameters fall outside the regime where a numerical
/// representation is adequate (Fock truncation, grid aliasing, step size).
class RegimeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Non-fatal diagnostic attached to a result.
struct Warning {
    std::string code;
    std::string message;
};

/// Outcome label of the two-region measurement; the value is the sign a = ±1.
enum class Region : int { kPlus = 1, kMinus = -1 };

constexpr int sign(Region a) { return static_cast<int>(a); }

inline Region region_from_sign(int a) {
    if (a == 1) {
        return Region::kPlus;
    }
    if (a == -1) {
        return Region::kMinus;
    }
    throw std::invalid_argument("region sign must be +1 or -1, got " + std::to_string(a));
}

}  // namespace gravcat

#endif  // GRAVCAT_COMMON_H
