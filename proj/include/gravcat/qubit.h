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

#ifndef GRAVCAT_QUBIT_H
#define GRAVCAT_QUBIT_H

#include <optional>

#include <Eigen/Dense>

#include "gravcat/common.h"

namespace gravcat::qubit {

using Matrix2 = Eigen::Matrix2cd;

/// Tunneling between the two minima. When the per-step angle and the
/// stabilization time are both given, nu must equal 2*theta/epsilon.
struct TunnelingParams {
    double nu = 0.0;
    double chi = 0.0;
    std::optional<double> theta;
    std::optional<double> epsilon;

    static TunnelingParams FromStepAngle(double theta, double epsilon, double chi);

    void validate() const;
};

/// Two-level state c_plus|+> + c_minus|->, basis |+> = (1, 0).
class G2SState {
  public:
    G2SState(Complex c_plus, Complex c_minus);

    static G2SState Plus() { return G2SState(1.0, 0.0); }
    static G2SState Minus() { return G2SState(0.0, 1.0); }

    Complex c_plus() const { return c_plus_; }
    Complex c_minus() const { return c_minus_; }

    double delta() const;
    double beta(double chi) const;
    double gamma(double chi) const;

    Eigen::Vector2cd vector() const { return {c_plus_, c_minus_}; }
    Matrix2 density_matrix() const;

  private:
    Complex c_plus_;
    Complex c_minus_;
};

struct SmearedDensityParams {
    double m = 1.0;
    double ell = 1.0;

    void validate() const;
    double unit() const { return m / (ell * ell * ell); }  // m / ell^3
};

Matrix2 pauli_x();
Matrix2 pauli_y();
Matrix2 pauli_z();

/// nu (cos chi sigma_1 + sin chi sigma_2).
Matrix2 g2s_hamiltonian(const TunnelingParams& p);

/// [[cos(nu t/2), sin(nu t/2) e^{i chi}], [-sin(nu t/2) e^{-i chi}, cos(nu t/2)]].
Matrix2 g2s_propagator(const TunnelingParams& p, double t);

/// Heisenberg-picture sign operator: [[cos nu t, sin nu t e^{i chi}], [sin nu t e^{-i chi}, -cos nu t]].
Matrix2 sign_operator(const TunnelingParams& p, double t);

/// (1 + a S_t) / 2.
Matrix2 heisenberg_projector(Region a, const TunnelingParams& p, double t);

/// (m / 2 ell^3) [1 + a (delta cos nu t + beta sin nu t)].
double g2s_mean_density(const G2SState& s, const SmearedDensityParams& d, Region a,
                        const TunnelingParams& p, double t);

/// <mu(a2, t2) mu(a1, t1)> for t1 <= t2. The a1 a2 term carries cos(nu dt) - i gamma sin(nu dt);
/// see the README for the correction to the printed delta prefactor.
Complex g2s_two_time_quantum_corr(const G2SState& s, const SmearedDensityParams& d, Region a1,
                                  Region a2, const TunnelingParams& p, double t1, double t2);

/// Sequential-measurement (Born rule) correlation, (m^2/ell^6) P(a1, t1; a2, t2).
double g2s_two_time_statistical_corr(const G2SState& s, const SmearedDensityParams& d, Region a1,
                                     Region a2, const TunnelingParams& p, double t1, double t2);

}  // namespace gravcat::qubit

#endif  // GRAVCAT_QUBIT_H
