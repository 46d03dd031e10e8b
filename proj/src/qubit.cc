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

#include "gravcat/qubit.h"

#include <cmath>
#include <stdexcept>

namespace gravcat::qubit {
namespace {

void require_ordered(double t1, double t2) {
    if (!(t1 <= t2)) {
        throw std::invalid_argument("two-time correlator requires t1 <= t2");
    }
}

}  // namespace

TunnelingParams TunnelingParams::FromStepAngle(double theta, double epsilon, double chi) {
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("TunnelingParams: epsilon must be positive");
    }
    TunnelingParams p;
    p.nu = 2.0 * theta / epsilon;
    p.chi = chi;
    p.theta = theta;
    p.epsilon = epsilon;
    p.validate();
    return p;
}

void TunnelingParams::validate() const {
    if (!std::isfinite(nu) || nu < 0.0) {
        throw std::invalid_argument("TunnelingParams: nu must be finite and non-negative");
    }
    if (!std::isfinite(chi)) {
        throw std::invalid_argument("TunnelingParams: chi must be finite");
    }
    if (theta.has_value() != epsilon.has_value()) {
        return;
    }
    if (theta && epsilon) {
        if (!(*epsilon > 0.0)) {
            throw std::invalid_argument("TunnelingParams: epsilon must be positive");
        }
        const double implied = 2.0 * *theta / *epsilon;
        if (std::abs(implied - nu) > 1e-12 * std::max(std::abs(nu), std::abs(implied))) {
            throw std::invalid_argument("TunnelingParams: nu differs from 2 theta / epsilon");
        }
    }
}

G2SState::G2SState(Complex c_plus, Complex c_minus) : c_plus_(c_plus), c_minus_(c_minus) {
    const double norm = std::norm(c_plus) + std::norm(c_minus);
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-12) {
        throw std::invalid_argument("G2SState: |c+|^2 + |c-|^2 must equal 1");
    }
}

double G2SState::delta() const { return std::norm(c_plus_) - std::norm(c_minus_); }

double G2SState::beta(double chi) const {
    return (2.0 * std::conj(c_plus_) * c_minus_ * std::exp(kI * chi)).real();
}

double G2SState::gamma(double chi) const {
    return (2.0 * std::conj(c_plus_) * c_minus_ * std::exp(kI * chi)).imag();
}

Matrix2 G2SState::density_matrix() const {
    const Eigen::Vector2cd v = vector();
    return v * v.adjoint();
}

void SmearedDensityParams::validate() const {
    if (!(m > 0.0) || !(ell > 0.0)) {
        throw std::invalid_argument("SmearedDensityParams: m and ell must be positive");
    }
}

Matrix2 pauli_x() {
    Matrix2 s;
    s << 0.0, 1.0, 1.0, 0.0;
    return s;
}

Matrix2 pauli_y() {
    Matrix2 s;
    s << 0.0, -kI, kI, 0.0;
    return s;
}

Matrix2 pauli_z() {
    Matrix2 s;
    s << 1.0, 0.0, 0.0, -1.0;
    return s;
}

Matrix2 g2s_hamiltonian(const TunnelingParams& p) {
    return p.nu * (std::cos(p.chi) * pauli_x() + std::sin(p.chi) * pauli_y());
}

Matrix2 g2s_propagator(const TunnelingParams& p, double t) {
    const double c = std::cos(0.5 * p.nu * t);
    const double s = std::sin(0.5 * p.nu * t);
    const Complex phase = std::exp(kI * p.chi);
    Matrix2 u;
    u << c, s * phase, -s * std::conj(phase), c;
    return u;
}

Matrix2 sign_operator(const TunnelingParams& p, double t) {
    const double c = std::cos(p.nu * t);
    const double s = std::sin(p.nu * t);
    const Complex phase = std::exp(kI * p.chi);
    Matrix2 op;
    op << c, s * phase, s * std::conj(phase), -c;
    return op;
}

Matrix2 heisenberg_projector(Region a, const TunnelingParams& p, double t) {
    return 0.5 * (Matrix2::Identity() + static_cast<double>(sign(a)) * sign_operator(p, t));
}

double g2s_mean_density(const G2SState& s, const SmearedDensityParams& d, Region a,
                        const TunnelingParams& p, double t) {
    const double x = s.delta() * std::cos(p.nu * t) + s.beta(p.chi) * std::sin(p.nu * t);
    return 0.5 * d.unit() * (1.0 + sign(a) * x);
}

Complex g2s_two_time_quantum_corr(const G2SState& s, const SmearedDensityParams& d, Region a1,
                                  Region a2, const TunnelingParams& p, double t1, double t2) {
    require_ordered(t1, t2);
    const double s1 = sign(a1);
    const double s2 = sign(a2);
    const double delta = s.delta();
    const double beta = s.beta(p.chi);
    const double gamma = s.gamma(p.chi);
    const double lag = p.nu * (t2 - t1);
    const double re = 1.0 + delta * (s1 * std::cos(p.nu * t1) + s2 * std::cos(p.nu * t2)) +
                      beta * (s1 * std::sin(p.nu * t1) + s2 * std::sin(p.nu * t2)) +
                      s1 * s2 * std::cos(lag);
    const double im = -gamma * s1 * s2 * std::sin(lag);
    return 0.25 * d.unit() * d.unit() * Complex(re, im);
}

double g2s_two_time_statistical_corr(const G2SState& s, const SmearedDensityParams& d, Region a1,
                                     Region a2, const TunnelingParams& p, double t1, double t2) {
    require_ordered(t1, t2);
    const double s1 = sign(a1);
    const double s2 = sign(a2);
    const double x = s.delta() * std::cos(p.nu * t1) + s.beta(p.chi) * std::sin(p.nu * t1);
    const double lag = std::cos(p.nu * (t2 - t1));
    return 0.25 * d.unit() * d.unit() * (1.0 + s1 * x + s2 * lag * x + s1 * s2 * lag);
}

}  // namespace gravcat::qubit
