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

#include "gravcat/jc_probe.h"

#include <cmath>
#include <stdexcept>

#include "gravcat/expm.h"

namespace gravcat::jc {
namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

MatrixXcd block_diag(const MatrixXcd& upper, const MatrixXcd& lower) {
    const Eigen::Index d = upper.rows();
    MatrixXcd out = MatrixXcd::Zero(2 * d, 2 * d);
    out.topLeftCorner(d, d) = upper;
    out.bottomRightCorner(d, d) = lower;
    return out;
}

double one_norm(const MatrixXcd& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

JcParams JcParams::FromProbe(double nu, double omega, double f0, double m0) {
    JcParams p;
    p.nu = nu;
    p.omega = omega;
    p.g = jc_coupling(f0, m0, omega);
    p.m0 = m0;
    p.f0 = f0;
    p.validate();
    return p;
}

void JcParams::validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw std::invalid_argument("JcParams: omega must be positive");
    }
    if (!(nu >= 0.0) || !std::isfinite(nu) || !std::isfinite(g)) {
        throw std::invalid_argument("JcParams: nu must be non-negative and g finite");
    }
    if (m0 && !(*m0 > 0.0)) {
        throw std::invalid_argument("JcParams: m0 must be positive");
    }
}

double JcParams::x0() const {
    if (!m0 || !f0) {
        throw std::logic_error("JcParams::x0 needs probe mass and force amplitude");
    }
    return *f0 / (*m0 * omega * omega);
}

double jc_coupling(double f0, double m0, double omega) {
    if (!(m0 > 0.0) || !(omega > 0.0)) {
        throw std::invalid_argument("jc_coupling: m0 and omega must be positive");
    }
    return -f0 / std::sqrt(2.0 * m0 * omega);
}

CompositeState CompositeState::FromVector(const fock::FockSpace& space, const VectorXcd& v) {
    const int d = space.dim();
    if (v.size() != 2 * d) {
        throw std::invalid_argument("CompositeState: vector length must be twice the Fock dimension");
    }
    return CompositeState{fock::FockVector(space, v.head(d)), fock::FockVector(space, v.tail(d))};
}

CompositeState CompositeState::Product(Complex c_plus, Complex c_minus,
                                       const fock::FockVector& osc) {
    return CompositeState{fock::FockVector(osc.space, c_plus * osc.amplitudes),
                          fock::FockVector(osc.space, c_minus * osc.amplitudes)};
}

VectorXcd CompositeState::vector() const {
    VectorXcd v(2 * up.space.dim());
    v << up.amplitudes, down.amplitudes;
    return v;
}

double CompositeState::norm() const {
    return std::sqrt(up.amplitudes.squaredNorm() + down.amplitudes.squaredNorm());
}

MatrixXcd free_hamiltonian(const JcParams& p, const fock::FockSpace& space) {
    const auto [a, ad] = fock::ladder_operators(space);
    const MatrixXcd n = fock::number_operator(space).matrix;
    const MatrixXcd x = a.matrix + ad.matrix;
    return block_diag(p.omega * n + p.g * x, p.omega * n - p.g * x);
}

MatrixXcd total_hamiltonian(const JcParams& p, const fock::FockSpace& space) {
    MatrixXcd h = free_hamiltonian(p, space);
    const int d = space.dim();
    h.topRightCorner(d, d) += p.nu * MatrixXcd::Identity(d, d);
    h.bottomLeftCorner(d, d) += p.nu * MatrixXcd::Identity(d, d);
    return h;
}

MatrixXcd adiabatic_propagator(const JcParams& p, const fock::FockSpace& space, double t) {
    const Complex z0 = p.zeta0();
    const MatrixXcd dp = fock::displacement(space, z0).matrix;
    const MatrixXcd dm = fock::displacement(space, -z0).matrix;
    const MatrixXcd rot = fock::free_rotation(space, p.omega * t).matrix;
    const Complex phase = std::exp(kI * (p.g * p.g * t / p.omega));
    return phase * block_diag(dp * rot * dm, dm * rot * dp);
}

Complex zeta_path(const JcParams& p, double t) {
    return -(p.g / p.omega) * (1.0 - std::exp(-kI * (p.omega * t)));
}

CompositeState evolved_cat(Complex c_plus, Complex c_minus, const JcParams& p,
                           const fock::FockSpace& space, double t) {
    const double r = p.g / p.omega;
    const Complex phase = std::exp(kI * (r * r * (p.omega * t - std::sin(p.omega * t))));
    const Complex z = zeta_path(p, t);
    return CompositeState{
        fock::FockVector(space, phase * c_plus * fock::coherent_state(space, z).amplitudes),
        fock::FockVector(space, phase * c_minus * fock::coherent_state(space, -z).amplitudes)};
}

MatrixXcd reduced_oscillator_state(const CompositeState& state) {
    const VectorXcd& u = state.up.amplitudes;
    const VectorXcd& d = state.down.amplitudes;
    return u * u.adjoint() + d * d.adjoint();
}

MatrixXcd printed_reduced_state(Complex c_plus, Complex c_minus, Complex zeta,
                                const fock::FockSpace& space) {
    const VectorXcd zp = fock::coherent_state(space, zeta).amplitudes;
    const VectorXcd zm = fock::coherent_state(space, -zeta).amplitudes;
    const Complex cross = std::conj(c_plus) * c_minus;
    return std::norm(c_plus) * zp * zp.adjoint() + std::norm(c_minus) * zm * zm.adjoint() +
           cross * zp * zm.adjoint() + cross * zm * zp.adjoint();
}

double purity(const MatrixXcd& rho) { return (rho * rho).trace().real(); }

Distinguishability distinguishability(const JcParams& p, double threshold) {
    Distinguishability out;
    out.threshold = threshold;
    out.overlap = std::exp(-4.0 * std::norm(p.zeta0()));
    out.probe_ok = out.overlap < threshold;
    if (p.m0 && p.f0) {
        out.omega_cubed = p.omega * p.omega * p.omega;
        const double accel = *p.f0 / *p.m0;
        out.force_scale = accel * accel * *p.m0;
    }
    return out;
}

PerturbativePropagator perturbative_propagator(const JcParams& p, const fock::FockSpace& space,
                                               double t) {
    const int d = space.dim();
    const Complex z0 = p.zeta0();
    const double c = std::cos(p.nu * t);
    const double s = std::sin(p.nu * t);
    PerturbativePropagator out;
    out.matrix = MatrixXcd::Zero(2 * d, 2 * d);
    out.matrix.topLeftCorner(d, d) = c * MatrixXcd::Identity(d, d);
    out.matrix.bottomRightCorner(d, d) = c * MatrixXcd::Identity(d, d);
    if (s != 0.0) {
        out.matrix.topRightCorner(d, d) = -kI * s * fock::displacement(space, 2.0 * z0).matrix;
        out.matrix.bottomLeftCorner(d, d) = -kI * s * fock::displacement(space, -2.0 * z0).matrix;
    }
    out.weak_tunneling = p.nu < 0.1 * p.omega;
    out.long_time = p.omega * t > 10.0;
    if (!out.weak_tunneling) {
        out.warnings.push_back({"RegimeViolation", "perturbative propagator needs nu << omega"});
    }
    if (!out.long_time) {
        out.warnings.push_back(
            {"RegimeViolation", "perturbative propagator needs omega t >> 1 for the time average"});
    }
    return out;
}

MatrixXcd perturbative_full_propagator(const JcParams& p, const fock::FockSpace& space,
                                       double t) {
    return adiabatic_propagator(p, space, t) * perturbative_propagator(p, space, t).matrix;
}

double rabi_probability(const JcParams& p, double t) {
    const double s = std::sin(p.nu * t);
    return s * s;
}

CompositeState stationary_state(const JcParams& p, const fock::FockSpace& space, Region a) {
    const Complex z0 = p.zeta0();
    if (a == Region::kPlus) {
        return CompositeState::Product(1.0, 0.0, fock::coherent_state(space, z0));
    }
    return CompositeState::Product(0.0, 1.0, fock::coherent_state(space, -z0));
}

double stationary_state_check(const JcParams& p, const fock::FockSpace& space, double t,
                              Region a) {
    const VectorXcd s = stationary_state(p, space, a).vector();
    const MatrixXcd u = expm(-kI * t * free_hamiltonian(p, space));
    const Complex phase = std::exp(kI * (p.g * p.g * t / p.omega));
    return (u * s - phase * s).norm();
}

PropagationSession::PropagationSession(const JcParams& p, const fock::FockSpace& space,
                                       const CompositeState& initial, double dt)
    : space_(space), hamiltonian_(total_hamiltonian(p, space)), psi_(initial.vector()), dt_(dt) {
    if (!(initial.space() == space)) {
        throw std::invalid_argument("PropagationSession: state lives in a different space");
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("PropagationSession: dt must be positive");
    }
    const double product = one_norm(hamiltonian_) * dt;
    if (product > 0.1) {
        throw RegimeError("exact propagation step too large: ||H||_1 dt = " +
                          std::to_string(product) + " exceeds 0.1");
    }
    step_ = expm(-kI * dt * hamiltonian_);
}

void PropagationSession::step(long long count) {
    if (count < 0) {
        throw std::invalid_argument("PropagationSession::step: negative count");
    }
    if (count > 64) {
        if (cached_count_ != count) {
            MatrixXcd result = MatrixXcd::Identity(step_.rows(), step_.cols());
            MatrixXcd base = step_;
            for (long long e = count; e > 0; e >>= 1) {
                if (e & 1) {
                    result = result * base;
                }
                if (e > 1) {
                    base = base * base;
                }
            }
            cached_power_ = std::move(result);
            cached_count_ = count;
        }
        psi_ = cached_power_ * psi_;
    } else {
        VectorXcd next(psi_.size());
        for (long long k = 0; k < count; ++k) {
            next.noalias() = step_ * psi_;
            psi_.swap(next);
        }
    }
    steps_ += count;
}

CompositeState PropagationSession::state() const {
    return CompositeState::FromVector(space_, psi_);
}

double PropagationSession::energy() const {
    return psi_.dot(hamiltonian_ * psi_).real() / psi_.squaredNorm();
}

long long minimum_steps(const JcParams& p, const fock::FockSpace& space, double t) {
    const double norm = one_norm(total_hamiltonian(p, space));
    return std::max(1LL, static_cast<long long>(std::ceil(norm * std::abs(t) / 0.1)));
}

CompositeState exact_propagate(const JcParams& p, const fock::FockSpace& space,
                               const CompositeState& state, double t, long long steps) {
    if (steps < 1) {
        throw std::invalid_argument("exact_propagate: steps must be positive");
    }
    if (t == 0.0) {
        return state;
    }
    PropagationSession session(p, space, state, t / static_cast<double>(steps));
    session.step(steps);
    return session.state();
}

MatrixXcd interaction_s_operator(const JcParams& p, const fock::FockSpace& space, double t) {
    const Complex z0 = p.zeta0();
    const MatrixXcd d1 = fock::displacement(space, z0).matrix;
    const MatrixXcd d2 = fock::displacement(space, -2.0 * z0).matrix;
    const MatrixXcd rot = fock::free_rotation(space, p.omega * t).matrix;
    return d1 * rot.adjoint() * d2 * rot * d1;
}

MatrixXcd interaction_picture_potential(const JcParams& p, const fock::FockSpace& space,
                                        double t) {
    const int d = space.dim();
    const MatrixXcd s = interaction_s_operator(p, space, t);
    MatrixXcd v = MatrixXcd::Zero(2 * d, 2 * d);
    v.topRightCorner(d, d) = p.nu * s;
    v.bottomLeftCorner(d, d) = p.nu * s.adjoint();
    return v;
}

MatrixXcd time_averaged_s(const JcParams& p, const fock::FockSpace& space, double t, int nodes) {
    if (!(t > 0.0) || nodes < 2) {
        throw std::invalid_argument("time_averaged_s: need t > 0 and at least two nodes");
    }
    const int d = space.dim();
    const Complex z0 = p.zeta0();
    const MatrixXcd inner = fock::displacement(space, -2.0 * z0).matrix;
    // e^{i omega n s} D e^{-i omega n s} only rephases matrix elements, so the
    // quadrature runs elementwise and the outer displacements are applied once.
    MatrixXcd acc = MatrixXcd::Zero(d, d);
    const double h = t / (nodes - 1);
    VectorXcd phase(d);
    for (int k = 0; k < nodes; ++k) {
        const double s = k * h;
        const double w = (k == 0 || k == nodes - 1) ? 0.5 * h : h;
        for (int n = 0; n < d; ++n) {
            phase(n) = std::exp(kI * (p.omega * s * n));
        }
        acc += w * (phase * phase.adjoint()).cwiseProduct(inner);
    }
    const MatrixXcd d1 = fock::displacement(space, z0).matrix;
    return d1 * (acc / t) * d1;
}

}  // namespace gravcat::jc
