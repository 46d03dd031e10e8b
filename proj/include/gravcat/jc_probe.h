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

#ifndef GRAVCAT_JC_PROBE_H
#define GRAVCAT_JC_PROBE_H

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gravcat/common.h"
#include "gravcat/fock.h"

namespace gravcat::jc {

/// Qubit-oscillator parameters with chi fixed to 0. Composite matrices are
/// 2D x 2D with index q*D + n; q = 0 is the |+> block.
struct JcParams {
    double nu = 0.0;
    double omega = 1.0;
    double g = 0.0;
    std::optional<double> m0;
    std::optional<double> f0;

    /// Derives g = -f0 / sqrt(2 m0 omega).
    static JcParams FromProbe(double nu, double omega, double f0, double m0);

    void validate() const;

    double zeta0() const { return -g / omega; }
    bool deep_strong() const { return std::abs(g) > omega; }
    /// f0 / (m0 omega^2); needs the probe parameters.
    double x0() const;
};

/// g = -f0 / sqrt(2 m0 omega).
double jc_coupling(double f0, double m0, double omega);

struct CompositeState {
    fock::FockVector up;
    fock::FockVector down;

    static CompositeState FromVector(const fock::FockSpace& space, const Eigen::VectorXcd& v);
    static CompositeState Product(Complex c_plus, Complex c_minus, const fock::FockVector& osc);

    const fock::FockSpace& space() const { return up.space; }
    Eigen::VectorXcd vector() const;
    double norm() const;
};

/// nu sigma_1 + omega n + g sigma_3 (a + a^dagger).
Eigen::MatrixXcd total_hamiltonian(const JcParams& p, const fock::FockSpace& space);

/// Same without the tunneling term.
Eigen::MatrixXcd free_hamiltonian(const JcParams& p, const fock::FockSpace& space);

/// Closed-form exp(-i H0 t): e^{i g^2 t / omega} diag(D(zeta0) R D(-zeta0), D(-zeta0) R D(zeta0)),
/// with R = exp(-i omega n t).
Eigen::MatrixXcd adiabatic_propagator(const JcParams& p, const fock::FockSpace& space, double t);

/// zeta(t) = -(g/omega)(1 - e^{-i omega t}).
Complex zeta_path(const JcParams& p, double t);

/// Closed-form state from (c_plus|+> + c_minus|->) x |0>.
CompositeState evolved_cat(Complex c_plus, Complex c_minus, const JcParams& p,
                           const fock::FockSpace& space, double t);

/// Partial trace over the qubit.
Eigen::MatrixXcd reduced_oscillator_state(const CompositeState& state);

/// The reduced state with the interference terms as printed (the undefined
/// coefficient read as c_plus* c_minus). Comparison artifact only.
Eigen::MatrixXcd printed_reduced_state(Complex c_plus, Complex c_minus, Complex zeta,
                                       const fock::FockSpace& space);

double purity(const Eigen::MatrixXcd& rho);

struct Distinguishability {
    double overlap = 1.0;  // e^{-4 |zeta0|^2}
    bool probe_ok = false;
    double threshold = 1e-2;
    std::optional<double> omega_cubed;
    std::optional<double> force_scale;  // (f0/m0)^2 m0
};

Distinguishability distinguishability(const JcParams& p, double threshold = 1e-2);

struct PerturbativePropagator {
    Eigen::MatrixXcd matrix;  // O_t in the interaction picture
    bool weak_tunneling = false;
    bool long_time = false;
    std::vector<Warning> warnings;
};

/// O_t = [[cos nu t, -i sin nu t D(2 zeta0)], [-i sin nu t D(-2 zeta0), cos nu t]].
PerturbativePropagator perturbative_propagator(const JcParams& p, const fock::FockSpace& space,
                                               double t);

/// exp(-i H0 t) O_t.
Eigen::MatrixXcd perturbative_full_propagator(const JcParams& p, const fock::FockSpace& space,
                                              double t);

/// sin^2(nu t).
double rabi_probability(const JcParams& p, double t);

/// |zeta0, +> for kPlus, |-zeta0, -> for kMinus.
CompositeState stationary_state(const JcParams& p, const fock::FockSpace& space, Region a);

/// || exp(-i H0 t)|s> - e^{i g^2 t/omega}|s> || with exp(-i H0 t) from the
/// truncated matrix exponential.
double stationary_state_check(const JcParams& p, const fock::FockSpace& space, double t,
                              Region a);

/// Fixed-step exact propagation of the full Hamiltonian. Owns its state.
class PropagationSession {
  public:
    /// Throws RegimeError when ||H||_1 dt > 0.1.
    PropagationSession(const JcParams& p, const fock::FockSpace& space,
                       const CompositeState& initial, double dt);

    /// Applies the step propagator `count` times. Long advances use a cached
    /// binary power of the step propagator rather than `count` products.
    void step(long long count = 1);
    double time() const { return dt_ * static_cast<double>(steps_); }
    CompositeState state() const;
    const Eigen::VectorXcd& vector() const { return psi_; }
    double energy() const;

  private:
    fock::FockSpace space_;
    Eigen::MatrixXcd hamiltonian_;
    Eigen::MatrixXcd step_;
    Eigen::VectorXcd psi_;
    long long cached_count_ = 0;
    Eigen::MatrixXcd cached_power_;
    double dt_;
    long long steps_ = 0;
};

CompositeState exact_propagate(const JcParams& p, const fock::FockSpace& space,
                               const CompositeState& state, double t, long long steps);

/// Smallest step count with ||H||_1 t / steps <= 0.1.
long long minimum_steps(const JcParams& p, const fock::FockSpace& space, double t);

/// S_t = D(zeta0) e^{i omega n t} D(-2 zeta0) e^{-i omega n t} D(zeta0).
Eigen::MatrixXcd interaction_s_operator(const JcParams& p, const fock::FockSpace& space,
                                        double t);

/// nu [[0, S_t], [S_t^dagger, 0]].
Eigen::MatrixXcd interaction_picture_potential(const JcParams& p, const fock::FockSpace& space,
                                               double t);

/// (1/t) int_0^t S(s) ds by the trapezoid rule on `nodes` points.
Eigen::MatrixXcd time_averaged_s(const JcParams& p, const fock::FockSpace& space, double t,
                                 int nodes);

}  // namespace gravcat::jc

#endif  // GRAVCAT_JC_PROBE_H
