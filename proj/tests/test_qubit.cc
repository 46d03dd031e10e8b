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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gravcat/qubit.h"

namespace gravcat::qubit {
namespace {

double max_abs(const Matrix2& m) { return m.cwiseAbs().maxCoeff(); }

TunnelingParams tp(double nu, double chi) {
    TunnelingParams p;
    p.nu = nu;
    p.chi = chi;
    return p;
}

const Region kRegions[] = {Region::kPlus, Region::kMinus};

TEST(Qubit, ParamsValidation) {
    EXPECT_THROW(tp(-1.0, 0.0).validate(), std::invalid_argument);
    const auto p = TunnelingParams::FromStepAngle(0.01, 0.02, 0.3);
    EXPECT_NEAR(p.nu, 1.0, 1e-15);
    EXPECT_NO_THROW(p.validate());
    TunnelingParams bad = p;
    bad.nu = 1.0 + 1e-9;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Qubit, StateValidationAndDerivedParameters) {
    EXPECT_THROW(G2SState(1.0, 0.1), std::invalid_argument);
    const G2SState s(Complex(0.6, 0.0), Complex(0.0, 0.8));
    EXPECT_NEAR(s.delta(), 0.36 - 0.64, 1e-15);
    const double chi = 0.7;
    const Complex bg = 2.0 * std::conj(s.c_plus()) * s.c_minus() * std::exp(kI * chi);
    EXPECT_NEAR(s.beta(chi), bg.real(), 1e-15);
    EXPECT_NEAR(s.gamma(chi), bg.imag(), 1e-15);
    EXPECT_LE(s.delta() * s.delta() + s.beta(chi) * s.beta(chi) + s.gamma(chi) * s.gamma(chi), 1.0 + 1e-12);
}

TEST(Qubit, Hamiltonian) {
    Matrix2 sx;
    sx << 0.0, 1.0, 1.0, 0.0;
    EXPECT_LT(max_abs(g2s_hamiltonian(tp(1.0, 0.0)) - sx), 1e-16);
    EXPECT_EQ(max_abs(g2s_hamiltonian(tp(0.0, 1.3))), 0.0);
    Eigen::SelfAdjointEigenSolver<Matrix2> es(g2s_hamiltonian(tp(1.0, kPi / 2)));
    EXPECT_NEAR(es.eigenvalues()(0), -1.0, 1e-14);
    EXPECT_NEAR(es.eigenvalues()(1), 1.0, 1e-14);
}

TEST(Qubit, PropagatorExamples) {
    EXPECT_LT(max_abs(g2s_propagator(tp(2.0, 0.4), 0.0) - Matrix2::Identity()), 1e-16);
    Matrix2 anti;
    anti << 0.0, 1.0, -1.0, 0.0;
    EXPECT_LT(max_abs(g2s_propagator(tp(1.0, 0.0), kPi) - anti), 1e-15);
    const auto p = tp(2.0, 0.4);
    EXPECT_LT(max_abs(g2s_propagator(p, 0.3) * g2s_propagator(p, 0.7) - g2s_propagator(p, 1.0)), 1e-12);
}

TEST(Qubit, PropagatorUnitary) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int k = 0; k < 100; ++k) {
        const Matrix2 U = g2s_propagator(tp(u(gen), u(gen)), u(gen));
        EXPECT_LT(max_abs(U.adjoint() * U - Matrix2::Identity()), 1e-12);
    }
}

TEST(Qubit, ProjectorAlgebra) {
    const auto p = tp(1.3, 0.8);
    EXPECT_LT(max_abs(heisenberg_projector(Region::kPlus, p, 0.0) - Matrix2(Eigen::Vector2cd(1.0, 0.0).asDiagonal())),
              1e-16);
    for (double t : {0.0, 0.4, 2.2, 7.0}) {
        const Matrix2 s = sign_operator(p, t);
        EXPECT_LT(max_abs(s * s - Matrix2::Identity()), 1e-12);
        Matrix2 sum = Matrix2::Zero();
        for (Region a : kRegions) {
            const Matrix2 P = heisenberg_projector(a, p, t);
            EXPECT_LT(max_abs(P * P - P), 1e-12);
            EXPECT_LT(max_abs(P - P.adjoint()), 1e-15);
            EXPECT_NEAR(P.trace().real(), 1.0, 1e-12);
            sum += P;
        }
        EXPECT_LT(max_abs(sum - Matrix2::Identity()), 1e-15);
    }
}

TEST(Qubit, MeanDensity) {
    const SmearedDensityParams d{2.0, 0.5};
    const double unit = d.unit();
    EXPECT_NEAR(g2s_mean_density(G2SState::Plus(), d, Region::kPlus, tp(1.0, 0.0), 0.0), unit, 1e-12);
    const double r = 1.0 / std::sqrt(2.0);
    const G2SState beta_one(r, r);  // delta = 0, beta = 1 at chi = 0
    EXPECT_NEAR(g2s_mean_density(beta_one, d, Region::kPlus, tp(1.0, 0.0), kPi / 2), unit, 1e-12);

    std::mt19937_64 gen(5);
    std::normal_distribution<double> nd;
    for (int k = 0; k < 20; ++k) {
        Eigen::Vector2cd v(Complex(nd(gen), nd(gen)), Complex(nd(gen), nd(gen)));
        v.normalize();
        const G2SState s(v(0), v(1));
        const auto p = tp(std::abs(nd(gen)), nd(gen));
        const double t = std::abs(nd(gen)) * 3.0;
        double total = 0.0;
        for (Region a : kRegions) {
            const double m = g2s_mean_density(s, d, a, p, t);
            const double oracle = (s.density_matrix() * heisenberg_projector(a, p, t)).trace().real() * unit;
            EXPECT_NEAR(m, oracle, 1e-12);
            total += m;
        }
        EXPECT_NEAR(total, unit, 1e-12);
    }
}

TEST(Qubit, QuantumCorrelatorExamples) {
    const SmearedDensityParams d{1.0, 1.0};
    const auto frozen = tp(0.0, 0.0);
    EXPECT_NEAR(std::abs(g2s_two_time_quantum_corr(G2SState::Plus(), d, Region::kPlus, Region::kPlus, frozen, 0.2,
                                                   0.9) -
                         1.0),
                0.0, 1e-15);
    EXPECT_NEAR(std::abs(g2s_two_time_quantum_corr(G2SState::Plus(), d, Region::kPlus, Region::kMinus, frozen, 0.2,
                                                   0.9)),
                0.0, 1e-15);
    const G2SState s(Complex(0.6, 0.0), Complex(0.0, 0.8));
    EXPECT_EQ(g2s_two_time_quantum_corr(s, d, Region::kMinus, Region::kMinus, tp(1.0, 0.2), 0.5, 0.5).imag(), 0.0);
    EXPECT_THROW(g2s_two_time_quantum_corr(s, d, Region::kPlus, Region::kPlus, tp(1.0, 0.2), 1.0, 0.5),
                 std::invalid_argument);
    EXPECT_THROW(g2s_two_time_statistical_corr(s, d, Region::kPlus, Region::kPlus, tp(1.0, 0.2), 1.0, 0.5),
                 std::invalid_argument);
}

TEST(Qubit, CorrelatorsMatchOperatorProducts) {
    std::mt19937_64 gen(9);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(0.0, 4.0);
    for (int k = 0; k < 20; ++k) {
        Eigen::Vector2cd v(Complex(nd(gen), nd(gen)), Complex(nd(gen), nd(gen)));
        v.normalize();
        const G2SState s(v(0), v(1));
        const SmearedDensityParams d{0.5 + ud(gen), 0.5 + 0.25 * ud(gen)};
        const auto p = tp(ud(gen), ud(gen));
        const double t1 = ud(gen);
        const double t2 = t1 + ud(gen);
        const double u2 = d.unit() * d.unit();
        const Matrix2 rho = s.density_matrix();
        for (Region a1 : kRegions) {
            double marginal = 0.0;
            for (Region a2 : kRegions) {
                const Matrix2 P1 = heisenberg_projector(a1, p, t1);
                const Matrix2 P2 = heisenberg_projector(a2, p, t2);
                const Complex q_oracle = u2 * (v.adjoint() * P2 * P1 * v)(0, 0);
                const Complex q = g2s_two_time_quantum_corr(s, d, a1, a2, p, t1, t2);
                EXPECT_LT(std::abs(q - q_oracle), 1e-12 * u2);
                const double sgn = sign(a1) * sign(a2);
                EXPECT_NEAR(q.imag(), -0.25 * u2 * s.gamma(p.chi) * sgn * std::sin(p.nu * (t2 - t1)), 1e-12 * u2);

                // Sequential projective readings: P(a1, a2) = tr(P2 P1 rho P1).
                const double born = (P2 * P1 * rho * P1).trace().real();
                const double st = g2s_two_time_statistical_corr(s, d, a1, a2, p, t1, t2);
                EXPECT_NEAR(st, u2 * born, 1e-12 * u2);
                marginal += st;
            }
            EXPECT_NEAR(marginal, d.unit() * g2s_mean_density(s, d, a1, p, t1), 1e-12 * u2);
        }
    }
}

TEST(Qubit, StatisticalCorrelatorExamples) {
    const SmearedDensityParams d{1.0, 1.0};
    EXPECT_NEAR(g2s_two_time_statistical_corr(G2SState::Plus(), d, Region::kPlus, Region::kPlus, tp(0.0, 0.0), 0.1,
                                              2.0),
                1.0, 1e-15);
    EXPECT_NEAR(g2s_two_time_statistical_corr(G2SState::Plus(), d, Region::kPlus, Region::kPlus, tp(1.0, 0.0),
                                              kPi / 2, kPi),
                0.25, 1e-12);
}

}  // namespace
}  // namespace gravcat::qubit
