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

#include <boost/math/quadrature/gauss.hpp>
#include <gtest/gtest.h>

#include "gravcat/density.h"
#include "gravcat/histories.h"
#include "gravcat/wigner.h"

namespace gravcat::density {
namespace {

template <class F>
auto composite(F f, double a, double b, int panels) {
    using R = decltype(f(a));
    R sum{};
    const double h = (b - a) / panels;
    for (int k = 0; k < panels; ++k) {
        sum += boost::math::quadrature::gauss<double, 20>::integrate(f, a + k * h, a + (k + 1) * h);
    }
    return sum;
}

SeparableState gaussian(double sigma, Vec3 c = Vec3::Zero()) { return GaussianState{sigma, c}.separable(); }

SeparableState cat_along_x(double sigma, double L) {
    CatState cat;
    cat.sigma = sigma;
    cat.L = Vec3(L, 0.0, 0.0);
    return cat.separable();
}

TEST(Density, NewtonianForce) {
    const Vec3 f = newtonian_force(1.0, 1.0, Vec3(1, 0, 0), Vec3::Zero());
    EXPECT_LT((f - Vec3(-1, 0, 0)).norm(), 1e-15);
    const Vec3 R(0.3, -1.2, 2.0);
    const Vec3 x(1.0, 0.5, -0.4);
    EXPECT_LT((newtonian_force(2.0, 5.0, R, x) + newtonian_force(5.0, 2.0, x, R)).norm(), 1e-15);
    EXPECT_NEAR(newtonian_force(1.0, 1.0, 2.0 * R, Vec3::Zero()).norm(),
                0.25 * newtonian_force(1.0, 1.0, R, Vec3::Zero()).norm(), 1e-15);
    EXPECT_THROW(newtonian_force(1.0, 1.0, R, R), std::invalid_argument);
}

TEST(Density, CatNormalization) {
    for (double L : {0.0, 0.5, 2.0, 8.0}) {
        for (auto [cp, cm] : {std::pair<Complex, Complex>{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)},
                              {Complex(0.6, 0.0), Complex(0.0, -0.8)},
                              {Complex(0.6, 0.0), Complex(-0.8, 0.0)}}) {
            CatState cat;
            cat.sigma = 0.7;
            cat.L = Vec3(L, L / 2, 0.0);
            cat.c_plus = cp;
            cat.c_minus = cm;
            EXPECT_NEAR(cat.separable().norm_squared(), 1.0, 1e-12);
            // Independent check of the cross term by quadrature along the cat axis.
            const auto axis = cat.separable().axis[0];
            const double n = composite([&](double x) { return std::norm(axis.value(x)); }, -20.0, 20.0, 40);
            EXPECT_NEAR(n, 1.0, 1e-12);
        }
    }
}

TEST(Density, FreePropagatorModulus) {
    const double m = 1.7;
    for (double dt : {0.3, -1.1, 4.0}) {
        const Complex g = free_propagator(m, Vec3(0.1, 2, -1), 0.5, Vec3(-3, 0.2, 0.4), 0.5 + dt);
        EXPECT_NEAR(std::norm(g), std::pow(m / (2 * kPi * std::abs(dt)), 3), 1e-12);
    }
    EXPECT_THROW(free_propagator(1.0, Vec3::Zero(), 1.0, Vec3::Zero(), 1.0), std::invalid_argument);
}

TEST(Density, FreePropagatorEvolvesGaussian) {
    const double m = 1.0;
    const auto packet = WavePacket1D::Gaussian(1.0, 0.3);
    for (double t : {0.5, 2.0}) {
        for (double x : {-1.0, 0.3, 2.5}) {
            const Complex evolved = composite(
                [&](double xp) { return free_propagator_1d(m, xp, 0.0, x, t) * packet.value(xp); }, -14.0, 14.0, 56);
            EXPECT_LT(std::abs(evolved - packet.value(x, t, m)), 1e-10);
        }
        // Width of |psi(x, t)|^2 against sigma^2 + t^2 / (4 m^2 sigma^2).
        const double var = composite([&](double x) { return (x - 0.3) * (x - 0.3) * std::norm(packet.value(x, t, m)); },
                                     -30.0, 30.0, 60);
        EXPECT_NEAR(var, 1.0 + t * t / 4.0, 1e-8);
    }
}

TEST(Density, PropagatorComposesThroughIntermediateTime) {
    // Nested evolution 0 -> 0.7 -> 1.6 equals direct evolution 0 -> 1.6.
    const double m = 1.3;
    const auto packet = WavePacket1D::Gaussian(0.8, -0.5);
    auto at_mid = [&](double xm) {
        return composite([&](double x0) { return free_propagator_1d(m, x0, 0.0, xm, 0.7) * packet.value(x0); },
                         -12.0, 12.0, 48);
    };
    for (double x : {-1.0, 0.4}) {
        const Complex nested =
            composite([&](double xm) { return free_propagator_1d(m, xm, 0.7, x, 1.6) * at_mid(xm); }, -14.0, 14.0, 28);
        const Complex direct =
            composite([&](double x0) { return free_propagator_1d(m, x0, 0.0, x, 1.6) * packet.value(x0); }, -12.0, 12.0,
                      48);
        EXPECT_LT(std::abs(nested - direct), 1e-6);
        EXPECT_LT(std::abs(direct - packet.value(x, 1.6, m)), 1e-9);
    }
}

TEST(Density, MeanAndNormalization) {
    const double sigma = 0.9;
    const double m = 2.0;
    const auto s = gaussian(sigma, Vec3(0.1, -0.2, 0.3));
    EXPECT_NEAR(density_mean(s, m, Vec3(0.1, -0.2, 0.3), 0.0), m * std::pow(2 * kPi * sigma * sigma, -1.5), 1e-12);
    const auto cat = cat_along_x(0.5, 2.0);
    // Separable state: the 3D integral factorizes into three 1D integrals of |phi|^2.
    const double t = 0.8;
    double total = m;
    for (int a = 0; a < 3; ++a) {
        total *= composite([&](double x) { return std::norm(cat.axis[a].value(x, t, m)); }, -20.0, 20.0, 40);
    }
    EXPECT_NEAR(total, m, 1e-8);
    // And the module's own mean agrees with the separable product pointwise.
    const Vec3 r(0.4, 0.1, -0.2);
    EXPECT_NEAR(density_mean(cat, m, r, t), m * std::norm(cat.value(r, t, m)), 1e-15);
    SeparableState bad = s;
    bad.axis[0].weights = {2.0};
    EXPECT_THROW(density_mean(bad, m, r, t), std::invalid_argument);
}

TEST(Density, CorrelatorSymmetryAndMarginal) {
    const auto s = cat_along_x(0.7, 1.5);
    const double m = 1.0;
    const Vec3 r(0.3, -0.2, 0.5);
    const Vec3 r2(-0.4, 0.6, 0.1);
    const auto a = density_corr(s, m, r, 0.4, r2, 1.3);
    const auto b = density_corr(s, m, r2, 1.3, r, 0.4);
    EXPECT_LT(std::abs(a.value - std::conj(b.value)), 1e-12);
    EXPECT_NEAR(a.noise_kernel, b.noise_kernel, 1e-10);
    EXPECT_EQ(a.noise_kernel, a.value.real());
    EXPECT_LT(std::abs(a.connected - (a.value - density_mean(s, m, r, 0.4) * density_mean(s, m, r2, 1.3))), 1e-14);

    // int dr <mu(r, t) mu(r2, t2)> = m <mu(r2, t2)>: the chirp is integrated on a tensor grid.
    const Vec3 rp(0.2, -0.1, 0.3);
    const double t = 0.0;
    const double t2 = 3.0;
    const auto& gl = boost::math::quadrature::gauss<double, 20>::abscissa();
    const auto& gw = boost::math::quadrature::gauss<double, 20>::weights();
    std::vector<double> nodes;
    std::vector<double> weights;
    const int panels = 12;
    const double lo = -9.0;
    const double hi = 9.0;
    const double h = (hi - lo) / panels;
    for (int k = 0; k < panels; ++k) {
        const double c = lo + (k + 0.5) * h;
        for (std::size_t i = 0; i < gl.size(); ++i) {
            for (int sgn : {-1, 1}) {
                if (gl[i] == 0.0 && sgn < 0) {
                    continue;
                }
                nodes.push_back(c + sgn * gl[i] * h / 2);
                weights.push_back(gw[i] * h / 2);
            }
        }
    }
    Complex total = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            for (std::size_t k = 0; k < nodes.size(); ++k) {
                total += weights[i] * weights[j] * weights[k] *
                         density_corr(s, m, Vec3(nodes[i], nodes[j], nodes[k]), t, rp, t2).value;
            }
        }
    }
    EXPECT_LT(std::abs(total - m * density_mean(s, m, rp, t2)), 1e-6);
}

TEST(Density, TimeOfFlightMomentum) {
    const Vec3 p = time_of_flight_momentum(2.0, Vec3(3, 0, 0), 2.0, Vec3(1, 0, 0), 1.0);
    EXPECT_LT((p - Vec3(4, 0, 0)).norm(), 1e-15);
    EXPECT_THROW(time_of_flight_momentum(1.0, Vec3::Zero(), 1.0, Vec3::Zero(), 1.0), std::invalid_argument);
}

TEST(Density, Smearing) {
    const auto g = Smearing::Gaussian(0.3);
    EXPECT_NEAR(std::pow(g.ell(), 3) * g.f3(Vec3::Zero()), 1.0, 1e-14);
    EXPECT_NEAR(g.ell(), std::sqrt(2 * kPi) * 0.3, 1e-15);
    EXPECT_NEAR(composite([&](double x) { return g.g(x); }, -5.0, 5.0, 10), g.ell(), 1e-12);
    const auto box = Smearing::Sharp(0.5);
    EXPECT_EQ(box.ell(), 1.0);
    EXPECT_EQ(box.g(-0.5), 1.0);
    EXPECT_EQ(box.g(0.5), 0.0);
    EXPECT_EQ(box.g(0.2) * box.g(0.2), box.g(0.2));
    EXPECT_THROW(Smearing::Gaussian(0.0).validate(), std::invalid_argument);
}

TEST(Density, StaticLimitAndFluctuationRatio) {
    const double sigma = 0.8;
    const double m = 1.5;
    const auto s = gaussian(sigma);
    const double peak = std::pow(2 * kPi * sigma * sigma, -1.5);
    const auto smear = Smearing::Gaussian(0.2);
    EXPECT_NEAR(static_limit_corr(s, smear, m, Vec3::Zero(), Vec3::Zero()), m * m * peak * smear.f3(Vec3::Zero()),
                1e-12);
    // l^3 |psi|^2 = 1 at the centre when s_x = sigma.
    EXPECT_NEAR(fluctuation_ratio(s, Smearing::Gaussian(sigma), m, Vec3::Zero()), 0.0, 1e-12);
    EXPECT_NEAR(fluctuation_ratio(s, Smearing::Gaussian(sigma * std::pow(0.5, 1.0 / 3.0)), m, Vec3::Zero()), 1.0,
                1e-12);
    for (double x : {0.0, 0.5, 1.5, 3.0}) {
        EXPECT_GE(fluctuation_ratio(s, smear, m, Vec3(x, 0, 0)), 0.0);
        EXPECT_GE(fluctuation_ratio(s, smear, m, Vec3(x, 0, 0), FluctuationFormula::kPrinted), 0.0);
    }
    EXPECT_THROW(fluctuation_ratio(s, smear, m, Vec3(200, 0, 0)), std::domain_error);
}

TEST(Wigner, GaussianMatchesClosedFormAndMarginals) {
    const auto packet = WavePacket1D::Gaussian(0.7, 0.4);
    const auto grid = wigner_function(packet, default_grid_spec(packet));
    EXPECT_NEAR(grid.normalization, 1.0, 1e-6);
    EXPECT_LE(grid.max_imaginary, 1e-9);
    double dev = 0.0;
    for (std::size_t i = 0; i < grid.x_axis.size(); ++i) {
        for (std::size_t j = 0; j < grid.p_axis.size(); ++j) {
            dev = std::max(dev, std::abs(grid.values(i, j) - analytic_wigner(packet, grid.x_axis[i], grid.p_axis[j])));
        }
    }
    EXPECT_LE(dev, 1e-6);
    // Widths: sigma in x and 1/(2 sigma) in p.
    EXPECT_NEAR(analytic_wigner(packet, 0.4 + 0.7, 0.0) / analytic_wigner(packet, 0.4, 0.0), std::exp(-0.5), 1e-14);
    EXPECT_NEAR(analytic_wigner(packet, 0.4, 1.0 / 1.4) / analytic_wigner(packet, 0.4, 0.0), std::exp(-0.5), 1e-14);

    for (std::size_t i = 0; i < grid.x_axis.size(); i += 17) {
        double sum = 0.0;
        for (std::size_t j = 0; j < grid.p_axis.size(); ++j) {
            sum += (j == 0 || j + 1 == grid.p_axis.size() ? 0.5 : 1.0) * grid.values(i, j);
        }
        EXPECT_NEAR(sum * grid.dp() / (2 * kPi), std::norm(packet.value(grid.x_axis[i])), 1e-6);
    }
    for (std::size_t j = 0; j < grid.p_axis.size(); j += 13) {
        double sum = 0.0;
        for (std::size_t i = 0; i < grid.x_axis.size(); ++i) {
            sum += (i == 0 || i + 1 == grid.x_axis.size() ? 0.5 : 1.0) * grid.values(i, j);
        }
        EXPECT_NEAR(sum * grid.dx(), 2 * kPi * std::norm(packet.momentum_amplitude(grid.p_axis[j])), 1e-6);
    }
}

TEST(Wigner, CatInterferenceFringes) {
    const double L = 6.0;
    const auto s = cat_along_x(1.0, L);
    const auto w = wigner_function(s);
    const auto& g = w.axis[0];
    EXPECT_NEAR(g.normalization, 1.0, 1e-6);
    const double lobe = g.at(L / 2, 0.0);
    const double mid = g.at(0.0, 0.0);
    EXPECT_GE(std::abs(mid), lobe);
    EXPECT_NEAR(mid, analytic_wigner(s.axis[0], 0.0, 0.0), 1e-6);
    // Fringes cos(p L) on top of the small lobe tails: crossings alternate
    // around pi / L, and every second one is exactly a period 2 pi / L apart.
    std::vector<double> zeros;
    double prev_p = g.p_axis.front();
    double prev_v = g.at(0.0, prev_p);
    for (double p = prev_p + 1e-3; p < 1.5; p += 1e-3) {
        const double v = g.at(0.0, p);
        if ((v > 0) != (prev_v > 0)) {
            zeros.push_back(prev_p - prev_v * (p - prev_p) / (v - prev_v));
        }
        prev_p = p;
        prev_v = v;
    }
    ASSERT_GE(zeros.size(), 4u);
    for (std::size_t k = 2; k < zeros.size(); ++k) {
        EXPECT_NEAR(zeros[k] - zeros[k - 2], 2.0 * kPi / L, 5e-3);
        EXPECT_NEAR(zeros[k] - zeros[k - 1], kPi / L, 1e-2);
    }
}

TEST(Wigner, ResolutionChecks) {
    const auto packet = WavePacket1D::Gaussian(1.0);
    GridSpec coarse = default_grid_spec(packet);
    coarse.nx = 20;
    EXPECT_THROW(wigner_function(packet, coarse), RegimeError);
    GridSpec narrow = default_grid_spec(packet);
    narrow.x_min = -1.0;
    narrow.x_max = 1.0;
    narrow.nx = 17;
    EXPECT_THROW(wigner_function(packet, narrow), RegimeError);
}

TEST(Wigner, StaticLimitMeanEqualsDensity) {
    const double m = 1.0;
    for (const auto& s : {gaussian(1.0), cat_along_x(1.0, 5.0)}) {
        const auto w = wigner_function(s);
        for (double x : {-3.0, -1.2, 0.0, 0.7, 2.5}) {
            const Vec3 r(x, 0.3, -0.2);
            EXPECT_NEAR(smeared_mean_phase_space(w, r, 0.0, m), static_limit_mean(s, m, r), 1e-6 * m);
        }
    }
    // Narrow momentum spread: the mean barely moves in time.
    const auto wide = gaussian(4.0);
    const auto w = wigner_function(wide);
    const double heavy = 1e4;
    EXPECT_NEAR(smeared_mean_phase_space(w, Vec3(1, 0, 0), 10.0, heavy) / heavy,
                smeared_mean_phase_space(w, Vec3(1, 0, 0), 0.0, heavy) / heavy, 1e-8);
}

TEST(Wigner, SharpProjectorIdentity) {
    const double m = 2.0;
    const auto s = gaussian(1.0);
    const auto w = wigner_function(s);
    const auto box = Smearing::Sharp(0.25);
    const double l3 = std::pow(box.ell(), 3);
    for (double x : {0.0, 0.6, 1.3}) {
        const Vec3 r(x, 0.1, 0.0);
        const auto mom = smeared_corr_phase_space(w, box, r, 0.5, r, 0.5, m, SmearedPath::kQuadrature);
        EXPECT_NEAR(mom.corr, (m / l3) * mom.mean, 1e-10 * std::max(1.0, mom.corr));
    }
}

TEST(Wigner, DeltaPathAgreesWithQuadratureAtLargeSeparation) {
    // Both observation points sit on classical paths through the bulk of the
    // state, with |r - r2| = 10 s_x and s_x small against sigma.
    const double m = 1.0;
    const auto s = gaussian(2.0);
    const auto w = wigner_function(s);
    const auto smear = Smearing::Gaussian(0.25);
    const double t = 1.0;
    const double t2 = 11.0;
    for (double p : {0.25, -0.25}) {
        const Vec3 r(p * t / m, 0.0, 0.0);
        const Vec3 r2(p * t2 / m, 0.0, 0.0);
        ASSERT_GE((r - r2).norm(), 10.0 * 0.25 - 1e-12);
        const auto d = smeared_corr_phase_space(w, smear, r, t, r2, t2, m, SmearedPath::kDelta);
        const auto q = smeared_corr_phase_space(w, smear, r, t, r2, t2, m, SmearedPath::kQuadrature);
        EXPECT_NEAR(d.corr / q.corr, 1.0, 0.05) << p;
    }
    EXPECT_THROW(smeared_corr_phase_space(w, smear, Vec3::Zero(), 1.0, Vec3::Zero(), 1.0, m, SmearedPath::kDelta),
                 std::invalid_argument);
}

TEST(Histories, EqualTimeDecoherenceFunctional) {
    const double m = 1.0;
    // Approximate-projector regime: s_x at least eight spreads sigma(t).
    const auto s = gaussian(0.1);
    const auto smear = Smearing::Gaussian(0.8);
    const Vec3 r(0.05, -0.02, 0.0);
    const double t = 0.01;
    const Complex d = decoherence_functional(s, smear, m, r, t, r, t);
    EXPECT_LE(std::abs(d.imag()), 1e-12);
    // Direct expectation <P_r> = prod_a int |phi_a|^2 g.
    double expect = 1.0;
    for (int a = 0; a < 3; ++a) {
        expect *= composite([&](double x) { return std::norm(s.axis[a].value(x, t, m)) * smear.g(r(a) - x); }, -6.0,
                            6.0, 24);
    }
    EXPECT_NEAR(d.real() / expect, 1.0, 0.05);
    const Vec3 far = r + Vec3(6 * 0.8, 0.0, 0.0);
    EXPECT_LE(std::abs(decoherence_functional(s, smear, m, r, t, far, t)), 1e-6);
}

// Far-field regime: the sampling width is wide against the initial spread
// (small measurement kick) and narrow against the spread at t2.
TEST(Histories, DecoherenceFollowsTimeOfFlight) {
    const double m = 1.0;
    const auto s = gaussian(0.05);
    const auto smear = Smearing::Gaussian(1.0);
    const double t2 = 1.0;
    const double t = 3.0;
    auto scan = [&](double r2x, double& peak_x) {
        double best = 0.0;
        for (double x = r2x * t / t2 - 8.0; x <= r2x * t / t2 + 8.0; x += 0.5) {
            const double v = std::abs(decoherence_functional(s, smear, m, Vec3(x, 0, 0), t, Vec3(r2x, 0, 0), t2));
            if (v > best) {
                best = v;
                peak_x = x;
            }
        }
        return best;
    };
    double xa = 0.0;
    double xb = 0.0;
    const double best_a = scan(2.0, xa);
    const double best_b = scan(6.0, xb);
    // Classical locus (r - r0)/t = (r2 - r0)/t2 with r0 = 0.
    EXPECT_NEAR(xa, 2.0 * t / t2, 0.5);
    EXPECT_NEAR(xb, 6.0 * t / t2, 0.5);
    // Locus width at t is about s t / t2 plus post-sampling spreading.
    for (double off : {-10.0, 10.0}) {
        EXPECT_LT(std::abs(decoherence_functional(s, smear, m, Vec3(xa + off, 0, 0), t, Vec3(2.0, 0, 0), t2)),
                  0.2 * best_a);
    }
    // Peak weight follows the momentum density at p_TF = m r2 / t2.
    const auto& ax = s.axis[0];
    const double pa = std::norm(ax.momentum_amplitude(m * 2.0 / t2));
    const double pb = std::norm(ax.momentum_amplitude(m * 6.0 / t2));
    EXPECT_NEAR(std::log(best_b / best_a), std::log(pb / pa), 0.25 * std::abs(std::log(pb / pa)));
}

TEST(Histories, BoxSamplingUsesExactKernelIntegrals) {
    const double m = 1.0;
    const auto packet = WavePacket1D::Gaussian(0.5, 0.2);
    const auto box = Smearing::Sharp(0.3);
    const Grid1D grid = grid_for(packet, box, m, 2.0, {0.0});
    const double t = 0.7;
    const double inside =
        composite([&](double x) { return std::norm(packet.value(x, t, m)); }, 0.4 - 0.3, 0.4 + 0.3, 4);
    EXPECT_NEAR(n_time_probability_1d(packet, box, m, {{0.4, t}}, grid), inside, 1e-12);
    EXPECT_NEAR(decoherence_functional_1d(packet, box, m, 0.4, t, 0.4, t, grid).real(), inside, 1e-12);
    // A box covering the whole state acts as the identity, so propagating it
    // from t2 to t must reproduce the single-time probability at t.
    const auto all = Smearing::Sharp(12.0);
    const Complex d = decoherence_functional_1d(packet, box, m, 0.4, t, 0.0, 0.2, grid);
    const Complex via_identity = [&] {
        // P_all U P_r... with the identity box on the t2 side.
        return decoherence_functional_1d(packet, all, m, 0.0, 0.2, 0.0, 0.2, grid);
    }();
    EXPECT_NEAR(via_identity.real(), 1.0, 1e-9);
    EXPECT_TRUE(std::isfinite(std::abs(d)));
    const double two = n_time_probability_1d(packet, Smearing::Sharp(12.0), m, {{0.0, 0.2}, {0.0, t}}, grid);
    EXPECT_NEAR(two, 1.0, 1e-6);
}

TEST(Histories, NTimeProbabilities) {
    const double m = 1.0;
    const auto packet = WavePacket1D::Gaussian(0.5, 0.2);
    const auto smear = Smearing::Gaussian(0.3);
    const Grid1D grid = grid_for(packet, smear, m, 2.0, {0.0, 1.0});
    const double p1 = n_time_probability_1d(packet, smear, m, {{0.4, 0.7}}, grid);
    const double oracle =
        composite([&](double x) { return std::norm(packet.value(x, 0.7, m)) * smear.g(0.4 - x); }, -8.0, 8.0, 32);
    EXPECT_NEAR(p1, oracle, 1e-10);
    const double p2 = n_time_probability_1d(packet, smear, m, {{0.4, 0.7}, {1.0, 1.5}}, grid);
    EXPECT_GE(p2, 0.0);
    EXPECT_LE(p2, 1.0);
    EXPECT_THROW(n_time_probability_1d(packet, smear, m, {{0.4, 0.7}, {1.0, 0.7}}, grid), std::invalid_argument);

    const auto s3 = gaussian(0.5);
    const double p3 = n_time_probability(s3, smear, m, {{Vec3(0.1, 0, 0), 0.5}, {Vec3(0.3, 0.1, 0), 1.0}});
    EXPECT_GT(p3, 0.0);
    EXPECT_LE(p3, 1.0);
}

TEST(Histories, PartitionSumsToOneAndAdditivityFails) {
    const double m = 1.0;
    for (const auto& smear : {Smearing::Gaussian(0.3), Smearing::Sharp(0.2)}) {
        for (const auto& packet : {WavePacket1D::Gaussian(0.5, 0.0), cat_along_x(0.5, 3.0).axis[0]}) {
            const auto chk = additivity_defect_1d(packet, smear, m, 0.5, 0.4, 1.5);
            EXPECT_NEAR(chk.partition_sum, 1.0, 1e-6);
            EXPECT_GT(std::abs(chk.defect), 1e-6);
        }
    }
    // A very heavy particle barely moves, so sampling commutes with the evolution.
    const auto still = additivity_defect_1d(WavePacket1D::Gaussian(0.5, 0.0), Smearing::Gaussian(0.3), 1e12, 0.5, 0.4,
                                            1.5);
    EXPECT_LE(std::abs(still.defect), 1e-10);
}

TEST(Histories, GridEdgeDetection) {
    const auto packet = WavePacket1D::Gaussian(0.2, 0.0);
    Grid1D tiny;
    tiny.x_min = -0.5;
    tiny.dx = 0.05;
    tiny.n = 21;
    EXPECT_THROW(sample_state(packet, tiny, 5.0, 1.0), RegimeError);
}

}  // namespace
}  // namespace gravcat::density
