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

#ifndef GRAVCAT_DENSITY_H
#define GRAVCAT_DENSITY_H

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "gravcat/common.h"

namespace gravcat::density {

using Vec3 = Eigen::Vector3d;

inline constexpr double kGravitationalConstantSI = 6.67430e-11;  // m^3 kg^-1 s^-2
inline constexpr double kPlanckLength = 1.616255e-35;            // m
inline constexpr double kPlanckMass = 2.176434e-8;               // kg
inline constexpr double kPlanckTime = 5.391247e-44;              // s

/// SI to natural units (hbar = c = G = 1).
inline double length_from_si(double metres) { return metres / kPlanckLength; }
inline double mass_from_si(double kilograms) { return kilograms / kPlanckMass; }
inline double time_from_si(double seconds) { return seconds / kPlanckTime; }

/// -G m m0 (R - x) / |R - x|^3. Throws on coincident points.
Vec3 newtonian_force(double m, double m0, const Vec3& R, const Vec3& x, double G = 1.0);

/// One-dimensional superposition of equal-width Gaussians with zero mean
/// momentum, sum_k w_k phi_k(x), phi_k normalized and centred on c_k.
struct WavePacket1D {
    double sigma = 1.0;
    std::vector<double> centers;
    std::vector<Complex> weights;

    static WavePacket1D Gaussian(double sigma, double center = 0.0);

    void validate() const;
    double norm_squared() const;  // analytic, includes overlaps
    double max_abs_center() const;

    /// Free evolution for mass m, computed in closed form.
    Complex value(double x, double t = 0.0, double m = 1.0) const;
    /// Momentum amplitude <p|psi> at t = 0.
    Complex momentum_amplitude(double p) const;
};

/// Separable three-dimensional state: psi(x) = prod_a axis[a](e_a . x), with
/// orthonormal frame rows e_a.
struct SeparableState {
    Eigen::Matrix3d frame = Eigen::Matrix3d::Identity();
    std::array<WavePacket1D, 3> axis;

    Complex value(const Vec3& x, double t = 0.0, double m = 1.0) const;
    double norm_squared() const;
    double sigma() const { return axis[0].sigma; }
    bool axis_aligned() const;
};

struct GaussianState {
    double sigma = 1.0;
    Vec3 center = Vec3::Zero();

    void validate() const;
    SeparableState separable() const;
};

/// c_plus phi(x - L/2) + c_minus phi(x + L/2). With exact_normalization the
/// prefactor includes the overlap e^{-L^2/(8 sigma^2)}; otherwise the weights
/// are used as given, which is only normalized for L >> sigma.
struct CatState {
    double sigma = 1.0;
    Vec3 L = Vec3(1.0, 0.0, 0.0);
    Complex c_plus = 1.0 / std::sqrt(2.0);
    Complex c_minus = 1.0 / std::sqrt(2.0);
    bool exact_normalization = true;

    void validate() const;
    double normalization() const;
    /// Frame with e1 along L; the cat lives on axis 0.
    SeparableState separable() const;
};

/// Paper's G(r, t; r', t') = (m / (2 pi i (t' - t)))^{3/2} exp[i m |r - r'|^2 / (2 (t' - t))],
/// principal branch. Throws when t == t2.
Complex free_propagator(double m, const Vec3& r, double t, const Vec3& r2, double t2);
Complex free_propagator_1d(double m, double x, double t, double x2, double t2);

/// m |phi(r, t)|^2.
double density_mean(const SeparableState& state, double m, const Vec3& r, double t);

struct MassDensityCorrelator {
    Complex value;
    double noise_kernel = 0.0;  // Re value
    Complex connected;          // value - mean(r, t) mean(r2, t2)
};

/// <mu(r, t) mu(r2, t2)> = m^2 phi*(r, t) <r|e^{-iH(t - t2)}|r2> phi(r2, t2).
/// Either time order is accepted; equal times throw.
MassDensityCorrelator density_corr(const SeparableState& state, double m, const Vec3& r, double t,
                                   const Vec3& r2, double t2);

/// Time-of-flight momentum m (r - r2) / (t - t2).
Vec3 time_of_flight_momentum(double m, const Vec3& r, double t, const Vec3& r2, double t2);

/// Position sampling function. Gaussian: g = exp(-x^2 / (2 s^2)) per axis,
/// ell = sqrt(2 pi) s. Sharp: indicator of |x| <= h per axis, ell = 2 h.
struct Smearing {
    enum class Kind { kGaussian, kSharp };
    Kind kind = Kind::kGaussian;
    double width = 1.0;  // s_x or the half-width h

    static Smearing Gaussian(double s_x) { return {Kind::kGaussian, s_x}; }
    static Smearing Sharp(double half_width) { return {Kind::kSharp, half_width}; }

    void validate() const;
    double ell() const;
    double g(double x) const;
    double sqrt_g(double x) const;
    /// Half-width of the support used for quadrature (8 s for the Gaussian).
    double support() const;
    double g3(const Vec3& x) const;
    double f3(const Vec3& x) const { return g3(x) / std::pow(ell(), 3); }
};

/// Narrow-momentum static limit: m |psi0(r)|^2.
double static_limit_mean(const SeparableState& state, double m, const Vec3& r);

/// m^2 |psi0(r)|^2 f(r - r2).
double static_limit_corr(const SeparableState& state, const Smearing& smear, double m,
                         const Vec3& r, const Vec3& r2);

enum class FluctuationFormula { kDerived, kPrinted };

/// |eta(r, t; r, t)| / <mu_s>^2 from the static mean and the sharp-projector
/// equal-point correlation. kPrinted returns |1/(ell^3 |psi0|^3) - 1| instead.
double fluctuation_ratio(const SeparableState& state, const Smearing& smear, double m,
                         const Vec3& r, FluctuationFormula formula = FluctuationFormula::kDerived);

}  // namespace gravcat::density

#endif  // GRAVCAT_DENSITY_H
