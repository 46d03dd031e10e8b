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

#include "gravcat/density.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gravcat::density {
namespace {

constexpr double kOneOverSqrtTwoPi = 0.3989422804014327;

Eigen::Matrix3d frame_along(const Vec3& direction) {
    const double len = direction.norm();
    if (len == 0.0) {
        return Eigen::Matrix3d::Identity();
    }
    const Vec3 e1 = direction / len;
    // Complete with the lab axis least aligned with e1.
    Eigen::Index pick = 0;
    e1.cwiseAbs().minCoeff(&pick);
    Vec3 helper = Vec3::Zero();
    helper(pick) = 1.0;
    const Vec3 e2 = (helper - helper.dot(e1) * e1).normalized();
    const Vec3 e3 = e1.cross(e2);
    Eigen::Matrix3d frame;
    frame.row(0) = e1.transpose();
    frame.row(1) = e2.transpose();
    frame.row(2) = e3.transpose();
    return frame;
}

void require_normalized(const SeparableState& state) {
    if (std::abs(state.norm_squared() - 1.0) > 1e-10) {
        throw std::invalid_argument("state is not normalized");
    }
}

}  // namespace

Vec3 newtonian_force(double m, double m0, const Vec3& R, const Vec3& x, double G) {
    const Vec3 d = R - x;
    const double r = d.norm();
    if (r == 0.0) {
        throw std::invalid_argument("newtonian_force: coincident points");
    }
    return -G * m * m0 * d / (r * r * r);
}

WavePacket1D WavePacket1D::Gaussian(double sigma, double center) {
    WavePacket1D w;
    w.sigma = sigma;
    w.centers = {center};
    w.weights = {1.0};
    w.validate();
    return w;
}

void WavePacket1D::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("WavePacket1D: sigma must be positive");
    }
    if (centers.empty() || centers.size() != weights.size()) {
        throw std::invalid_argument("WavePacket1D: need matching, non-empty centers and weights");
    }
}

double WavePacket1D::norm_squared() const {
    double total = 0.0;
    for (std::size_t j = 0; j < centers.size(); ++j) {
        for (std::size_t k = 0; k < centers.size(); ++k) {
            const double d = centers[j] - centers[k];
            total += (std::conj(weights[j]) * weights[k]).real() *
                     std::exp(-d * d / (8.0 * sigma * sigma));
        }
    }
    return total;
}

double WavePacket1D::max_abs_center() const {
    double out = 0.0;
    for (double c : centers) {
        out = std::max(out, std::abs(c));
    }
    return out;
}

Complex WavePacket1D::value(double x, double t, double m) const {
    const double s2 = sigma * sigma;
    const Complex spread(1.0, t / (2.0 * m * s2));
    const Complex pre = std::pow(2.0 * kPi * s2, -0.25) / std::sqrt(spread);
    Complex sum = 0.0;
    for (std::size_t k = 0; k < centers.size(); ++k) {
        const double d = x - centers[k];
        sum += weights[k] * std::exp(-d * d / (4.0 * s2 * spread));
    }
    return pre * sum;
}

Complex WavePacket1D::momentum_amplitude(double p) const {
    const double pre = std::pow(2.0 * sigma * sigma / kPi, 0.25) * std::exp(-sigma * sigma * p * p);
    Complex sum = 0.0;
    for (std::size_t k = 0; k < centers.size(); ++k) {
        sum += weights[k] * std::exp(-kI * (p * centers[k]));
    }
    return pre * sum;
}

Complex SeparableState::value(const Vec3& x, double t, double m) const {
    const Vec3 local = frame * x;
    return axis[0].value(local(0), t, m) * axis[1].value(local(1), t, m) *
           axis[2].value(local(2), t, m);
}

double SeparableState::norm_squared() const {
    return axis[0].norm_squared() * axis[1].norm_squared() * axis[2].norm_squared();
}

bool SeparableState::axis_aligned() const {
    return (frame - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-14;
}

void GaussianState::validate() const {
    if (!(sigma > 0.0) || !center.allFinite()) {
        throw std::invalid_argument("GaussianState: sigma must be positive and center finite");
    }
}

SeparableState GaussianState::separable() const {
    validate();
    SeparableState s;
    for (int a = 0; a < 3; ++a) {
        s.axis[a] = WavePacket1D::Gaussian(sigma, center(a));
    }
    return s;
}

void CatState::validate() const {
    if (!(sigma > 0.0) || !L.allFinite()) {
        throw std::invalid_argument("CatState: sigma must be positive and L finite");
    }
    if (std::norm(c_plus) + std::norm(c_minus) == 0.0) {
        throw std::invalid_argument("CatState: both weights vanish");
    }
}

double CatState::normalization() const {
    if (!exact_normalization) {
        return 1.0;
    }
    const double overlap = std::exp(-L.squaredNorm() / (8.0 * sigma * sigma));
    const double n2 = std::norm(c_plus) + std::norm(c_minus) +
                      2.0 * (std::conj(c_plus) * c_minus).real() * overlap;
    return 1.0 / std::sqrt(n2);
}

SeparableState CatState::separable() const {
    validate();
    SeparableState s;
    s.frame = frame_along(L);
    const double half = 0.5 * L.norm();
    const double n = normalization();
    s.axis[0].sigma = sigma;
    s.axis[0].centers = {half, -half};
    s.axis[0].weights = {n * c_plus, n * c_minus};
    s.axis[1] = WavePacket1D::Gaussian(sigma, 0.0);
    s.axis[2] = WavePacket1D::Gaussian(sigma, 0.0);
    return s;
}

Complex free_propagator(double m, const Vec3& r, double t, const Vec3& r2, double t2) {
    if (t2 == t) {
        throw std::invalid_argument("free_propagator: equal times; use the delta-function limit");
    }
    const double dt = t2 - t;
    const Complex base = m / (2.0 * kPi * kI * dt);
    return std::pow(base, 1.5) * std::exp(kI * (m * (r - r2).squaredNorm() / (2.0 * dt)));
}

Complex free_propagator_1d(double m, double x, double t, double x2, double t2) {
    if (t2 == t) {
        throw std::invalid_argument("free_propagator_1d: equal times");
    }
    const double dt = t2 - t;
    const Complex base = m / (2.0 * kPi * kI * dt);
    return std::sqrt(base) * std::exp(kI * (m * (x - x2) * (x - x2) / (2.0 * dt)));
}

double density_mean(const SeparableState& state, double m, const Vec3& r, double t) {
    require_normalized(state);
    return m * std::norm(state.value(r, t, m));
}

MassDensityCorrelator density_corr(const SeparableState& state, double m, const Vec3& r, double t,
                                   const Vec3& r2, double t2) {
    require_normalized(state);
    const Complex phi1 = state.value(r, t, m);
    const Complex phi2 = state.value(r2, t2, m);
    // <r|e^{-iH(t - t2)}|r2> is the conjugate of the propagator G(r, t; r2, t2).
    const Complex kernel = std::conj(free_propagator(m, r, t, r2, t2));
    MassDensityCorrelator out;
    out.value = m * m * std::conj(phi1) * kernel * phi2;
    out.noise_kernel = out.value.real();
    out.connected = out.value - m * std::norm(phi1) * m * std::norm(phi2);
    return out;
}

Vec3 time_of_flight_momentum(double m, const Vec3& r, double t, const Vec3& r2, double t2) {
    if (t == t2) {
        throw std::invalid_argument("time_of_flight_momentum: equal times");
    }
    return m * (r - r2) / (t - t2);
}

void Smearing::validate() const {
    if (!(width > 0.0) || !std::isfinite(width)) {
        throw std::invalid_argument("Smearing: width must be positive");
    }
}

double Smearing::ell() const {
    return kind == Kind::kGaussian ? width / kOneOverSqrtTwoPi : 2.0 * width;
}

double Smearing::g(double x) const {
    if (kind == Kind::kGaussian) {
        return std::exp(-x * x / (2.0 * width * width));
    }
    // Half-open so that boxes of width 2h tile the line without overlap.
    return (x >= -width && x < width) ? 1.0 : 0.0;
}

double Smearing::sqrt_g(double x) const {
    if (kind == Kind::kGaussian) {
        return std::exp(-x * x / (4.0 * width * width));
    }
    return g(x);
}

double Smearing::support() const { return kind == Kind::kGaussian ? 8.0 * width : width; }

double Smearing::g3(const Vec3& x) const { return g(x(0)) * g(x(1)) * g(x(2)); }

double static_limit_mean(const SeparableState& state, double m, const Vec3& r) {
    require_normalized(state);
    return m * std::norm(state.value(r));
}

double static_limit_corr(const SeparableState& state, const Smearing& smear, double m,
                         const Vec3& r, const Vec3& r2) {
    smear.validate();
    require_normalized(state);
    return m * m * std::norm(state.value(r)) * smear.f3(r - r2);
}

double fluctuation_ratio(const SeparableState& state, const Smearing& smear, double m,
                         const Vec3& r, FluctuationFormula formula) {
    smear.validate();
    const double ell3 = std::pow(smear.ell(), 3);
    const double mean = static_limit_mean(state, m, r);
    if (!(mean / m > 1e-300)) {
        throw std::domain_error("fluctuation_ratio: density vanishes at r");
    }
    if (formula == FluctuationFormula::kPrinted) {
        const double amp = std::sqrt(mean / m);
        return std::abs(1.0 / (ell3 * amp * amp * amp) - 1.0);
    }
    const double equal_point = (m / ell3) * mean;
    const double eta = equal_point - mean * mean;
    return std::abs(eta / (mean * mean));
}

}  // namespace gravcat::density
