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

#ifndef GRAVCAT_WIGNER_H
#define GRAVCAT_WIGNER_H

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gravcat/density.h"

namespace gravcat::density {

struct GridSpec {
    double x_min = -1.0;
    double x_max = 1.0;
    int nx = 2;
    double p_min = -1.0;
    double p_max = 1.0;
    int np = 2;
};

/// Grid covering +-(max|center| + 8 sigma) in x and +-4/sigma in p at the
/// resolution wigner_function requires.
GridSpec default_grid_spec(const WavePacket1D& state);

/// Sampled W(x, p) on a rectangular grid; values(i, j) = W(x_i, p_j).
struct PhaseSpaceGrid {
    std::vector<double> x_axis;
    std::vector<double> p_axis;
    Eigen::MatrixXd values;
    double normalization = 0.0;  // trapezoid estimate of int dx dp / (2 pi) W
    double max_imaginary = 0.0;  // largest |Im W| seen before taking the real part

    double dx() const { return x_axis[1] - x_axis[0]; }
    double dp() const { return p_axis[1] - p_axis[0]; }

    /// 8-point tensor Lagrange interpolation; zero outside the grid.
    double at(double x, double p) const;
};

/// W(x, p) = int dy psi(x - y/2) psi*(x + y/2) e^{i p y}, trapezoid in y.
/// Throws RegimeError if the grid under-resolves sigma (dx > sigma/8), the
/// momentum structure (dp > min(1/(2 sigma), 2 pi/L)/8), or if the computed
/// normalization misses 1 by more than 1e-6.
PhaseSpaceGrid wigner_function(const WavePacket1D& state, const GridSpec& spec);

/// Closed form for Gaussian superpositions:
/// sum_jk w_j w_k* 2 exp(-(x - (c_j + c_k)/2)^2 / (2 sigma^2) - 2 sigma^2 p^2 - i p (c_j - c_k)).
double analytic_wigner(const WavePacket1D& state, double x, double p);

/// Product of per-axis grids in the state's frame.
struct SeparableWigner {
    Eigen::Matrix3d frame = Eigen::Matrix3d::Identity();
    std::array<PhaseSpaceGrid, 3> axis;

    double at(const Vec3& x, const Vec3& p) const;
};

SeparableWigner wigner_function(const SeparableState& state);

struct SmearedMoments {
    double mean = 0.0;  // <mu_s(r, t)>
    double corr = 0.0;  // <mu_s(r, t) mu_s(r2, t2)>
};

enum class SmearedPath {
    kDelta,       // sampling functions replaced by delta functions
    kQuadrature,  // Gaussian or box sampling integrated against W0
};

/// Delta-limit smeared mean (m / (2 pi)^3) int dp W0(r - p t / m, p).
double smeared_mean_phase_space(const SeparableWigner& w0, const Vec3& r, double t, double m);

/// Quasi-classical smeared mean and two-point function from the initial
/// Wigner function. The delta path needs t != t2 for the correlation.
SmearedMoments smeared_corr_phase_space(const SeparableWigner& w0, const Smearing& smear,
                                        const Vec3& r, double t, const Vec3& r2, double t2,
                                        double m, SmearedPath path);

/// Writes (x, p, W) rows plus a JSON sidecar describing axes and the state.
void export_wigner_grid(const PhaseSpaceGrid& grid, const WavePacket1D& state,
                        const std::string& csv_path);

}  // namespace gravcat::density

#endif  // GRAVCAT_WIGNER_H
