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

#include "gravcat/wigner.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "gravcat/io.h"

namespace gravcat::density {
namespace {

constexpr int kStencil = 8;

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        out[i] = lo + (hi - lo) * i / (n - 1);
    }
    return out;
}

// Start index and weights of an 8-point Lagrange stencil around x on a uniform axis.
bool stencil(const std::vector<double>& axis, double x, int& start, std::array<double, kStencil>& w) {
    const int n = static_cast<int>(axis.size());
    const double h = axis[1] - axis[0];
    if (x < axis.front() || x > axis.back()) {
        return false;
    }
    const double s = (x - axis.front()) / h;
    start = std::clamp(static_cast<int>(std::floor(s)) - kStencil / 2 + 1, 0, n - kStencil);
    for (int i = 0; i < kStencil; ++i) {
        const double xi = start + i;
        double num = 1.0;
        double den = 1.0;
        for (int j = 0; j < kStencil; ++j) {
            if (j == i) {
                continue;
            }
            num *= s - (start + j);
            den *= xi - (start + j);
        }
        w[i] = num / den;
    }
    return true;
}

double trapezoid_2d(const Eigen::MatrixXd& v, double dx, double dp) {
    const Eigen::Index nx = v.rows();
    const Eigen::Index np = v.cols();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < nx; ++i) {
        const double wi = (i == 0 || i == nx - 1) ? 0.5 : 1.0;
        for (Eigen::Index j = 0; j < np; ++j) {
            const double wj = (j == 0 || j == np - 1) ? 0.5 : 1.0;
            sum += wi * wj * v(i, j);
        }
    }
    return sum * dx * dp;
}

template <class F>
double composite_gauss(F f, double a, double b, int panels) {
    if (!(b > a)) {
        return 0.0;
    }
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int k = 0; k < panels; ++k) {
        sum += boost::math::quadrature::gauss<double, 20>::integrate(f, a + k * h, a + (k + 1) * h);
    }
    return sum;
}

// One axis of the smeared moments: (1/2 pi) int du dp W(r - u - p t/m, p) g(u) [g(d + u - p lag/m)].
double axis_integral(const PhaseSpaceGrid& w, const Smearing& smear, double r, double t, double m,
                     bool paired, double d, double lag) {
    const double support = smear.support();
    const int panels = smear.kind == Smearing::Kind::kGaussian ? 16 : 4;
    const double p_lo = w.p_axis.front();
    const double p_hi = w.p_axis.back();
    auto inner = [&](double u) {
        double lo = p_lo;
        double hi = p_hi;
        if (paired && lag != 0.0) {
            const double centre = m * (d + u) / lag;
            const double half = support * m / std::abs(lag);
            lo = std::max(lo, centre - half);
            hi = std::min(hi, centre + half);
        }
        auto integrand = [&](double p) {
            double val = w.at(r - u - p * t / m, p);
            if (paired) {
                val *= smear.g(d + u - p * lag / m);
            }
            return val;
        };
        return composite_gauss(integrand, lo, hi, 16) * smear.g(u);
    };
    return composite_gauss(inner, -support, support, panels) / (2.0 * kPi);
}

}  // namespace

GridSpec default_grid_spec(const WavePacket1D& state) {
    state.validate();
    const double s = state.sigma;
    double spread = 0.0;
    for (double a : state.centers) {
        for (double b : state.centers) {
            spread = std::max(spread, std::abs(a - b));
        }
    }
    GridSpec g;
    const double reach = state.max_abs_center() + 8.0 * s;
    g.x_min = -reach;
    g.x_max = reach;
    g.nx = static_cast<int>(std::ceil(2.0 * reach / (s / 8.0))) + 1;
    g.p_min = -4.0 / s;
    g.p_max = 4.0 / s;
    double dp = 1.0 / (2.0 * s);
    if (spread > 0.0) {
        dp = std::min(dp, 2.0 * kPi / spread);
    }
    dp /= 8.0;
    g.np = static_cast<int>(std::ceil((g.p_max - g.p_min) / dp)) + 1;
    return g;
}

double PhaseSpaceGrid::at(double x, double p) const {
    int ix = 0;
    int ip = 0;
    std::array<double, kStencil> wx{};
    std::array<double, kStencil> wp{};
    if (!stencil(x_axis, x, ix, wx) || !stencil(p_axis, p, ip, wp)) {
        return 0.0;
    }
    double sum = 0.0;
    for (int i = 0; i < kStencil; ++i) {
        double row = 0.0;
        for (int j = 0; j < kStencil; ++j) {
            row += wp[j] * values(ix + i, ip + j);
        }
        sum += wx[i] * row;
    }
    return sum;
}

PhaseSpaceGrid wigner_function(const WavePacket1D& state, const GridSpec& spec) {
    state.validate();
    if (spec.nx < kStencil || spec.np < kStencil || !(spec.x_max > spec.x_min) ||
        !(spec.p_max > spec.p_min)) {
        throw std::invalid_argument("wigner_function: grid needs at least 8 points per axis");
    }
    const double s = state.sigma;
    PhaseSpaceGrid grid;
    grid.x_axis = linspace(spec.x_min, spec.x_max, spec.nx);
    grid.p_axis = linspace(spec.p_min, spec.p_max, spec.np);

    if (grid.dx() > s / 8.0 * (1.0 + 1e-12)) {
        throw RegimeError("wigner_function: dx exceeds sigma/8");
    }
    double spread = 0.0;
    for (double a : state.centers) {
        for (double b : state.centers) {
            spread = std::max(spread, std::abs(a - b));
        }
    }
    double dp_limit = 1.0 / (2.0 * s);
    if (spread > 0.0) {
        dp_limit = std::min(dp_limit, 2.0 * kPi / spread);
    }
    if (grid.dp() > dp_limit / 8.0 * (1.0 + 1e-12)) {
        throw RegimeError("wigner_function: dp does not resolve the momentum structure");
    }

    const double p_abs = std::max(std::abs(spec.p_min), std::abs(spec.p_max));
    const double hy = std::min(s / 4.0, 0.5 * kPi / p_abs);
    const double y_reach = 2.0 * (state.max_abs_center() + 10.0 * s);
    const int half = static_cast<int>(std::ceil(y_reach / hy));
    const int ny = 2 * half + 1;

    // W = F E with F(x, y) = psi(x - y/2) psi*(x + y/2) and E(y, p) = e^{i p y} h.
    Eigen::MatrixXcd f(spec.nx, ny);
    for (int i = 0; i < spec.nx; ++i) {
        const double x = grid.x_axis[i];
        for (int k = 0; k < ny; ++k) {
            const double y = (k - half) * hy;
            f(i, k) = state.value(x - 0.5 * y) * std::conj(state.value(x + 0.5 * y));
        }
    }
    Eigen::MatrixXcd e(ny, spec.np);
    for (int k = 0; k < ny; ++k) {
        const double y = (k - half) * hy;
        const double wk = (k == 0 || k == ny - 1) ? 0.5 * hy : hy;
        for (int j = 0; j < spec.np; ++j) {
            e(k, j) = wk * std::exp(kI * (grid.p_axis[j] * y));
        }
    }
    const Eigen::MatrixXcd w = f * e;
    grid.values = w.real();
    grid.max_imaginary = w.imag().cwiseAbs().maxCoeff();
    grid.normalization = trapezoid_2d(grid.values, grid.dx(), grid.dp()) / (2.0 * kPi);
    if (std::abs(grid.normalization - 1.0) > 1e-6) {
        throw RegimeError("wigner_function: normalization " + io::format_double(grid.normalization) +
                          " differs from 1; the grid truncates or aliases the state");
    }
    return grid;
}

double analytic_wigner(const WavePacket1D& state, double x, double p) {
    const double s2 = state.sigma * state.sigma;
    Complex sum = 0.0;
    for (std::size_t j = 0; j < state.centers.size(); ++j) {
        for (std::size_t k = 0; k < state.centers.size(); ++k) {
            const double mid = x - 0.5 * (state.centers[j] + state.centers[k]);
            const double diff = state.centers[j] - state.centers[k];
            sum += state.weights[j] * std::conj(state.weights[k]) * 2.0 *
                   std::exp(-mid * mid / (2.0 * s2) - 2.0 * s2 * p * p - kI * (p * diff));
        }
    }
    return sum.real();
}

double SeparableWigner::at(const Vec3& x, const Vec3& p) const {
    const Vec3 lx = frame * x;
    const Vec3 lp = frame * p;
    return axis[0].at(lx(0), lp(0)) * axis[1].at(lx(1), lp(1)) * axis[2].at(lx(2), lp(2));
}

SeparableWigner wigner_function(const SeparableState& state) {
    SeparableWigner out;
    out.frame = state.frame;
    for (int a = 0; a < 3; ++a) {
        out.axis[a] = wigner_function(state.axis[a], default_grid_spec(state.axis[a]));
    }
    return out;
}

double smeared_mean_phase_space(const SeparableWigner& w0, const Vec3& r, double t, double m) {
    if (!(m > 0.0)) {
        throw std::invalid_argument("smeared_mean_phase_space: mass must be positive");
    }
    const Vec3 lr = w0.frame * r;
    double mean = m;
    for (int a = 0; a < 3; ++a) {
        const PhaseSpaceGrid& g = w0.axis[a];
        double sum = 0.0;
        const int np = static_cast<int>(g.p_axis.size());
        for (int j = 0; j < np; ++j) {
            const double p = g.p_axis[j];
            const double wj = (j == 0 || j == np - 1) ? 0.5 : 1.0;
            sum += wj * g.at(lr(a) - p * t / m, p);
        }
        mean *= sum * g.dp() / (2.0 * kPi);
    }
    return mean;
}

SmearedMoments smeared_corr_phase_space(const SeparableWigner& w0, const Smearing& smear,
                                        const Vec3& r, double t, const Vec3& r2, double t2,
                                        double m, SmearedPath path) {
    smear.validate();
    if (!(m > 0.0)) {
        throw std::invalid_argument("smeared_corr_phase_space: mass must be positive");
    }
    SmearedMoments out;
    if (path == SmearedPath::kDelta) {
        if (t == t2) {
            throw std::invalid_argument("smeared_corr_phase_space: delta path needs t != t2");
        }
        out.mean = smeared_mean_phase_space(w0, r, t, m);
        const double lag = t - t2;
        const Vec3 x = 0.5 * (r + r2) - (r - r2) * (t + t2) / (2.0 * lag);
        const Vec3 p = m * (r - r2) / lag;
        const double m5 = std::pow(m, 5);
        out.corr = m5 / (std::pow(2.0 * kPi, 3) * std::pow(std::abs(lag), 3)) * w0.at(x, p);
        return out;
    }

    if (smear.kind == Smearing::Kind::kSharp &&
        (w0.frame - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-14) {
        throw std::invalid_argument(
            "smeared_corr_phase_space: box sampling needs a state aligned with the lab axes");
    }
    const Vec3 lr = w0.frame * r;
    const Vec3 lr2 = w0.frame * r2;
    const double ell = smear.ell();
    double mean = m;
    double corr = m * m;
    for (int a = 0; a < 3; ++a) {
        mean *= axis_integral(w0.axis[a], smear, lr(a), t, m, false, 0.0, 0.0) / ell;
        corr *= axis_integral(w0.axis[a], smear, lr(a), t, m, true, lr2(a) - lr(a), t2 - t) /
                (ell * ell);
    }
    out.mean = mean;
    out.corr = corr;
    return out;
}

void export_wigner_grid(const PhaseSpaceGrid& grid, const WavePacket1D& state,
                        const std::string& csv_path) {
    io::CsvWriter csv(csv_path, {"x", "p", "W"});
    for (std::size_t i = 0; i < grid.x_axis.size(); ++i) {
        for (std::size_t j = 0; j < grid.p_axis.size(); ++j) {
            csv.row({grid.x_axis[i], grid.p_axis[j], grid.values(i, j)});
        }
    }
    csv.close();
    nlohmann::json centers = nlohmann::json::array();
    nlohmann::json weights = nlohmann::json::array();
    for (std::size_t k = 0; k < state.centers.size(); ++k) {
        centers.push_back(state.centers[k]);
        weights.push_back({state.weights[k].real(), state.weights[k].imag()});
    }
    nlohmann::json meta = {
        {"columns", {"x", "p", "W"}},
        {"units", "natural (hbar = 1); W normalized so that int dx dp / (2 pi) W = 1"},
        {"x_axis", {{"min", grid.x_axis.front()}, {"max", grid.x_axis.back()},
                    {"count", grid.x_axis.size()}}},
        {"p_axis", {{"min", grid.p_axis.front()}, {"max", grid.p_axis.back()},
                    {"count", grid.p_axis.size()}}},
        {"normalization", grid.normalization},
        {"state", {{"sigma", state.sigma}, {"centers", centers}, {"weights", weights}}},
    };
    io::write_sidecar(csv_path, meta);
}

}  // namespace gravcat::density
