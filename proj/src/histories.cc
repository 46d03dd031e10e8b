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

#include "gravcat/histories.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <unsupported/Eigen/FFT>

namespace gravcat::density {
namespace {

using Eigen::VectorXcd;

void check_edges(const VectorXcd& psi) {
    const Eigen::Index n = psi.size();
    const Eigen::Index band = std::max<Eigen::Index>(4, n / 40);
    const double peak = psi.cwiseAbs().maxCoeff();
    double edge = 0.0;
    for (Eigen::Index i = 0; i < band; ++i) {
        edge = std::max({edge, std::abs(psi(i)), std::abs(psi(n - 1 - i))});
    }
    if (peak > 0.0 && edge > 1e-8 * peak) {
        throw RegimeError("grid evolution: amplitude reaches the grid edge (aliasing)");
    }
}

VectorXcd apply_sampling(const VectorXcd& psi, const Smearing& smear, const Grid1D& grid, double r,
                         bool root) {
    VectorXcd out(psi.size());
    for (int i = 0; i < grid.n; ++i) {
        const double d = r - grid.x(i);
        out(i) = psi(i) * (root ? smear.sqrt_g(d) : smear.g(d));
    }
    return out;
}

struct BoxNodes {
    std::vector<double> x;
    std::vector<double> w;
};

// Composite 20-point Gauss-Legendre nodes on [r - h, r + h].
BoxNodes box_nodes(double r, double h, int panels) {
    using Rule = boost::math::quadrature::gauss<double, 20>;
    BoxNodes out;
    const double width = 2.0 * h / panels;
    for (int k = 0; k < panels; ++k) {
        const double mid = r - h + (k + 0.5) * width;
        for (std::size_t i = 0; i < Rule::abscissa().size(); ++i) {
            const double a = Rule::abscissa()[i];
            const double w = Rule::weights()[i];
            out.x.push_back(mid + 0.5 * width * a);
            out.w.push_back(0.5 * width * w);
            if (a != 0.0) {
                out.x.push_back(mid - 0.5 * width * a);
                out.w.push_back(0.5 * width * w);
            }
        }
    }
    return out;
}

// Panels so that each carries at most about two oscillations of the kernel
// chirp (span of m |x - y| / dt across the box) and of the state itself.
int box_panels(const WavePacket1D& state, double m, double h, double reach, double dt) {
    double k = 4.0 / state.sigma;
    if (dt != 0.0) {
        k += m * reach / std::abs(dt);
    }
    const double phase = 2.0 * h * k;
    return std::clamp(static_cast<int>(std::ceil(phase / (4.0 * kPi))) + 1, 2, 4096);
}

double box_n_time_probability(const WavePacket1D& state, const Smearing& smear, double m,
                              const std::vector<std::pair<double, double>>& events) {
    const double h = smear.width;
    double reach0 = 2.0 * h;
    if (events.size() > 1) {
        reach0 += std::abs(events[1].first - events[0].first);
    }
    const double dt0 = events.size() > 1 ? events[1].second - events[0].second : 0.0;
    BoxNodes nodes = box_nodes(events[0].first, h, box_panels(state, m, h, reach0, dt0));
    VectorXcd amp(nodes.x.size());
    for (std::size_t j = 0; j < nodes.x.size(); ++j) {
        amp(j) = state.value(nodes.x[j], events[0].second, m);
    }
    for (std::size_t i = 1; i < events.size(); ++i) {
        const double reach = std::abs(events[i].first - events[i - 1].first) + 2.0 * h;
        const double dt = events[i].second - events[i - 1].second;
        BoxNodes next = box_nodes(events[i].first, h, box_panels(state, m, h, reach, dt));
        VectorXcd out = VectorXcd::Zero(next.x.size());
        for (std::size_t a = 0; a < next.x.size(); ++a) {
            for (std::size_t b = 0; b < nodes.x.size(); ++b) {
                out(a) += nodes.w[b] *
                          free_propagator_1d(m, nodes.x[b], events[i - 1].second, next.x[a],
                                             events[i].second) *
                          amp(b);
            }
        }
        nodes = std::move(next);
        amp = std::move(out);
    }
    double total = 0.0;
    for (std::size_t j = 0; j < nodes.x.size(); ++j) {
        total += nodes.w[j] * std::norm(amp(j));
    }
    return total;
}

Complex box_decoherence_functional(const WavePacket1D& state, const Smearing& smear, double m,
                                   double r, double t, double r2, double t2) {
    const double h = smear.width;
    if (t == t2) {
        const double lo = std::max(r, r2) - h;
        const double hi = std::min(r, r2) + h;
        if (!(hi > lo)) {
            return 0.0;
        }
        const double half = 0.5 * (hi - lo);
        const BoxNodes nodes = box_nodes(lo + half, half, box_panels(state, m, half, 0.0, 0.0));
        double total = 0.0;
        for (std::size_t j = 0; j < nodes.x.size(); ++j) {
            total += nodes.w[j] * std::norm(state.value(nodes.x[j], t, m));
        }
        return total;
    }
    const double reach = std::abs(r - r2) + 2.0 * h;
    const BoxNodes from = box_nodes(r2, h, box_panels(state, m, h, reach, t - t2));
    const BoxNodes to = box_nodes(r, h, box_panels(state, m, h, reach, t - t2));
    VectorXcd source(from.x.size());
    for (std::size_t b = 0; b < from.x.size(); ++b) {
        source(b) = from.w[b] * state.value(from.x[b], t2, m);
    }
    Complex total = 0.0;
    for (std::size_t a = 0; a < to.x.size(); ++a) {
        Complex evolved = 0.0;
        for (std::size_t b = 0; b < from.x.size(); ++b) {
            evolved += free_propagator_1d(m, from.x[b], t2, to.x[a], t) * source(b);
        }
        total += to.w[a] * std::conj(state.value(to.x[a], t, m)) * evolved;
    }
    return total;
}

void require_separable_sampling(const SeparableState& state, const Smearing& smear) {
    if (smear.kind == Smearing::Kind::kSharp && !state.axis_aligned()) {
        throw std::invalid_argument("box sampling needs a state aligned with the lab axes");
    }
}

}  // namespace

Grid1D grid_for(const WavePacket1D& state, const Smearing& smear, double m, double t_max,
                const std::vector<double>& positions) {
    state.validate();
    smear.validate();
    const double s2 = state.sigma * state.sigma;
    const double tau = std::abs(t_max) / (2.0 * m * s2);
    const double spread = state.sigma * std::sqrt(1.0 + tau * tau);
    // A sampling of width s leaves a momentum spread of order 1/s behind it.
    const double kick = std::abs(t_max) / (2.0 * m * std::min(state.sigma, smear.width));
    double lo = -state.max_abs_center() - 12.0 * std::max(spread, kick);
    double hi = state.max_abs_center() + 12.0 * std::max(spread, kick);
    for (double r : positions) {
        lo = std::min(lo, r - smear.support() - 4.0 * state.sigma);
        hi = std::max(hi, r + smear.support() + 4.0 * state.sigma);
    }
    const double dx = std::min(state.sigma, smear.width) / 4.0;
    int n = 64;
    while (n * dx < hi - lo) {
        n *= 2;
    }
    Grid1D g;
    g.dx = dx;
    g.n = n;
    g.x_min = 0.5 * (lo + hi) - 0.5 * dx * (n - 1);
    return g;
}

FreeEvolver::FreeEvolver(Grid1D grid, double m) : grid_(grid), m_(m), k_(grid.n) {
    if (!(m > 0.0)) {
        throw std::invalid_argument("FreeEvolver: mass must be positive");
    }
    const double dk = 2.0 * kPi / (grid.n * grid.dx);
    for (int i = 0; i < grid.n; ++i) {
        const int j = i <= grid.n / 2 ? i : i - grid.n;
        k_[i] = dk * j;
    }
}

VectorXcd FreeEvolver::evolve(const VectorXcd& psi, double dt) const {
    if (dt == 0.0) {
        return psi;
    }
    Eigen::FFT<double> fft;
    std::vector<Complex> in(psi.data(), psi.data() + psi.size());
    std::vector<Complex> freq;
    fft.fwd(freq, in);
    for (int i = 0; i < grid_.n; ++i) {
        freq[i] *= std::exp(-kI * (k_[i] * k_[i] * dt / (2.0 * m_)));
    }
    std::vector<Complex> out;
    fft.inv(out, freq);
    VectorXcd res = Eigen::Map<VectorXcd>(out.data(), grid_.n);
    check_edges(res);
    return res;
}

VectorXcd sample_state(const WavePacket1D& state, const Grid1D& grid, double t, double m) {
    VectorXcd v(grid.n);
    for (int i = 0; i < grid.n; ++i) {
        v(i) = state.value(grid.x(i), t, m);
    }
    check_edges(v);
    return v;
}

Complex decoherence_functional_1d(const WavePacket1D& state, const Smearing& smear, double m,
                                  double r, double t, double r2, double t2, const Grid1D& grid) {
    if (smear.kind == Smearing::Kind::kSharp) {
        return box_decoherence_functional(state, smear, m, r, t, r2, t2);
    }
    const FreeEvolver evolver(grid, m);
    const VectorXcd left = apply_sampling(sample_state(state, grid, t, m), smear, grid, r, false);
    const VectorXcd right = apply_sampling(sample_state(state, grid, t2, m), smear, grid, r2, false);
    return grid.dx * left.dot(evolver.evolve(right, t - t2));
}

Complex decoherence_functional(const SeparableState& state, const Smearing& smear, double m,
                               const Vec3& r, double t, const Vec3& r2, double t2) {
    require_separable_sampling(state, smear);
    const Vec3 lr = state.frame * r;
    const Vec3 lr2 = state.frame * r2;
    const double t_max = std::max(std::abs(t), std::abs(t2));
    Complex out = 1.0;
    for (int a = 0; a < 3; ++a) {
        const Grid1D grid = grid_for(state.axis[a], smear, m, t_max, {lr(a), lr2(a)});
        out *= decoherence_functional_1d(state.axis[a], smear, m, lr(a), t, lr2(a), t2, grid);
    }
    return out;
}

double n_time_probability_1d(const WavePacket1D& state, const Smearing& smear, double m,
                             const std::vector<std::pair<double, double>>& events,
                             const Grid1D& grid) {
    if (events.empty()) {
        throw std::invalid_argument("n_time_probability: no events");
    }
    for (std::size_t i = 1; i < events.size(); ++i) {
        if (!(events[i].second > events[i - 1].second)) {
            throw std::invalid_argument("n_time_probability: times must increase strictly");
        }
    }
    if (smear.kind == Smearing::Kind::kSharp) {
        return box_n_time_probability(state, smear, m, events);
    }
    const FreeEvolver evolver(grid, m);
    VectorXcd psi = sample_state(state, grid, events.front().second, m);
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (i > 0) {
            psi = evolver.evolve(psi, events[i].second - events[i - 1].second);
        }
        psi = apply_sampling(psi, smear, grid, events[i].first, true);
    }
    return grid.dx * psi.squaredNorm();
}

double n_time_probability(const SeparableState& state, const Smearing& smear, double m,
                          const std::vector<std::pair<Vec3, double>>& events) {
    require_separable_sampling(state, smear);
    if (events.empty()) {
        throw std::invalid_argument("n_time_probability: no events");
    }
    double t_max = 0.0;
    for (const auto& e : events) {
        t_max = std::max(t_max, std::abs(e.second));
    }
    double out = 1.0;
    for (int a = 0; a < 3; ++a) {
        std::vector<std::pair<double, double>> axis_events;
        std::vector<double> positions;
        for (const auto& e : events) {
            const double x = (state.frame * e.first)(a);
            axis_events.emplace_back(x, e.second);
            positions.push_back(x);
        }
        const Grid1D grid = grid_for(state.axis[a], smear, m, t_max, positions);
        out *= n_time_probability_1d(state.axis[a], smear, m, axis_events, grid);
    }
    return out;
}

AdditivityCheck additivity_defect_1d(const WavePacket1D& state, const Smearing& smear, double m,
                                     double t1, double r2, double t2) {
    if (!(t2 > t1)) {
        throw std::invalid_argument("additivity_defect_1d: requires t1 < t2");
    }
    const double h = smear.kind == Smearing::Kind::kGaussian ? 0.5 * smear.width : 2.0 * smear.width;
    const double s2 = state.sigma * state.sigma;
    const double tau = std::abs(t1) / (2.0 * m * s2);
    const double spread = state.sigma * std::sqrt(1.0 + tau * tau);
    const double reach = state.max_abs_center() + 10.0 * spread + smear.support();
    const int half = static_cast<int>(std::ceil(reach / h));
    std::vector<double> partition;
    for (int j = -half; j <= half; ++j) {
        partition.push_back(j * h);
    }
    std::vector<double> positions = partition;
    positions.push_back(r2);
    const Grid1D grid = grid_for(state, smear, m, std::max(std::abs(t1), std::abs(t2)), positions);
    const double weight = h / smear.ell();

    AdditivityCheck out;
    for (double r1 : partition) {
        out.partition_sum += weight * n_time_probability_1d(state, smear, m, {{r1, t1}}, grid);
        out.marginal += weight * n_time_probability_1d(state, smear, m, {{r1, t1}, {r2, t2}}, grid);
    }
    out.direct = n_time_probability_1d(state, smear, m, {{r2, t2}}, grid);
    out.defect = out.marginal - out.direct;
    return out;
}

}  // namespace gravcat::density
