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

#ifndef GRAVCAT_HISTORIES_H
#define GRAVCAT_HISTORIES_H

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gravcat/density.h"

namespace gravcat::density {

/// Uniform periodic grid x_i = x_min + i dx, i < n.
struct Grid1D {
    double x_min = 0.0;
    double dx = 1.0;
    int n = 2;

    double x(int i) const { return x_min + dx * i; }
    double x_max() const { return x(n - 1); }
};

/// Grid that holds `state` up to time t_max (mass m), the points in
/// `positions`, and resolves both sigma and the sampling width.
Grid1D grid_for(const WavePacket1D& state, const Smearing& smear, double m, double t_max,
                const std::vector<double>& positions);

/// Free evolution by FFT: psi_k -> psi_k exp(-i k^2 dt / (2 m)).
class FreeEvolver {
  public:
    FreeEvolver(Grid1D grid, double m);

    /// Throws RegimeError when amplitude reaches the grid edges.
    Eigen::VectorXcd evolve(const Eigen::VectorXcd& psi, double dt) const;
    const Grid1D& grid() const { return grid_; }

  private:
    Grid1D grid_;
    double m_;
    std::vector<double> k_;
};

Eigen::VectorXcd sample_state(const WavePacket1D& state, const Grid1D& grid, double t, double m);

/// <phi| P_{r t} P_{r2 t2} |phi> along one axis. Gaussian sampling evolves on
/// the grid; box sampling integrates the free kernel between the boxes
/// directly, since the box edges feed momentum tails that no finite grid holds.
Complex decoherence_functional_1d(const WavePacket1D& state, const Smearing& smear, double m,
                                  double r, double t, double r2, double t2, const Grid1D& grid);

/// Three-dimensional value as the product over the state's frame axes.
Complex decoherence_functional(const SeparableState& state, const Smearing& smear, double m,
                               const Vec3& r, double t, const Vec3& r2, double t2);

/// || sqrt(P_{r_n}) U ... sqrt(P_{r_1}) U(t_1) phi ||^2 for strictly increasing times.
double n_time_probability_1d(const WavePacket1D& state, const Smearing& smear, double m,
                             const std::vector<std::pair<double, double>>& events,
                             const Grid1D& grid);

double n_time_probability(const SeparableState& state, const Smearing& smear, double m,
                          const std::vector<std::pair<Vec3, double>>& events);

struct AdditivityCheck {
    double partition_sum = 0.0;  // sum_j (h/ell) P1(r_j, t1)
    double marginal = 0.0;       // sum_j (h/ell) P2(r_j, t1; r2, t2)
    double direct = 0.0;         // P1(r2, t2)
    double defect = 0.0;         // marginal - direct
};

/// Sums the first reading over a partition of spacing h: s_x/2 for Gaussian
/// sampling, the box width for sharp sampling.
AdditivityCheck additivity_defect_1d(const WavePacket1D& state, const Smearing& smear, double m,
                                     double t1, double r2, double t2);

}  // namespace gravcat::density

#endif  // GRAVCAT_HISTORIES_H
