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

#ifndef GRAVCAT_FORCE_MEASUREMENT_H
#define GRAVCAT_FORCE_MEASUREMENT_H

#include <cstdint>
#include <vector>

#include "gravcat/common.h"

namespace gravcat::force {

/// Two minima at (+-L/2, 0, 0), probe at (0, y, 0).
struct ProbeGeometry {
    double G = 1.0;
    double m = 1.0;
    double m0 = 1.0;
    double L = 1.0;
    double y = 0.0;

    void validate() const;
};

/// f0 = G m m0 L / (2 (y^2 + L^2/4)^{3/2}); the force on the probe is -f0 a.
double force_amplitude(const ProbeGeometry& geo);

/// Readings at times 0, tau, ..., N tau.
struct MeasurementSchedule {
    double tau = 1.0;
    int N = 1;
    double nu = 0.0;

    void validate() const;

    double lambda() const { return 0.25 * nu * nu * tau * tau; }  // per step
    double gamma() const { return 0.5 * nu * nu * tau; }           // rate
    double flip_probability() const;
    double stay_probability() const;
    bool small_angle() const { return nu * tau < 0.3; }
};

struct TrajectoryRecord {
    std::vector<std::int8_t> readings;
    int jump_count = 0;
    std::uint64_t seed = 0;
    std::uint64_t index = 0;

    /// Builds a record and counts its sign changes.
    static TrajectoryRecord FromReadings(std::vector<std::int8_t> readings,
                                         std::uint64_t seed = 0, std::uint64_t index = 0);
};

enum class ProbabilityLaw { kExact, kSmallAngle };

/// cos^2(nu tau/2)^(N-n) sin^2(nu tau/2)^n, or lambda^n e^{-lambda (N-n)}.
double sequence_probability(const TrajectoryRecord& rec, const MeasurementSchedule& sched,
                            ProbabilityLaw law = ProbabilityLaw::kExact);

/// Closed form of the conditional probability g(a2, a1; m) as printed in the
/// jump-count derivation, with x = sin^2(nu tau)/4:
/// (1/2) cos^2(nu tau/2)^m [(1 + x)^m +- (1 - x)^m].
double conditional_g(Region a2, Region a1, int m_steps, const MeasurementSchedule& sched);

/// The same quantity as the printed binomial sums over even and odd jump counts.
double conditional_g_series(Region a2, Region a1, int m_steps, const MeasurementSchedule& sched);

/// Born-rule conditional probability for projective readings separated by
/// m steps: (1 + a1 a2 cos^m(nu tau)) / 2.
double transition_probability(Region a2, Region a1, int m_steps,
                              const MeasurementSchedule& sched);

/// Printed discrete forms, initial state |+>.
double discrete_force_mean(int m, const MeasurementSchedule& sched, double f0);
double discrete_force_corr(int m1, int m2, const MeasurementSchedule& sched, double f0);

/// Born-rule discrete forms: -f0 cos^m(nu tau) and f0^2 cos^{m2-m1}(nu tau).
double born_force_mean(int m, const MeasurementSchedule& sched, double f0);
double born_force_corr(int m1, int m2, const MeasurementSchedule& sched, double f0);

/// Continuum limit: -f0 e^{-Gamma t} and f0^2 e^{-Gamma (t2 - t1)}.
double analytic_force_mean(double t, const MeasurementSchedule& sched, double f0);
double analytic_force_corr(double t1, double t2, const MeasurementSchedule& sched, double f0);

/// Independent records; record i draws from a stream keyed on (seed, i), so the
/// output does not depend on `threads`. The first reading is +1 with
/// probability p_plus (1 for the pure |+> start).
std::vector<TrajectoryRecord> sample_trajectories(const MeasurementSchedule& sched,
                                                  std::size_t count, std::uint64_t seed,
                                                  int threads = 1, double p_plus = 1.0);

struct ForceStatistics {
    std::vector<double> mean;         // <F(m tau)>, m = 0..N
    std::vector<double> mean_stderr;
    std::vector<double> corr;         // f0^2 <a_i a_{i+k}>, all pairs at lag k
    std::vector<double> corr_stderr;  // across records
    std::size_t records = 0;
};

ForceStatistics estimate_force_statistics(const std::vector<TrajectoryRecord>& records,
                                          const MeasurementSchedule& sched, double f0,
                                          int max_lag = -1);

struct ExponentialFit {
    double rate = 0.0;
    double rate_stderr = 0.0;
    double amplitude = 0.0;
    int points = 0;
};

/// Weighted least squares of log(y) against t; points with y <= 3 stderr are dropped.
ExponentialFit fit_exponential_rate(const std::vector<double>& t, const std::vector<double>& y,
                                    const std::vector<double>& stderr_y);

/// Projective readings at t_i = i tau (i = 1..n) on |+>. Returns the largest
/// violation |sum_{a1} P_n - P_{n-1}| over the later outcomes.
double kolmogorov_defect(const MeasurementSchedule& sched, int n_steps);

}  // namespace gravcat::force

#endif  // GRAVCAT_FORCE_MEASUREMENT_H
