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

#include "gravcat/force_measurement.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>

#include "gravcat/rng.h"

namespace gravcat::force {
namespace {

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double quarter_sin_sq(const MeasurementSchedule& sched) {
    const double s = std::sin(sched.nu * sched.tau);
    return 0.25 * s * s;
}

double cos_half_sq(const MeasurementSchedule& sched) {
    const double c = std::cos(0.5 * sched.nu * sched.tau);
    return c * c;
}

void require_steps(int m) {
    if (m < 0) {
        throw std::invalid_argument("step count must be non-negative");
    }
}

}  // namespace

void ProbeGeometry::validate() const {
    if (!(G > 0.0) || !(m > 0.0) || !(m0 > 0.0) || !(L > 0.0) || !(y >= 0.0)) {
        throw std::invalid_argument("ProbeGeometry: G, m, m0, L must be positive and y >= 0");
    }
}

double force_amplitude(const ProbeGeometry& geo) {
    geo.validate();
    const double r2 = geo.y * geo.y + 0.25 * geo.L * geo.L;
    return geo.G * geo.m * geo.m0 * geo.L / (2.0 * r2 * std::sqrt(r2));
}

void MeasurementSchedule::validate() const {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw std::invalid_argument("MeasurementSchedule: tau must be positive");
    }
    if (N < 1) {
        throw std::invalid_argument("MeasurementSchedule: N must be at least 1");
    }
    if (!(nu >= 0.0) || !std::isfinite(nu)) {
        throw std::invalid_argument("MeasurementSchedule: nu must be non-negative");
    }
}

double MeasurementSchedule::flip_probability() const {
    const double s = std::sin(0.5 * nu * tau);
    return s * s;
}

double MeasurementSchedule::stay_probability() const {
    const double c = std::cos(0.5 * nu * tau);
    return c * c;
}

TrajectoryRecord TrajectoryRecord::FromReadings(std::vector<std::int8_t> readings,
                                                std::uint64_t seed, std::uint64_t index) {
    TrajectoryRecord rec;
    for (std::size_t i = 0; i < readings.size(); ++i) {
        if (readings[i] != 1 && readings[i] != -1) {
            throw std::invalid_argument("TrajectoryRecord: readings must be +1 or -1");
        }
        if (i > 0 && readings[i] != readings[i - 1]) {
            ++rec.jump_count;
        }
    }
    rec.readings = std::move(readings);
    rec.seed = seed;
    rec.index = index;
    return rec;
}

double sequence_probability(const TrajectoryRecord& rec, const MeasurementSchedule& sched,
                            ProbabilityLaw law) {
    sched.validate();
    if (rec.readings.size() != static_cast<std::size_t>(sched.N) + 1) {
        throw std::invalid_argument("sequence_probability: record length must be N + 1");
    }
    if (rec.readings.front() != 1) {
        throw std::invalid_argument("sequence_probability: records start from |+>, reading +1");
    }
    const int n = rec.jump_count;
    const int stays = sched.N - n;
    if (law == ProbabilityLaw::kSmallAngle) {
        const double lam = sched.lambda();
        return std::pow(lam, n) * std::exp(-lam * stays);
    }
    return std::pow(sched.stay_probability(), stays) * std::pow(sched.flip_probability(), n);
}

double conditional_g(Region a2, Region a1, int m_steps, const MeasurementSchedule& sched) {
    require_steps(m_steps);
    const double x = quarter_sin_sq(sched);
    const double pre = 0.5 * std::pow(cos_half_sq(sched), m_steps);
    const double up = std::pow(1.0 + x, m_steps);
    const double down = std::pow(1.0 - x, m_steps);
    return a1 == a2 ? pre * (up + down) : pre * (up - down);
}

double conditional_g_series(Region a2, Region a1, int m_steps, const MeasurementSchedule& sched) {
    require_steps(m_steps);
    const double x = quarter_sin_sq(sched);
    const double log_c = m_steps * std::log(cos_half_sq(sched));
    const int parity = a1 == a2 ? 0 : 1;
    double sum = 0.0;
    for (int k = parity; k <= m_steps; k += 2) {
        if (k == 0) {
            sum += std::exp(log_c);
        } else if (x > 0.0) {
            sum += std::exp(log_c + log_binomial(m_steps, k) + k * std::log(x));
        }
    }
    return sum;
}

double transition_probability(Region a2, Region a1, int m_steps,
                              const MeasurementSchedule& sched) {
    require_steps(m_steps);
    const double r = std::pow(std::cos(sched.nu * sched.tau), m_steps);
    return 0.5 * (1.0 + sign(a1) * sign(a2) * r);
}

double discrete_force_mean(int m, const MeasurementSchedule& sched, double f0) {
    require_steps(m);
    return -f0 * std::pow(cos_half_sq(sched) * (1.0 - quarter_sin_sq(sched)), m);
}

double discrete_force_corr(int m1, int m2, const MeasurementSchedule& sched, double f0) {
    require_steps(m1);
    if (m2 < m1) {
        throw std::invalid_argument("discrete_force_corr: requires m1 <= m2");
    }
    const double x = quarter_sin_sq(sched);
    return f0 * f0 * std::pow(cos_half_sq(sched), m2) * std::pow(1.0 - x, m2 - m1) *
           std::pow(1.0 + x, m1);
}

double born_force_mean(int m, const MeasurementSchedule& sched, double f0) {
    require_steps(m);
    return -f0 * std::pow(std::cos(sched.nu * sched.tau), m);
}

double born_force_corr(int m1, int m2, const MeasurementSchedule& sched, double f0) {
    require_steps(m1);
    if (m2 < m1) {
        throw std::invalid_argument("born_force_corr: requires m1 <= m2");
    }
    return f0 * f0 * std::pow(std::cos(sched.nu * sched.tau), m2 - m1);
}

double analytic_force_mean(double t, const MeasurementSchedule& sched, double f0) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument("analytic_force_mean: t must be non-negative");
    }
    return -f0 * std::exp(-sched.gamma() * t);
}

double analytic_force_corr(double t1, double t2, const MeasurementSchedule& sched, double f0) {
    if (!(t1 >= 0.0) || !(t2 >= t1)) {
        throw std::invalid_argument("analytic_force_corr: requires 0 <= t1 <= t2");
    }
    return f0 * f0 * std::exp(-sched.gamma() * (t2 - t1));
}

std::vector<TrajectoryRecord> sample_trajectories(const MeasurementSchedule& sched,
                                                  std::size_t count, std::uint64_t seed,
                                                  int threads, double p_plus) {
    sched.validate();
    if (count < 1) {
        throw std::invalid_argument("sample_trajectories: count must be at least 1");
    }
    if (!(p_plus >= 0.0 && p_plus <= 1.0)) {
        throw std::invalid_argument("sample_trajectories: p_plus must lie in [0, 1]");
    }
    const double flip = sched.flip_probability();
    const std::size_t len = static_cast<std::size_t>(sched.N) + 1;
    std::vector<TrajectoryRecord> out(count);

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            auto gen = stream_for(seed, i);
            TrajectoryRecord& rec = out[i];
            rec.seed = seed;
            rec.index = i;
            rec.readings.resize(len);
            std::int8_t current = 1;
            if (p_plus < 1.0) {
                current = uniform01(gen) < p_plus ? 1 : -1;
            }
            rec.readings[0] = current;
            int jumps = 0;
            for (std::size_t k = 1; k < len; ++k) {
                if (uniform01(gen) < flip) {
                    current = static_cast<std::int8_t>(-current);
                    ++jumps;
                }
                rec.readings[k] = current;
            }
            rec.jump_count = jumps;
        }
    };

    const std::size_t workers =
        std::clamp<std::size_t>(threads < 1 ? 1 : static_cast<std::size_t>(threads), 1, count);
    if (workers == 1) {
        work(0, count);
        return out;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin < end) {
            pool.emplace_back(work, begin, end);
        }
    }
    for (auto& t : pool) {
        t.join();
    }
    return out;
}

ForceStatistics estimate_force_statistics(const std::vector<TrajectoryRecord>& records,
                                          const MeasurementSchedule& sched, double f0,
                                          int max_lag) {
    sched.validate();
    if (records.empty()) {
        throw std::invalid_argument("estimate_force_statistics: no records");
    }
    const int len = sched.N + 1;
    const int lags = (max_lag < 0 || max_lag > sched.N) ? sched.N : max_lag;
    for (const auto& rec : records) {
        if (static_cast<int>(rec.readings.size()) != len) {
            throw std::invalid_argument("estimate_force_statistics: record length must be N + 1");
        }
    }
    const double count = static_cast<double>(records.size());

    std::vector<long long> reading_sum(len, 0);
    std::vector<double> lag_sum(lags + 1, 0.0);
    std::vector<double> lag_sq(lags + 1, 0.0);
    std::vector<int> buffer(len);
    for (const auto& rec : records) {
        for (int i = 0; i < len; ++i) {
            buffer[i] = rec.readings[i];
            reading_sum[i] += rec.readings[i];
        }
        for (int k = 0; k <= lags; ++k) {
            int acc = 0;
            const int pairs = len - k;
            for (int i = 0; i < pairs; ++i) {
                acc += buffer[i] * buffer[i + k];
            }
            const double v = static_cast<double>(acc) / pairs;
            lag_sum[k] += v;
            lag_sq[k] += v * v;
        }
    }

    ForceStatistics stats;
    stats.records = records.size();
    stats.mean.resize(len);
    stats.mean_stderr.resize(len);
    for (int i = 0; i < len; ++i) {
        const double a = static_cast<double>(reading_sum[i]) / count;
        stats.mean[i] = -f0 * a;
        const double var = count > 1 ? std::max(0.0, (1.0 - a * a) * count / (count - 1)) : 0.0;
        stats.mean_stderr[i] = std::abs(f0) * std::sqrt(var / count);
    }
    stats.corr.resize(lags + 1);
    stats.corr_stderr.resize(lags + 1);
    for (int k = 0; k <= lags; ++k) {
        const double avg = lag_sum[k] / count;
        const double var =
            count > 1 ? std::max(0.0, (lag_sq[k] - count * avg * avg) / (count - 1)) : 0.0;
        stats.corr[k] = f0 * f0 * avg;
        stats.corr_stderr[k] = f0 * f0 * std::sqrt(var / count);
    }
    return stats;
}

ExponentialFit fit_exponential_rate(const std::vector<double>& t, const std::vector<double>& y,
                                    const std::vector<double>& stderr_y) {
    if (t.size() != y.size() || t.size() != stderr_y.size()) {
        throw std::invalid_argument("fit_exponential_rate: series lengths differ");
    }
    std::vector<double> xs;
    std::vector<double> ls;
    std::vector<double> ws;
    double max_weight = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(y[i] > 3.0 * stderr_y[i]) || !(y[i] > 0.0)) {
            continue;
        }
        xs.push_back(t[i]);
        ls.push_back(std::log(y[i]));
        const double w = stderr_y[i] > 0.0 ? std::pow(y[i] / stderr_y[i], 2) : 0.0;
        ws.push_back(w);
        max_weight = std::max(max_weight, w);
    }
    // Exactly known points (zero standard error) get the largest finite weight.
    for (double& w : ws) {
        if (w == 0.0) {
            w = max_weight > 0.0 ? max_weight : 1.0;
        }
    }
    if (xs.size() < 2) {
        throw std::invalid_argument("fit_exponential_rate: fewer than two usable points");
    }
    double sw = 0.0, sx = 0.0, sl = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sw += ws[i];
        sx += ws[i] * xs[i];
        sl += ws[i] * ls[i];
    }
    const double xbar = sx / sw;
    const double lbar = sl / sw;
    double sxx = 0.0, sxl = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += ws[i] * (xs[i] - xbar) * (xs[i] - xbar);
        sxl += ws[i] * (xs[i] - xbar) * (ls[i] - lbar);
    }
    if (!(sxx > 0.0)) {
        throw std::invalid_argument("fit_exponential_rate: abscissae are degenerate");
    }
    ExponentialFit fit;
    const double slope = sxl / sxx;
    fit.rate = -slope;
    fit.amplitude = std::exp(lbar - slope * xbar);
    fit.rate_stderr = 1.0 / std::sqrt(sxx);
    fit.points = static_cast<int>(xs.size());
    return fit;
}

double kolmogorov_defect(const MeasurementSchedule& sched, int n_steps) {
    sched.validate();
    if (n_steps < 2 || n_steps > 24) {
        throw std::invalid_argument("kolmogorov_defect: n_steps must lie in [2, 24]");
    }
    const double c = std::cos(0.5 * sched.nu * sched.tau);
    const double s = std::sin(0.5 * sched.nu * sched.tau);
    Eigen::Matrix2cd u;
    u << c, s, -s, c;
    const Eigen::Vector2cd plus(1.0, 0.0);

    // Probability of `later` outcomes at steps 2..n, with or without a reading at step 1.
    auto history = [&](const Eigen::Vector2cd& start, unsigned later) {
        Eigen::Vector2cd psi = start;
        for (int step = 2; step <= n_steps; ++step) {
            psi = u * psi;
            const int bit = (later >> (step - 2)) & 1u;
            psi(bit == 0 ? 1 : 0) = 0.0;
        }
        return psi.squaredNorm();
    };

    const Eigen::Vector2cd after_first = u * plus;
    double worst = 0.0;
    for (unsigned later = 0; later < (1u << (n_steps - 1)); ++later) {
        const double unread = history(after_first, later);
        double read = 0.0;
        for (int a1 = 0; a1 < 2; ++a1) {
            Eigen::Vector2cd projected = after_first;
            projected(a1 == 0 ? 1 : 0) = 0.0;
            read += history(projected, later);
        }
        worst = std::max(worst, std::abs(read - unread));
    }
    return worst;
}

}  // namespace gravcat::force
