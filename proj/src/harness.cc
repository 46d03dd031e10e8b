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

#include "gravcat/harness.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <thread>

#include <CLI11.hpp>

#include "gravcat/common.h"
#include "gravcat/density.h"
#include "gravcat/force_measurement.h"
#include "gravcat/histories.h"
#include "gravcat/io.h"
#include "gravcat/jc_probe.h"
#include "gravcat/qubit.h"
#include "gravcat/wigner.h"

namespace gravcat::harness {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

enum class Kind { kReal, kInt, kString, kBool };

struct KeySpec {
    Kind kind;
    json fallback;  // null: optional without default
};

using Schema = std::map<std::string, KeySpec>;

const std::map<std::string, Schema>& schemas() {
    static const std::map<std::string, Schema> table = {
        {"g2s-correlations",
         {
             {"g2s.nu", {Kind::kReal, nullptr}},
             {"g2s.chi", {Kind::kReal, 0.0}},
             {"g2s.theta", {Kind::kReal, nullptr}},
             {"g2s.epsilon", {Kind::kReal, nullptr}},
             {"g2s.c_plus_re", {Kind::kReal, 1.0}},
             {"g2s.c_plus_im", {Kind::kReal, 0.0}},
             {"g2s.c_minus_re", {Kind::kReal, 0.0}},
             {"g2s.c_minus_im", {Kind::kReal, 0.0}},
             {"g2s.m", {Kind::kReal, 1.0}},
             {"g2s.ell", {Kind::kReal, 1.0}},
             {"g2s.t_min", {Kind::kReal, 0.0}},
             {"g2s.t_max", {Kind::kReal, 2.0 * kPi}},
             {"g2s.t_count", {Kind::kInt, 16}},
         }},
        {"force-trajectories",
         {
             {"force.nu", {Kind::kReal, 1.0}},
             {"force.tau", {Kind::kReal, 0.1}},
             {"force.N", {Kind::kInt, 200}},
             {"force.count", {Kind::kInt, 100000}},
             {"force.f0", {Kind::kReal, nullptr}},
             {"force.G", {Kind::kReal, 1.0}},
             {"force.m", {Kind::kReal, 1.0}},
             {"force.m0", {Kind::kReal, 1.0}},
             {"force.L", {Kind::kReal, 2.0}},
             {"force.y", {Kind::kReal, 0.0}},
             {"force.p_plus", {Kind::kReal, 1.0}},
             {"force.statistics", {Kind::kBool, true}},
             {"force.dump_trajectories", {Kind::kBool, false}},
             {"force.dump_count", {Kind::kInt, 100}},
             {"force.max_lag", {Kind::kInt, -1}},
         }},
        {"jc-suite",
         {
             {"jc.omega", {Kind::kReal, 1.0}},
             {"jc.g_over_omega", {Kind::kReal, nullptr}},
             {"jc.nu_over_omega", {Kind::kReal, 0.01}},
             {"jc.m0", {Kind::kReal, nullptr}},
             {"jc.f0", {Kind::kReal, nullptr}},
             {"jc.D", {Kind::kInt, 64}},
             {"jc.t_max", {Kind::kReal, nullptr}},
             {"jc.samples", {Kind::kInt, 101}},
             {"jc.threshold", {Kind::kReal, 1e-2}},
         }},
        {"density-suite",
         {
             {"density.state", {Kind::kString, "gaussian"}},
             {"density.sigma", {Kind::kReal, 1.0}},
             {"density.L", {Kind::kReal, 6.0}},
             {"density.m", {Kind::kReal, 1.0}},
             {"density.s_x", {Kind::kReal, 0.25}},
             {"density.smearing", {Kind::kString, "gaussian"}},
             {"density.t", {Kind::kReal, 1.0}},
             {"density.t2", {Kind::kReal, 2.0}},
             {"density.profile_count", {Kind::kInt, 41}},
             {"density.additivity_t1", {Kind::kReal, 0.5}},
             {"density.additivity_t2", {Kind::kReal, 1.0}},
         }},
    };
    return table;
}

json coerce(const std::string& key, const KeySpec& spec, const json& value) {
    switch (spec.kind) {
        case Kind::kReal:
            if (!value.is_number()) {
                throw ConfigError("config key '" + key + "' must be a number");
            }
            if (!std::isfinite(value.get<double>())) {
                throw ConfigError("config key '" + key + "' must be finite");
            }
            return value.get<double>();
        case Kind::kInt:
            if (value.is_number_integer()) {
                return value.get<long long>();
            }
            if (value.is_number_float()) {
                const double v = value.get<double>();
                if (std::floor(v) == v && std::abs(v) < 9e15) {
                    return static_cast<long long>(v);
                }
            }
            throw ConfigError("config key '" + key + "' must be an integer");
        case Kind::kString:
            if (!value.is_string()) {
                throw ConfigError("config key '" + key + "' must be a string");
            }
            return value;
        case Kind::kBool:
            if (!value.is_boolean()) {
                throw ConfigError("config key '" + key + "' must be true or false");
            }
            return value;
    }
    throw ConfigError("unreachable");
}

double real(const ExperimentConfig& c, const std::string& key) { return c.params.at(key).get<double>(); }
long long integer(const ExperimentConfig& c, const std::string& key) {
    return c.params.at(key).get<long long>();
}
bool has(const ExperimentConfig& c, const std::string& key) { return !c.params.at(key).is_null(); }

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw ConfigError(message);
    }
}

void check_invariant(bool ok, const std::string& message) {
    if (!ok) {
        throw InvariantError(message);
    }
}

// Cross-key checks and derived defaults; runs before any file is written.
void validate(ExperimentConfig& c) {
    if (c.experiment == "g2s-correlations") {
        const bool step_angle = has(c, "g2s.theta") || has(c, "g2s.epsilon");
        if (step_angle) {
            require(has(c, "g2s.theta") && has(c, "g2s.epsilon"),
                    "g2s.theta and g2s.epsilon must be given together");
            require(real(c, "g2s.epsilon") > 0.0, "g2s.epsilon must be positive");
            const double implied = 2.0 * real(c, "g2s.theta") / real(c, "g2s.epsilon");
            if (has(c, "g2s.nu")) {
                require(std::abs(implied - real(c, "g2s.nu")) <=
                            1e-12 * std::max(std::abs(implied), std::abs(real(c, "g2s.nu"))),
                        "g2s.nu disagrees with 2 g2s.theta / g2s.epsilon");
            } else {
                c.params["g2s.nu"] = implied;
            }
        } else if (!has(c, "g2s.nu")) {
            c.params["g2s.nu"] = 1.0;
        }
        require(real(c, "g2s.nu") >= 0.0, "g2s.nu must be non-negative");
        require(real(c, "g2s.m") > 0.0 && real(c, "g2s.ell") > 0.0, "g2s.m and g2s.ell must be positive");
        require(integer(c, "g2s.t_count") >= 1, "empty time grid: g2s.t_count must be at least 1");
        require(integer(c, "g2s.t_count") <= 2000, "g2s.t_count must not exceed 2000");
        require(real(c, "g2s.t_min") >= 0.0, "g2s.t_min must be non-negative");
        require(real(c, "g2s.t_max") >= real(c, "g2s.t_min"), "g2s.t_max must not precede g2s.t_min");
        const double norm = std::pow(real(c, "g2s.c_plus_re"), 2) + std::pow(real(c, "g2s.c_plus_im"), 2) +
                            std::pow(real(c, "g2s.c_minus_re"), 2) +
                            std::pow(real(c, "g2s.c_minus_im"), 2);
        require(std::abs(norm - 1.0) <= 1e-12, "g2s amplitudes must satisfy |c+|^2 + |c-|^2 = 1");
    } else if (c.experiment == "force-trajectories") {
        require(real(c, "force.nu") >= 0.0, "force.nu must be non-negative");
        require(real(c, "force.tau") > 0.0, "force.tau must be positive");
        require(integer(c, "force.N") >= 1 && integer(c, "force.N") <= 100000, "force.N must lie in [1, 100000]");
        require(integer(c, "force.count") >= 1, "force.count must be at least 1");
        if (c.params.at("force.statistics").get<bool>()) {
            require(integer(c, "force.count") >= 100, "statistics mode needs force.count >= 100");
        }
        const double p_plus = real(c, "force.p_plus");
        require(p_plus >= 0.0 && p_plus <= 1.0, "force.p_plus must lie in [0, 1]");
        require(integer(c, "force.dump_count") >= 0, "force.dump_count must be non-negative");
        require(integer(c, "force.max_lag") >= -1, "force.max_lag must be -1 (all) or non-negative");
        if (has(c, "force.f0")) {
            require(real(c, "force.f0") >= 0.0, "force.f0 must be non-negative");
        } else {
            force::ProbeGeometry geo{real(c, "force.G"), real(c, "force.m"), real(c, "force.m0"),
                                     real(c, "force.L"), real(c, "force.y")};
            try {
                c.params["force.f0"] = force::force_amplitude(geo);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }
    } else if (c.experiment == "jc-suite") {
        require(real(c, "jc.omega") > 0.0, "jc.omega must be positive");
        require(real(c, "jc.nu_over_omega") >= 0.0, "jc.nu_over_omega must be non-negative");
        require(integer(c, "jc.D") >= 2 && integer(c, "jc.D") <= 256, "jc.D must lie in [2, 256]");
        require(integer(c, "jc.samples") >= 2, "jc.samples must be at least 2");
        require(real(c, "jc.threshold") > 0.0, "jc.threshold must be positive");
        const bool probe = has(c, "jc.m0") || has(c, "jc.f0");
        if (probe) {
            require(has(c, "jc.m0") && has(c, "jc.f0"), "jc.m0 and jc.f0 must be given together");
            require(!has(c, "jc.g_over_omega"), "give either jc.g_over_omega or jc.m0/jc.f0, not both");
            require(real(c, "jc.m0") > 0.0, "jc.m0 must be positive");
            const double g = jc::jc_coupling(real(c, "jc.f0"), real(c, "jc.m0"), real(c, "jc.omega"));
            c.params["jc.g_over_omega"] = g / real(c, "jc.omega");
        } else if (!has(c, "jc.g_over_omega")) {
            c.params["jc.g_over_omega"] = 2.0;
        }
        if (!has(c, "jc.t_max")) {
            const double nu = real(c, "jc.nu_over_omega") * real(c, "jc.omega");
            c.params["jc.t_max"] = nu > 0.0 ? kPi / nu : 10.0 * kPi / real(c, "jc.omega");
        }
        require(real(c, "jc.t_max") > 0.0, "jc.t_max must be positive");
    } else if (c.experiment == "density-suite") {
        const std::string state = c.params.at("density.state").get<std::string>();
        require(state == "gaussian" || state == "cat", "density.state must be 'gaussian' or 'cat'");
        const std::string smear = c.params.at("density.smearing").get<std::string>();
        require(smear == "gaussian" || smear == "sharp", "density.smearing must be 'gaussian' or 'sharp'");
        require(real(c, "density.sigma") > 0.0, "density.sigma must be positive");
        require(real(c, "density.L") >= 0.0, "density.L must be non-negative");
        require(real(c, "density.m") > 0.0, "density.m must be positive");
        require(real(c, "density.s_x") > 0.0, "density.s_x must be positive");
        require(integer(c, "density.profile_count") >= 2 && integer(c, "density.profile_count") <= 10000,
                "density.profile_count must lie in [2, 10000]");
        require(real(c, "density.t") != real(c, "density.t2"), "density.t and density.t2 must differ");
        require(real(c, "density.additivity_t2") > real(c, "density.additivity_t1"),
                "density.additivity_t2 must exceed density.additivity_t1");
    }
}

// Writes a CSV and its sidecar, recording both in the result.
class Output {
  public:
    Output(const ExperimentConfig& config, RunResult& result)
        : config_(config), result_(result), dir_(config.output_dir) {
        fs::create_directories(dir_);
    }

    io::CsvWriter csv(const std::string& name, const std::vector<std::string>& header) {
        result_.files.push_back(name);
        return io::CsvWriter((dir_ / name).string(), header);
    }

    void sidecar(const std::string& name, const std::vector<std::string>& header,
                 const std::string& description, const json& extra = json::object()) {
        json meta = {{"file", name},
                     {"columns", header},
                     {"description", description},
                     {"experiment", config_.experiment},
                     {"seed", config_.seed},
                     {"parameters", config_.params},
                     {"number_format", "decimal, 17 significant digits"}};
        for (auto it = extra.begin(); it != extra.end(); ++it) {
            meta[it.key()] = it.value();
        }
        io::write_sidecar((dir_ / name).string(), meta);
        result_.files.push_back(name + ".json");
    }

    void json_file(const std::string& name, const json& doc) {
        io::write_json((dir_ / name).string(), doc);
        result_.files.push_back(name);
    }

  private:
    const ExperimentConfig& config_;
    RunResult& result_;
    fs::path dir_;
};

std::vector<double> time_grid(double lo, double hi, long long count) {
    std::vector<double> t(static_cast<std::size_t>(count));
    for (long long i = 0; i < count; ++i) {
        t[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return t;
}

}  // namespace

const std::vector<std::string>& commands() {
    static const std::vector<std::string> names = {"g2s-correlations", "force-trajectories",
                                                   "jc-suite", "density-suite"};
    return names;
}

json ExperimentConfig::echo() const {
    json out = {{"experiment", experiment}, {"seed", seed}, {"output_dir", output_dir}};
    for (auto it = params.begin(); it != params.end(); ++it) {
        out[it.key()] = it.value();
    }
    return out;
}

ExperimentConfig resolve_config(const std::string& command, const json& doc,
                                std::optional<std::uint64_t> seed_override,
                                std::optional<std::string> out_override) {
    const auto found = schemas().find(command);
    if (found == schemas().end()) {
        throw ConfigError("unknown command '" + command + "'");
    }
    if (!doc.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    const Schema& schema = found->second;
    ExperimentConfig c;
    c.experiment = command;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& key = it.key();
        if (key == "experiment") {
            if (!it->is_string() || it->get<std::string>() != command) {
                throw ConfigError("config 'experiment' does not match command '" + command + "'");
            }
        } else if (key == "seed") {
            if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0)) {
                throw ConfigError("config key 'seed' must be a non-negative integer");
            }
            c.seed = it->get<std::uint64_t>();
        } else if (key == "output_dir") {
            if (!it->is_string()) {
                throw ConfigError("config key 'output_dir' must be a string");
            }
            c.output_dir = it->get<std::string>();
        } else if (auto spec = schema.find(key); spec != schema.end()) {
            if (it->is_object() || it->is_array()) {
                throw ConfigError("config key '" + key + "' must be a scalar");
            }
            c.params[key] = coerce(key, spec->second, *it);
        } else {
            throw ConfigError("unknown config key '" + key + "' for command '" + command + "'");
        }
    }
    for (const auto& [key, spec] : schema) {
        if (!c.params.contains(key)) {
            c.params[key] = spec.fallback;
        }
    }
    if (seed_override) {
        c.seed = *seed_override;
    }
    if (out_override) {
        c.output_dir = *out_override;
    }
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::string& command, const std::string& path,
                             std::optional<std::uint64_t> seed_override,
                             std::optional<std::string> out_override) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file " + path);
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return resolve_config(command, doc, seed_override, out_override);
}

int worker_count() {
    if (const char* env = std::getenv("GRAVCAT_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) {
                return n;
            }
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

RunResult run_g2s_correlations(const ExperimentConfig& c) {
    qubit::TunnelingParams p;
    p.nu = real(c, "g2s.nu");
    p.chi = real(c, "g2s.chi");
    if (has(c, "g2s.theta")) {
        p.theta = real(c, "g2s.theta");
        p.epsilon = real(c, "g2s.epsilon");
    }
    p.validate();
    const qubit::G2SState s(Complex(real(c, "g2s.c_plus_re"), real(c, "g2s.c_plus_im")),
                            Complex(real(c, "g2s.c_minus_re"), real(c, "g2s.c_minus_im")));
    const qubit::SmearedDensityParams d{real(c, "g2s.m"), real(c, "g2s.ell")};
    d.validate();
    const auto times = time_grid(real(c, "g2s.t_min"), real(c, "g2s.t_max"), integer(c, "g2s.t_count"));
    const Region regions[] = {Region::kPlus, Region::kMinus};

    RunResult result;
    Output out(c, result);
    const std::vector<std::string> mean_cols = {"t", "a", "mean_density"};
    auto mean_csv = out.csv("g2s_mean.csv", mean_cols);
    for (double t : times) {
        double total = 0.0;
        for (Region a : regions) {
            const double v = qubit::g2s_mean_density(s, d, a, p, t);
            total += v;
            mean_csv.row({t, static_cast<double>(sign(a)), v});
        }
        check_invariant(std::abs(total - d.unit()) <= 1e-12 * std::max(1.0, d.unit()),
                        "mean densities do not sum to m / ell^3");
    }
    mean_csv.close();
    out.sidecar("g2s_mean.csv", mean_cols, "Mean smeared mass density of each region on the time grid",
                {{"rows", mean_csv.rows()}, {"units", "m / ell^3 scale, natural units"}});

    const std::vector<std::string> corr_cols = {"t1", "t2", "a1", "a2", "quantum_re", "quantum_im",
                                                "statistical"};
    auto corr_csv = out.csv("g2s_corr.csv", corr_cols);
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (std::size_t j = i; j < times.size(); ++j) {
            for (Region a1 : regions) {
                for (Region a2 : regions) {
                    const Complex q =
                        qubit::g2s_two_time_quantum_corr(s, d, a1, a2, p, times[i], times[j]);
                    const double st =
                        qubit::g2s_two_time_statistical_corr(s, d, a1, a2, p, times[i], times[j]);
                    corr_csv.row({times[i], times[j], static_cast<double>(sign(a1)),
                                  static_cast<double>(sign(a2)), q.real(), q.imag(), st});
                }
            }
        }
    }
    corr_csv.close();
    out.sidecar("g2s_corr.csv", corr_cols,
                "Two-time quantum and sequential-measurement correlators for t1 <= t2",
                {{"rows", corr_csv.rows()}});

    result.summary = {{"time_points", times.size()},
                      {"mean_rows", mean_csv.rows()},
                      {"corr_rows", corr_csv.rows()},
                      {"delta", s.delta()},
                      {"beta", s.beta(p.chi)},
                      {"gamma", s.gamma(p.chi)}};
    return result;
}

RunResult run_force_trajectories(const ExperimentConfig& c) {
    force::MeasurementSchedule sched;
    sched.nu = real(c, "force.nu");
    sched.tau = real(c, "force.tau");
    sched.N = static_cast<int>(integer(c, "force.N"));
    sched.validate();
    const double f0 = real(c, "force.f0");
    const auto count = static_cast<std::size_t>(integer(c, "force.count"));
    const bool statistics = c.params.at("force.statistics").get<bool>();
    const bool dump = c.params.at("force.dump_trajectories").get<bool>();
    const int threads = worker_count();

    const auto records = force::sample_trajectories(sched, count, c.seed, threads, real(c, "force.p_plus"));

    RunResult result;
    Output out(c, result);
    result.summary = {{"records", count},
                      {"gamma", sched.gamma()},
                      {"lambda", sched.lambda()},
                      {"f0", f0},
                      {"small_angle", sched.small_angle()}};

    if (statistics) {
        const auto stats = force::estimate_force_statistics(records, sched, f0,
                                                            static_cast<int>(integer(c, "force.max_lag")));
        check_invariant(std::abs(stats.corr[0] - f0 * f0) <= 1e-12 * std::max(1.0, f0 * f0),
                        "zero-lag correlation differs from f0^2");
        for (double v : stats.corr) {
            check_invariant(std::abs(v) <= f0 * f0 * (1.0 + 1e-12), "correlation outside [-f0^2, f0^2]");
        }

        const std::vector<std::string> mean_cols = {"step", "time", "mean", "stderr", "analytic_mean",
                                                    "discrete_mean_printed", "discrete_mean_born"};
        auto mean_csv = out.csv("force_mean.csv", mean_cols);
        std::vector<double> t_axis;
        std::vector<double> y;
        std::vector<double> se;
        for (int m = 0; m <= sched.N; ++m) {
            const double t = m * sched.tau;
            mean_csv.row({static_cast<double>(m), t, stats.mean[m], stats.mean_stderr[m],
                          force::analytic_force_mean(t, sched, f0), force::discrete_force_mean(m, sched, f0),
                          force::born_force_mean(m, sched, f0)});
            t_axis.push_back(t);
            y.push_back(-stats.mean[m]);
            se.push_back(stats.mean_stderr[m]);
        }
        mean_csv.close();
        out.sidecar("force_mean.csv", mean_cols, "Sample mean of the recorded force per step",
                    {{"rows", mean_csv.rows()}, {"initial_state", "|+> mixed with p_plus"}});

        const std::vector<std::string> corr_cols = {"lag_steps", "lag_time", "corr", "stderr",
                                                    "analytic_corr"};
        auto corr_csv = out.csv("force_statistics.csv", corr_cols);
        std::vector<double> lag_t;
        std::vector<double> cy;
        std::vector<double> cse;
        for (std::size_t k = 0; k < stats.corr.size(); ++k) {
            const double lt = static_cast<double>(k) * sched.tau;
            corr_csv.row({static_cast<double>(k), lt, stats.corr[k], stats.corr_stderr[k],
                          force::analytic_force_corr(0.0, lt, sched, f0)});
            lag_t.push_back(lt);
            cy.push_back(stats.corr[k]);
            cse.push_back(stats.corr_stderr[k]);
        }
        corr_csv.close();
        out.sidecar(
            "force_statistics.csv", corr_cols,
            "Two-time force correlation averaged over all pairs at each lag",
            {{"rows", corr_csv.rows()},
             {"estimator_caveat",
              "all-pairs average at fixed lag; exact only if the correlation depends on the lag alone"},
             {"nu", sched.nu}, {"tau", sched.tau}, {"N", sched.N}, {"gamma", sched.gamma()},
             {"f0", f0}, {"seed", c.seed}, {"count", count}});

        json fits = json::object();
        if (sched.nu > 0.0) {
            try {
                const auto mf = force::fit_exponential_rate(t_axis, y, se);
                fits["mean"] = {{"rate", mf.rate}, {"rate_stderr", mf.rate_stderr},
                                {"relative_error", mf.rate / sched.gamma() - 1.0}, {"points", mf.points}};
            } catch (const std::invalid_argument& e) {
                fits["mean"] = {{"error", e.what()}};
            }
            try {
                const auto cf = force::fit_exponential_rate(lag_t, cy, cse);
                fits["corr"] = {{"rate", cf.rate}, {"rate_stderr", cf.rate_stderr},
                                {"relative_error", cf.rate / sched.gamma() - 1.0}, {"points", cf.points}};
            } catch (const std::invalid_argument& e) {
                fits["corr"] = {{"error", e.what()}};
            }
        }
        result.summary["fitted_gamma"] = fits;
    }

    if (dump) {
        const std::size_t dump_count =
            std::min<std::size_t>(count, static_cast<std::size_t>(integer(c, "force.dump_count")));
        const std::vector<std::string> cols = {"trajectory_id", "step", "reading"};
        auto csv = out.csv("trajectories.csv", cols);
        for (std::size_t i = 0; i < dump_count; ++i) {
            for (int k = 0; k <= sched.N; ++k) {
                csv.row_text({std::to_string(records[i].index), std::to_string(k),
                              std::to_string(static_cast<int>(records[i].readings[k]))});
            }
        }
        csv.close();
        out.sidecar("trajectories.csv", cols, "Raw +-1 force readings (force = -f0 reading)",
                    {{"rows", csv.rows()}, {"trajectories", dump_count}});
    }
    return result;
}

RunResult run_jc_suite(const ExperimentConfig& c) {
    const double omega = real(c, "jc.omega");
    jc::JcParams p;
    p.omega = omega;
    p.g = real(c, "jc.g_over_omega") * omega;
    p.nu = real(c, "jc.nu_over_omega") * omega;
    if (has(c, "jc.m0")) {
        p.m0 = real(c, "jc.m0");
        p.f0 = real(c, "jc.f0");
    }
    p.validate();
    const fock::FockSpace space(static_cast<int>(integer(c, "jc.D")));
    const Complex z0 = p.zeta0();

    // The largest displacement used is 2 zeta0, both in zeta(t) and in O_t.
    if (!fock::truncation_adequate(space, 2.0 * z0)) {
        throw RegimeError("Fock dimension " + std::to_string(space.dim()) +
                          " is inadequate for |2 zeta0|^2 = " + io::format_double(std::norm(2.0 * z0)) +
                          "; need |2 zeta0|^2 <= D/4");
    }
    if (auto w = fock::truncation_warning(space, 2.0 * z0)) {
        throw RegimeError(w->message);
    }

    const double t_max = real(c, "jc.t_max");
    const auto samples = integer(c, "jc.samples");
    const long long steps_total = jc::minimum_steps(p, space, t_max);
    const long long per_sample = (steps_total + samples - 2) / (samples - 1);
    const double dt = t_max / static_cast<double>(per_sample * (samples - 1));

    const jc::CompositeState plus = jc::stationary_state(p, space, Region::kPlus);
    const Eigen::VectorXcd target = jc::stationary_state(p, space, Region::kMinus).vector();
    const Complex amp = 1.0 / std::sqrt(2.0);
    const jc::CompositeState cat = jc::CompositeState::Product(amp, amp, fock::number_state(space, 0));
    jc::PropagationSession transit(p, space, plus, dt);
    jc::PropagationSession cat_run(p, space, cat, dt);

    RunResult result;
    Output out(c, result);
    const std::vector<std::string> cols = {"t", "p_transition", "p_perturbative", "p_rabi", "purity",
                                           "re_zeta", "im_zeta"};
    auto csv = out.csv("jc_timeseries.csv", cols);
    double max_dev = 0.0;
    double max_norm_drift = 0.0;
    double min_purity = 1.0;
    for (long long i = 0; i < samples; ++i) {
        if (i > 0) {
            transit.step(per_sample);
            cat_run.step(per_sample);
        }
        const double t = transit.time();
        const double p_exact = std::norm(target.dot(transit.vector()));
        const Eigen::VectorXcd pert = jc::perturbative_full_propagator(p, space, t) * plus.vector();
        const double p_pert = std::norm(target.dot(pert));
        const double p_rabi = jc::rabi_probability(p, t);
        const double pur = jc::purity(jc::reduced_oscillator_state(cat_run.state()));
        const Complex z = jc::zeta_path(p, t);
        csv.row({t, p_exact, p_pert, p_rabi, pur, z.real(), z.imag()});
        max_dev = std::max(max_dev, std::abs(p_exact - p_rabi));
        max_norm_drift = std::max(max_norm_drift, std::abs(transit.vector().norm() - 1.0));
        min_purity = std::min(min_purity, pur);
    }
    csv.close();
    check_invariant(max_norm_drift <= 1e-9, "exact propagation lost normalization");
    out.sidecar("jc_timeseries.csv", cols,
                "Transition probability from |zeta0,+> to |-zeta0,-> (exact propagation, perturbative "
                "propagator, sin^2 nu t), purity of the oscillator for the balanced cat, zeta(t)",
                {{"rows", csv.rows()}, {"nu", p.nu}, {"omega", p.omega}, {"g", p.g}, {"D", space.dim()},
                 {"steps", per_sample * (samples - 1)}, {"dt", dt}, {"deterministic", true}});

    const auto dist = jc::distinguishability(p, real(c, "jc.threshold"));
    const auto zp = fock::coherent_state(space, z0);
    const auto zm = fock::coherent_state(space, -z0);
    json report = {{"zeta0_re", z0.real()},
                   {"zeta0_im", z0.imag()},
                   {"overlap", dist.overlap},
                   {"overlap_formula", "exp(-4 |zeta0|^2)"},
                   {"overlap_truncated", std::norm(zp.inner(zm))},
                   {"threshold", dist.threshold},
                   {"probe_ok", dist.probe_ok},
                   {"deep_strong", p.deep_strong()}};
    if (dist.omega_cubed) {
        report["omega_cubed"] = *dist.omega_cubed;
        report["force_scale"] = *dist.force_scale;
    }
    out.json_file("jc_distinguishability.json", report);

    result.summary = {{"max_abs_exact_minus_rabi", max_dev},
                      {"norm_drift", max_norm_drift},
                      {"min_purity", min_purity},
                      {"overlap", dist.overlap},
                      {"probe_ok", dist.probe_ok},
                      {"steps", per_sample * (samples - 1)}};
    return result;
}

RunResult run_density_suite(const ExperimentConfig& c) {
    using density::Vec3;
    const double sigma = real(c, "density.sigma");
    const double L = real(c, "density.L");
    const double m = real(c, "density.m");
    const bool is_cat = c.params.at("density.state").get<std::string>() == "cat";
    const density::Smearing smear = c.params.at("density.smearing").get<std::string>() == "sharp"
                                        ? density::Smearing::Sharp(real(c, "density.s_x"))
                                        : density::Smearing::Gaussian(real(c, "density.s_x"));
    density::SeparableState state;
    if (is_cat) {
        density::CatState cat;
        cat.sigma = sigma;
        cat.L = Vec3(L, 0.0, 0.0);
        state = cat.separable();
    } else {
        state = density::GaussianState{sigma, Vec3::Zero()}.separable();
    }

    // Everything that can be rejected is computed before the output directory exists.
    const density::SeparableWigner w0 = density::wigner_function(state);
    const density::PhaseSpaceGrid& g0 = w0.axis[0];
    double wigner_dev = 0.0;
    for (std::size_t i = 0; i < g0.x_axis.size(); ++i) {
        for (std::size_t j = 0; j < g0.p_axis.size(); ++j) {
            wigner_dev = std::max(wigner_dev, std::abs(g0.values(i, j) -
                                                       density::analytic_wigner(state.axis[0], g0.x_axis[i],
                                                                                g0.p_axis[j])));
        }
    }
    check_invariant(wigner_dev <= 1e-6, "numerical Wigner function deviates from the closed form");
    int fringe_sign_changes = 0;
    {
        double prev = 0.0;
        for (double p : g0.p_axis) {
            const double v = g0.at(0.0, p);
            if (std::abs(v) > 1e-6 && prev != 0.0 && (v > 0) != (prev > 0)) {
                ++fringe_sign_changes;
            }
            if (std::abs(v) > 1e-6) {
                prev = v;
            }
        }
    }

    RunResult result;
    Output out(c, result);
    const fs::path wigner_path = fs::path(c.output_dir) / "wigner.csv";
    density::export_wigner_grid(g0, state.axis[0], wigner_path.string());
    result.files.push_back("wigner.csv");
    {
        // The exporter's own sidecar carries the grid; the run metadata is
        // merged in so every table describes itself the same way.
        std::ifstream in(wigner_path.string() + ".json");
        const json grid_meta = json::parse(in);
        out.sidecar("wigner.csv", grid_meta["columns"].get<std::vector<std::string>>(),
                    "Wigner function of the x-axis initial state on a phase-space grid", grid_meta);
    }

    const long long count = integer(c, "density.profile_count");
    const double reach = 0.5 * L * (is_cat ? 1.0 : 0.0) + 3.0 * sigma;
    const std::vector<std::string> prof_cols = {"x", "psi0_sq", "static_mean", "phase_space_mean",
                                                "static_corr_equal_point", "C_derived", "C_printed"};
    auto prof = out.csv("density_profile.csv", prof_cols);
    double max_mean_dev = 0.0;
    for (double x : time_grid(-reach, reach, count)) {
        const Vec3 r(x, 0.0, 0.0);
        const double psi_sq = std::norm(state.value(r));
        const double static_mean = density::static_limit_mean(state, m, r);
        const double ps_mean = density::smeared_mean_phase_space(w0, r, 0.0, m);
        max_mean_dev = std::max(max_mean_dev, std::abs(ps_mean - static_mean) / m);
        prof.row({x, psi_sq, static_mean, ps_mean, density::static_limit_corr(state, smear, m, r, r),
                  density::fluctuation_ratio(state, smear, m, r, density::FluctuationFormula::kDerived),
                  density::fluctuation_ratio(state, smear, m, r, density::FluctuationFormula::kPrinted)});
    }
    prof.close();
    out.sidecar("density_profile.csv", prof_cols,
                "Static-limit mean density m|psi0|^2 against the Wigner-function mean at t = 0, the "
                "equal-point static correlation and the fluctuation ratio C along the x axis",
                {{"rows", prof.rows()}, {"C_printed", "comparison only; uses the printed exponent 3"}});

    const double t = real(c, "density.t");
    const double t2 = real(c, "density.t2");
    const std::vector<std::string> corr_cols = {"x",           "delta_corr",      "quadrature_corr",
                                                "decoherence_re", "decoherence_im", "noise_kernel"};
    auto corr = out.csv("density_corr.csv", corr_cols);
    const Vec3 r2 = Vec3::Zero();
    const double span = std::max(reach, 10.0 * smear.width);
    for (double x : time_grid(-span, span, count)) {
        const Vec3 r(x, 0.0, 0.0);
        const auto delta = density::smeared_corr_phase_space(w0, smear, r, t, r2, t2, m,
                                                             density::SmearedPath::kDelta);
        const auto quad = density::smeared_corr_phase_space(w0, smear, r, t, r2, t2, m,
                                                            density::SmearedPath::kQuadrature);
        const Complex dfun = density::decoherence_functional(state, smear, m, r, t, r2, t2);
        const auto point = density::density_corr(state, m, r, t, r2, t2);
        corr.row({x, delta.corr, quad.corr, dfun.real(), dfun.imag(), point.noise_kernel});
    }
    corr.close();
    out.sidecar("density_corr.csv", corr_cols,
                "Smeared two-point function (delta and quadrature paths), decoherence functional and the "
                "point noise kernel for r = (x, 0, 0) at t and r2 = 0 at t2",
                {{"rows", corr.rows()}, {"t", t}, {"t2", t2}});

    const double a1 = real(c, "density.additivity_t1");
    const double a2 = real(c, "density.additivity_t2");
    const std::vector<std::string> add_cols = {"t1", "t2", "r2", "partition_sum", "marginal", "direct",
                                               "defect"};
    auto add = out.csv("additivity.csv", add_cols);
    for (double rr : time_grid(-reach, reach, std::min<long long>(count, 9))) {
        const auto chk = density::additivity_defect_1d(state.axis[0], smear, m, a1, rr, a2);
        add.row({a1, a2, rr, chk.partition_sum, chk.marginal, chk.direct, chk.defect});
    }
    add.close();
    out.sidecar("additivity.csv", add_cols,
                "Kolmogorov additivity along the x axis: first reading summed over a partition against "
                "the single-time probability",
                {{"rows", add.rows()}});

    const std::vector<std::string> kol_cols = {"nu_tau", "n_steps", "defect"};
    auto kol = out.csv("g2s_kolmogorov.csv", kol_cols);
    for (double nt : {0.0, 0.4, 0.2, 0.1, 0.05}) {
        force::MeasurementSchedule sched;
        sched.tau = 1.0;
        sched.nu = nt;
        sched.N = 2;
        kol.row({nt, 2.0, force::kolmogorov_defect(sched, 2)});
    }
    kol.close();
    out.sidecar("g2s_kolmogorov.csv", kol_cols,
                "Two-level Kolmogorov defect for projective readings at tau and 2 tau from |+>",
                {{"rows", kol.rows()}});

    result.summary = {{"wigner_max_abs_deviation", wigner_dev},
                      {"wigner_normalization", g0.normalization},
                      {"fringe_sign_changes_at_x0", fringe_sign_changes},
                      {"static_mean_max_deviation", max_mean_dev}};
    return result;
}

int run_command(const ExperimentConfig& config, std::ostream& log) {
    static const std::map<std::string, std::function<RunResult(const ExperimentConfig&)>> table = {
        {"g2s-correlations", run_g2s_correlations},
        {"force-trajectories", run_force_trajectories},
        {"jc-suite", run_jc_suite},
        {"density-suite", run_density_suite},
    };
    const auto entry = table.find(config.experiment);
    if (entry == table.end()) {
        log << "error: unknown command '" << config.experiment << "'\n";
        return kExitConfig;
    }
    const auto start = std::chrono::steady_clock::now();
    RunResult result;
    try {
        result = entry->second(config);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const RegimeError& e) {
        log << "regime rejected: " << e.what() << '\n';
        return kExitRegime;
    } catch (const InvariantError& e) {
        log << "invariant failure: " << e.what() << '\n';
        return kExitInternal;
    } catch (const std::exception& e) {
        log << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json files = json::array();
    for (const auto& name : result.files) {
        const std::string path = (fs::path(config.output_dir) / name).string();
        files.push_back({{"path", name}, {"sha256", io::sha256_file(path)}});
    }
    const json manifest = {{"tool", "gravcat"},
                           {"version", kVersion},
                           {"command", config.experiment},
                           {"config", config.echo()},
                           {"files", files},
                           {"summary", result.summary},
                           {"wall_clock_seconds", seconds}};
    io::write_json((fs::path(config.output_dir) / "manifest.json").string(), manifest);
    log << config.experiment << ": wrote " << result.files.size() << " files to " << config.output_dir
        << '\n';
    return kExitOk;
}

int cli_main(int argc, char** argv) {
    CLI::App app{"gravcat: gravitational cat-state correlation simulator"};
    std::string command;
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    app.add_option("command", command, "Experiment to run")
        ->required()
        ->check(CLI::IsMember(commands()));
    app.add_option("--config", config_path, "Flat JSON config file")->required();
    auto* seed_opt = app.add_option("--seed", seed, "Override the config seed");
    auto* out_opt = app.add_option("--out", out_dir, "Override the output directory");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }
    ExperimentConfig config;
    try {
        config = load_config(command, config_path,
                             seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt,
                             out_opt->count() ? std::optional<std::string>(out_dir) : std::nullopt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    return run_command(config, std::cerr);
}

}  // namespace gravcat::harness
