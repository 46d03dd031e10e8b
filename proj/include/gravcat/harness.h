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

#ifndef GRAVCAT_HARNESS_H
#define GRAVCAT_HARNESS_H

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace gravcat::harness {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitRegime = 3,
    kExitInternal = 4,
};

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A computed result broke an invariant the run checks before writing.
class InvariantError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kVersion = "0.1.0";

/// The commands, in CLI spelling.
const std::vector<std::string>& commands();

/// Parameters with every default filled in. `params` holds only the
/// namespaced keys of the command.
struct ExperimentConfig {
    std::string experiment;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::string output_dir = "out";

    nlohmann::json echo() const;
};

/// Validates a parsed config document against the command's schema:
/// unknown keys, wrong types and out-of-range values raise ConfigError.
ExperimentConfig resolve_config(const std::string& command, const nlohmann::json& doc,
                                std::optional<std::uint64_t> seed_override = std::nullopt,
                                std::optional<std::string> out_override = std::nullopt);

ExperimentConfig load_config(const std::string& command, const std::string& path,
                             std::optional<std::uint64_t> seed_override = std::nullopt,
                             std::optional<std::string> out_override = std::nullopt);

struct RunResult {
    std::vector<std::string> files;  // relative to output_dir, in write order
    nlohmann::json summary = nlohmann::json::object();
};

RunResult run_g2s_correlations(const ExperimentConfig& config);
RunResult run_force_trajectories(const ExperimentConfig& config);
RunResult run_jc_suite(const ExperimentConfig& config);
RunResult run_density_suite(const ExperimentConfig& config);

/// Runs the command and writes manifest.json. Returns the process exit code;
/// diagnostics go to `log`.
int run_command(const ExperimentConfig& config, std::ostream& log);

/// Worker count: GRAVCAT_THREADS if set and positive, else the hardware count.
int worker_count();

/// Entry point shared by the CLI binary and the tests.
int cli_main(int argc, char** argv);

}  // namespace gravcat::harness

#endif  // GRAVCAT_HARNESS_H
