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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "gravcat/harness.h"
#include "gravcat/io.h"

namespace gravcat::harness {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("gravcat_harness_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t data_rows(const fs::path& csv) {
    std::ifstream in(csv);
    std::string line;
    std::size_t n = 0;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (!line.empty()) {
            ++n;
        }
    }
    return n;
}

int run_cli(const std::string& command, const fs::path& config, const fs::path& out,
            const std::vector<std::string>& extra = {}) {
    std::vector<std::string> args = {"gravcat", command, "--config", config.string(), "--out", out.string()};
    args.insert(args.end(), extra.begin(), extra.end());
    std::vector<char*> argv;
    for (auto& a : args) {
        argv.push_back(a.data());
    }
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

fs::path write_config(const fs::path& dir, const json& doc) {
    const fs::path p = dir / "config.json";
    std::ofstream(p) << doc.dump(2);
    return p;
}

json small_config(const std::string& command) {
    if (command == "g2s-correlations") {
        return {{"experiment", command}, {"g2s.nu", 1.0}, {"g2s.t_count", 5}, {"g2s.c_plus_re", 0.6},
                {"g2s.c_minus_re", 0.8}};
    }
    if (command == "force-trajectories") {
        return {{"experiment", command}, {"seed", 11}, {"force.N", 40}, {"force.count", 400}};
    }
    if (command == "jc-suite") {
        return {{"experiment", command}, {"jc.D", 32}, {"jc.g_over_omega", 0.5}, {"jc.nu_over_omega", 0.05},
                {"jc.samples", 9}};
    }
    return {{"experiment", command}, {"density.sigma", 0.5}, {"density.s_x", 0.3}, {"density.profile_count", 5}};
}

TEST(Io, Sha256KnownVector) {
    const fs::path dir = scratch("sha");
    std::ofstream(dir / "abc.txt", std::ios::binary) << "abc";
    EXPECT_EQ(io::sha256_file((dir / "abc.txt").string()),
              "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Io, SeventeenDigitsRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) {
        EXPECT_EQ(std::stod(io::format_double(v)), v);
    }
}

TEST(Config, RejectsUnknownKeysAndWrongTypes) {
    json doc = small_config("g2s-correlations");
    doc["g2s.bogus"] = 1;
    EXPECT_THROW(resolve_config("g2s-correlations", doc), ConfigError);
    doc = small_config("g2s-correlations");
    doc["g2s.t_count"] = "five";
    EXPECT_THROW(resolve_config("g2s-correlations", doc), ConfigError);
    doc = small_config("g2s-correlations");
    doc["g2s.nu"] = json::array({1.0});
    EXPECT_THROW(resolve_config("g2s-correlations", doc), ConfigError);
    doc = small_config("g2s-correlations");
    doc["experiment"] = "jc-suite";
    EXPECT_THROW(resolve_config("g2s-correlations", doc), ConfigError);
    EXPECT_THROW(resolve_config("no-such-command", json::object()), ConfigError);
}

TEST(Config, OverridesAndEcho) {
    const auto c = resolve_config("force-trajectories", small_config("force-trajectories"), 99, "elsewhere");
    EXPECT_EQ(c.seed, 99u);
    EXPECT_EQ(c.output_dir, "elsewhere");
    const json echo = c.echo();
    EXPECT_EQ(echo["seed"], 99);
    EXPECT_EQ(echo["force.N"], 40);
    EXPECT_TRUE(echo.contains("force.tau"));
}

TEST(Cli, EmptyTimeGridIsConfigErrorWithoutOutput) {
    const fs::path dir = scratch("empty");
    json doc = small_config("g2s-correlations");
    doc["g2s.t_count"] = 0;
    const fs::path out = dir / "out";
    EXPECT_EQ(run_cli("g2s-correlations", write_config(dir, doc), out), kExitConfig);
    EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, UnknownKeyAndMissingFile) {
    const fs::path dir = scratch("unknown");
    json doc = small_config("jc-suite");
    doc["jc.colour"] = "blue";
    EXPECT_EQ(run_cli("jc-suite", write_config(dir, doc), dir / "out"), kExitConfig);
    EXPECT_EQ(run_cli("jc-suite", dir / "missing.json", dir / "out"), kExitConfig);
    EXPECT_FALSE(fs::exists(dir / "out"));
}

TEST(Cli, InadequateTruncationIsRegimeRejection) {
    const fs::path dir = scratch("regime");
    json doc = small_config("jc-suite");
    doc["jc.D"] = 16;
    doc["jc.g_over_omega"] = 3.0;
    EXPECT_EQ(run_cli("jc-suite", write_config(dir, doc), dir / "out"), kExitRegime);
}

TEST(Cli, G2sRowCounts) {
    const fs::path dir = scratch("rows");
    const fs::path out = dir / "out";
    ASSERT_EQ(run_cli("g2s-correlations", write_config(dir, small_config("g2s-correlations")), out), kExitOk);
    const std::size_t t = 5;
    EXPECT_EQ(data_rows(out / "g2s_mean.csv"), 2 * t);
    EXPECT_EQ(data_rows(out / "g2s_corr.csv"), 4 * t * (t + 1) / 2);
}

class EveryCommand : public ::testing::TestWithParam<std::string> {};

TEST_P(EveryCommand, ManifestSidecarsAndDeterminism) {
    const std::string command = GetParam();
    const fs::path dir = scratch(command);
    const fs::path cfg = write_config(dir, small_config(command));
    ASSERT_EQ(run_cli(command, cfg, dir / "a", {"--seed", "5"}), kExitOk);
    ASSERT_EQ(run_cli(command, cfg, dir / "b", {"--seed", "5"}), kExitOk);

    json ma = json::parse(slurp(dir / "a" / "manifest.json"));
    json mb = json::parse(slurp(dir / "b" / "manifest.json"));
    EXPECT_EQ(ma["command"], command);
    EXPECT_EQ(ma["version"], kVersion);
    EXPECT_EQ(ma["config"]["seed"], 5);
    ASSERT_TRUE(ma.contains("wall_clock_seconds"));
    ASSERT_FALSE(ma["files"].empty());

    for (const auto& f : ma["files"]) {
        const std::string name = f["path"];
        const fs::path p = dir / "a" / name;
        ASSERT_TRUE(fs::exists(p)) << name;
        EXPECT_EQ(io::sha256_file(p.string()), f["sha256"]) << name;
        EXPECT_EQ(slurp(p), slurp(dir / "b" / name)) << name;
        if (p.extension() == ".csv") {
            const fs::path side = dir / "a" / (name + ".json");
            ASSERT_TRUE(fs::exists(side)) << name;
            const json meta = json::parse(slurp(side));
            EXPECT_EQ(meta["experiment"], command);
            EXPECT_EQ(meta["seed"], 5);
            EXPECT_FALSE(meta["columns"].empty());
        }
    }
    ma.erase("wall_clock_seconds");
    mb.erase("wall_clock_seconds");
    // Output directories differ only through the override echoed in config.
    ma["config"].erase("output_dir");
    mb["config"].erase("output_dir");
    EXPECT_EQ(ma, mb);
}

INSTANTIATE_TEST_SUITE_P(Commands, EveryCommand,
                         ::testing::Values("g2s-correlations", "force-trajectories", "jc-suite", "density-suite"),
                         [](const auto& info) {
                             std::string s = info.param;
                             for (auto& ch : s) {
                                 if (ch == '-') {
                                     ch = '_';
                                 }
                             }
                             return s;
                         });

TEST(Cli, SeedChangesStochasticOutput) {
    const fs::path dir = scratch("seeds");
    const fs::path cfg = write_config(dir, small_config("force-trajectories"));
    ASSERT_EQ(run_cli("force-trajectories", cfg, dir / "a", {"--seed", "1"}), kExitOk);
    ASSERT_EQ(run_cli("force-trajectories", cfg, dir / "b", {"--seed", "2"}), kExitOk);
    EXPECT_NE(slurp(dir / "a" / "force_mean.csv"), slurp(dir / "b" / "force_mean.csv"));
}

}  // namespace
}  // namespace gravcat::harness
