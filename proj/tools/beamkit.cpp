// SPDX-License-Identifier: Apache-2.0
//
// beamkit: hybrid beamforming for THz ultra-massive MIMO radar-communications
// Copyright (C) 2026 The beamkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// beamkit command line: run experiment scenarios and validate configs.

#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "beamkit/config.hpp"
#include "beamkit/experiments.hpp"

namespace
{
    std::string join(const std::vector<std::string> &items, const std::string &sep)
    {
        std::string out;
        for (std::size_t i = 0; i < items.size(); ++i)
            out += (i ? sep : "") + items[i];
        return out;
    }

    int fail(const std::string &msg)
    {
        std::cerr << "beamkit: error: " << msg << "\n";
        return 1;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"THz GoSA hybrid beamforming experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string scenario;
    std::string seed;
    std::string trials;
    std::string out_dir;
    std::vector<std::string> overrides;
    const unsigned hw = std::thread::hardware_concurrency();
    int jobs = hw ? int(hw) : 1;

    auto *run = app.add_subcommand("run", "run one scenario and write CSV curves");
    run->add_option("--config", config_path, "config file")->required();
    run->add_option("--scenario", scenario, "scenario name (overrides the config)");
    run->add_option("--seed", seed, "base seed");
    run->add_option("--trials", trials, "Monte-Carlo trials");
    run->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    run->add_option("--out-dir", out_dir, "output directory (default $BEAMKIT_OUT, then ./results)");
    run->add_option("--set", overrides, "extra key=value override, repeatable");

    auto *check = app.add_subcommand("validate", "report every violated constraint without running");
    check->add_option("--config", config_path, "config file")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e);
    }

    try
    {
        beamkit::ConfigMap map = beamkit::ConfigMap::load(config_path);
        if (!scenario.empty())
            map.set("scenario", scenario);
        if (!seed.empty())
            map.set("seed", seed);
        if (!trials.empty())
            map.set("trials", trials);
        for (const std::string &kv : overrides)
        {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                return fail("--set expects key=value, got '" + kv + "'");
            map.set(kv.substr(0, eq), kv.substr(eq + 1));
        }

        std::vector<std::string> errors;
        const beamkit::ExperimentConfig cfg = beamkit::build_config(map, errors);
        for (const std::string &v : beamkit::validate(cfg))
            errors.push_back(v);

        if (check->parsed())
        {
            for (const std::string &e : errors)
                std::cout << e << "\n";
            if (errors.empty())
                std::cout << "ok\n";
            return errors.empty() ? 0 : 1;
        }

        if (!errors.empty())
            return fail(config_path + ": " + join(errors, "; "));

        if (out_dir.empty())
        {
            const char *env = std::getenv("BEAMKIT_OUT");
            out_dir = env && *env ? env : "results";
        }
        const beamkit::ScenarioResult result = beamkit::run_scenario(cfg, jobs);
        std::cout << beamkit::write_result(result, cfg, out_dir).string() << "\n";
        return 0;
    }
    catch (const std::exception &e)
    {
        return fail(e.what());
    }
}
