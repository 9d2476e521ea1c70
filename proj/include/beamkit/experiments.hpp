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

#ifndef BEAMKIT_EXPERIMENTS_HPP
#define BEAMKIT_EXPERIMENTS_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "beamkit/config.hpp"
#include "beamkit/metrics.hpp"

namespace beamkit
{
    struct Curve
    {
        std::string name;
        std::vector<Summary> points; // one per axis value
    };

    // Free-form CSV emitted next to the curves
    struct Table
    {
        std::string name;
        std::vector<std::string> header;
        std::vector<std::vector<std::string>> rows;
    };

    struct ScenarioResult
    {
        std::string scenario;
        std::string axis;
        std::vector<double> axis_values;
        std::vector<Curve> curves;
        std::vector<std::vector<std::vector<double>>> raw; // [trial][curve][axis]
        std::vector<Table> tables;

        const Curve &curve(const std::string &name) const;
        std::size_t curve_index(const std::string &name) const;
    };

    // Seeds handed to one Monte-Carlo trial. trial_seed = seed + trial.
    struct TrialSeeds
    {
        std::uint64_t trial_seed;
        std::uint64_t channel;
        std::uint64_t solver;
    };
    TrialSeeds trial_seeds(std::uint64_t base_seed, int trial);

    // Throws std::invalid_argument listing every violation when cfg does not validate.
    ScenarioResult run_scenario(const ExperimentConfig &cfg, int jobs);

    // Writes <out_dir>/<scenario>/<curve>.csv, any tables, and manifest.txt. Returns the scenario directory.
    std::filesystem::path write_result(const ScenarioResult &result, const ExperimentConfig &cfg,
                                       const std::filesystem::path &out_dir);

    std::string csv_text(const ScenarioResult &result, const Curve &curve);
    std::string csv_text(const Table &table);
}

#endif
