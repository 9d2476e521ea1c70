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

#ifndef BEAMKIT_CONFIG_HPP
#define BEAMKIT_CONFIG_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "beamkit/channel.hpp"
#include "beamkit/jrc.hpp"

namespace beamkit
{
    // Line-oriented "key = value" text with '#' comments
    class ConfigMap
    {
    public:
        static ConfigMap parse(const std::string &text);
        static ConfigMap load(const std::string &path);

        void set(const std::string &key, const std::string &value) { values_[key] = value; }
        const std::map<std::string, std::string> &values() const { return values_; }

    private:
        std::map<std::string, std::string> values_;
    };

    struct ExperimentConfig
    {
        std::string scenario = "se-vs-snr";
        std::uint64_t seed = 1;
        int trials = 50;

        // Arrays: subarray grids, shared per-subarray grid, spacings in units of the carrier wavelength
        int tx_nx = 8, tx_ny = 8;
        int rx_nx = 4, rx_ny = 4;
        int q_x = 2, q_y = 2;
        double element_spacing_lambda = 0.25;
        double subarray_spacing_lambda = 0.5;

        CarrierConfig carrier{300e9, 15e9, 16};

        int n_rf = 8;
        int n_s = 2;
        int k = 2;
        std::vector<Direction> targets{{60.0, 70.0}, {110.0, 75.0}, {140.0, 80.0}};

        ChannelScene scene;
        std::string absorption_table; // path, empty for kappa = 0

        double eta = 0.5;
        std::vector<std::string> masks{"fully", "pco", "partial"};
        int overlap = 0; // PCO window length; 0 picks 2 N_T / N_RF clamped to the admissible range
        SolverOptions solver;

        double snr_db = 10.0;
        std::vector<double> snr_list{-10, -5, 0, 5, 10, 15, 20};
        std::vector<double> eta_list{0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
        std::vector<double> bandwidth_list{1e9, 5e9, 15e9, 30e9, 60e9};
        std::vector<double> dbar_list{2, 4, 8, 16, std::numeric_limits<double>::infinity()};

        Direction bp_los{10.0, 90.0};
        std::vector<Direction> bp_targets{{80.0, 90.0}, {110.0, 90.0}};
        std::vector<double> bp_eta{0.0, 0.5, 1.0};
        double bp_step_deg = 1.0;

        Direction ag_los{0.0, 60.0};
        double ag_bandwidth = 30e9;
        double ag_eta = 1.0;
        std::string ag_mask = "fully";
        double ag_step_deg = 1.0;

        std::string bw_mask = "fully";

        std::vector<double> ps_n_t{64, 256, 500, 1024};
        std::vector<double> ps_q{4, 9, 20};
        std::vector<double> ps_n_rf{8, 10, 16};
        double ps_overlap_factor = 2.0;

        int n_t() const { return tx_nx * tx_ny; }
        double wavelength() const { return speed_of_light / carrier.f_c; }
        ArrayGeometry tx_geometry(double element_spacing_lambda_override = -1.0) const;
        ArrayGeometry rx_geometry(double element_spacing_lambda_override = -1.0) const;
        int resolved_overlap() const;
        ConnectivityMask mask(const std::string &name) const;
        std::vector<Direction> radar_targets() const; // first K targets
    };

    extern const std::vector<std::string> scenario_names;

    // Reads every known key, starting from the defaults. Unknown keys and malformed values are appended to errors.
    ExperimentConfig build_config(const ConfigMap &map, std::vector<std::string> &errors);

    // Every resolved key, one "key = value" line each, sorted by key
    std::string serialize(const ExperimentConfig &cfg);

    // Constraint violations across all modules, empty when the configuration can run
    std::vector<std::string> validate(const ExperimentConfig &cfg);

    // Shortest decimal text that parses back to the same double
    std::string format_double(double v);
}

#endif
