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

#ifndef BEAMKIT_METRICS_HPP
#define BEAMKIT_METRICS_HPP

#include <cstdint>
#include <vector>

#include "beamkit/channel.hpp"
#include "beamkit/jrc.hpp"

namespace beamkit
{
    struct SnrConfig
    {
        double snr_db = 10.0; // rho / sigma_n^2 with rho = 1
        int n_s = 1;
    };

    // log2 det(I + snr / N_S (H F)^H (H F)) for one subcarrier, on the N_S x N_S Gram matrix
    double mutual_information(const CMatrix &h, const CMatrix &f, double snr_linear, int n_s);

    // Subcarrier average for a hybrid beamformer (F_BB^c when corrected)
    double spectral_efficiency(const ChannelRealization &ch, const HybridBeamformer &bf, const SnrConfig &snr,
                               bool corrected = false);

    // Subcarrier average for explicit per-subcarrier precoders
    double spectral_efficiency(const std::vector<CMatrix> &h, const std::vector<CMatrix> &f, const SnrConfig &snr);

    // |a(dir, f)^H w| over the grid with the subarray-center steering vector, divided by the grid maximum
    std::vector<double> array_gain(const CVector &w, const ArrayGeometry &tx, const std::vector<Direction> &grid,
                                   double frequency);

    struct TrialValue
    {
        std::uint64_t trial = 0;
        double value = 0.0;
    };

    struct Summary
    {
        double mean = 0.0;
        double std_error = 0.0; // sample standard deviation / sqrt(n), 0 for a single value
        std::size_t count = 0;
    };

    // Sorts by trial index, then accumulates in that order
    Summary aggregate(std::vector<TrialValue> values);

    // Index of the largest value (first one on ties)
    std::size_t argmax(const std::vector<double> &v);
}

#endif
