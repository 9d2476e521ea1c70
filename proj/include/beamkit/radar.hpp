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

#ifndef BEAMKIT_RADAR_HPP
#define BEAMKIT_RADAR_HPP

#include <optional>
#include <vector>

#include "beamkit/geometry.hpp"

namespace beamkit
{
    struct RadarScene
    {
        std::vector<Direction> targets;

        void validate() const;
    };

    struct RadarBeamformer
    {
        CMatrix f_r; // N_T x K
        ConnectivityMask mask;
    };

    // Column k steers toward target k on its mask support, using one phase per subarray taken at the
    // subarray center and evaluated at f_ref. Without overlap the mask is block diagonal (N_T / K rows each).
    RadarBeamformer radar_beamformer(const RadarScene &scene, const ArrayGeometry &tx, double f_ref,
                                     std::optional<int> overlap = std::nullopt);

    // R = F_RF F_BB F_BB^H F_RF^H
    CMatrix transmit_covariance(const CMatrix &f_rf, const CMatrix &f_bb);

    // B(dir) = Trace{A_T(dir)^H R A_T(dir)} with the N_T x Q steering matrix at frequency f
    std::vector<double> beampattern(const CMatrix &r, const ArrayGeometry &tx, const std::vector<Direction> &grid,
                                    double frequency);

    // Grid helpers
    std::vector<Direction> azimuth_cut(double elevation_deg, double az_lo, double az_hi, double step);
    std::vector<Direction> elevation_cut(double azimuth_deg, double el_lo, double el_hi, double step);
}

#endif
