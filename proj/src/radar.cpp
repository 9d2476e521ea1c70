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

#include "beamkit/radar.hpp"

#include <cmath>
#include <stdexcept>

namespace beamkit
{
    void RadarScene::validate() const
    {
        if (targets.empty())
            throw std::invalid_argument("radar scene needs at least one target");
        for (const Direction &d : targets)
            d.validate();
    }

    RadarBeamformer radar_beamformer(const RadarScene &scene, const ArrayGeometry &tx, double f_ref,
                                     std::optional<int> overlap)
    {
        scene.validate();
        const int n_t = tx.n_sub();
        const int k = int(scene.targets.size());
        if (!overlap && n_t % k != 0)
            throw std::invalid_argument("radar beamformer: N_T = " + std::to_string(n_t) +
                                        " is not divisible by K = " + std::to_string(k));
        ConnectivityMask mask = overlap ? ConnectivityMask::overlapped(n_t, k, *overlap)
                                        : ConnectivityMask::partial(n_t, k);
        CMatrix f_r = CMatrix::Zero(n_t, k);
        for (int j = 0; j < k; ++j)
        {
            const CVector a = subarray_steering_vector(tx, scene.targets[j], f_ref);
            f_r.col(j).segment(mask.start(j), mask.length(j)) = a.segment(mask.start(j), mask.length(j));
        }
        return {std::move(f_r), std::move(mask)};
    }

    CMatrix transmit_covariance(const CMatrix &f_rf, const CMatrix &f_bb)
    {
        if (f_rf.cols() != f_bb.rows())
            throw std::invalid_argument("transmit_covariance: F_RF and F_BB are not conformable");
        const CMatrix f = f_rf * f_bb;
        return f * f.adjoint();
    }

    std::vector<double> beampattern(const CMatrix &r, const ArrayGeometry &tx, const std::vector<Direction> &grid,
                                    double frequency)
    {
        if (r.rows() != tx.n_sub() || r.cols() != tx.n_sub())
            throw std::invalid_argument("beampattern: covariance size does not match the array");
        std::vector<double> out(grid.size());
        for (std::size_t g = 0; g < grid.size(); ++g)
        {
            const CMatrix a = steering_matrix(tx, grid[g], frequency);
            out[g] = (a.adjoint() * r * a).trace().real();
        }
        return out;
    }

    std::vector<Direction> azimuth_cut(double elevation_deg, double az_lo, double az_hi, double step)
    {
        if (!(step > 0.0) || az_hi < az_lo)
            throw std::invalid_argument("azimuth_cut: bad range");
        std::vector<Direction> grid;
        const int n = int(std::floor((az_hi - az_lo) / step + 1e-9)) + 1;
        for (int i = 0; i < n; ++i)
            grid.push_back({az_lo + i * step, elevation_deg});
        return grid;
    }

    std::vector<Direction> elevation_cut(double azimuth_deg, double el_lo, double el_hi, double step)
    {
        if (!(step > 0.0) || el_hi < el_lo)
            throw std::invalid_argument("elevation_cut: bad range");
        std::vector<Direction> grid;
        const int n = int(std::floor((el_hi - el_lo) / step + 1e-9)) + 1;
        for (int i = 0; i < n; ++i)
            grid.push_back({azimuth_deg, el_lo + i * step});
        return grid;
    }
}
