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

// Desk-scale instances shared by the unit tests and the acceptance binary

#ifndef BEAMKIT_TESTS_FIXTURES_HPP
#define BEAMKIT_TESTS_FIXTURES_HPP

#include "beamkit/channel.hpp"
#include "beamkit/jrc.hpp"
#include "beamkit/radar.hpp"

namespace fixture
{
    using namespace beamkit;

    inline const double f_c = 300e9;
    inline const double lambda_c = speed_of_light / f_c;

    inline ArrayGeometry geom(int nx, int ny, int qx = 2, int qy = 2)
    {
        return {nx, ny, qx, qy, lambda_c / 4, lambda_c / 4, lambda_c / 2, lambda_c / 2};
    }

    inline CMatrix random_matrix(Index r, Index c, std::uint64_t seed)
    {
        Rng rng(seed);
        CMatrix a(r, c);
        for (Index j = 0; j < c; ++j)
            for (Index i = 0; i < r; ++i)
                a(i, j) = rng.complex_normal();
        return a;
    }

    // N_T = 64, N_R = 16, Q = 4, N_S = 2, K = 2
    struct Desk
    {
        ArrayGeometry tx = geom(8, 8);
        ArrayGeometry rx = geom(4, 4);
        CarrierConfig carrier{f_c, 15e9, 16};
        ChannelScene scene;
        int n_rf = 8;
        int n_s = 2;
        std::vector<Direction> targets{{60.0, 70.0}, {110.0, 75.0}};

        CMatrix radar() const { return radar_beamformer(RadarScene{targets}, tx, carrier.f_c).f_r; }

        ChannelRealization channel(std::uint64_t seed) const
        {
            return generate_channel(tx, rx, carrier, scene, seed);
        }

        JrcProblem problem(const ChannelRealization &ch, double eta, const ConnectivityMask &mask) const
        {
            JrcProblem p;
            for (const CMatrix &h : ch.h)
                p.f_c.push_back(unconstrained_precoder(h, n_s));
            p.f_r = radar();
            p.eta = eta;
            p.mask = mask;
            p.n_s = n_s;
            return p;
        }
    };
}

#endif
