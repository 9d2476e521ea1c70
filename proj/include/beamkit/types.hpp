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

#ifndef BEAMKIT_TYPES_HPP
#define BEAMKIT_TYPES_HPP

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace beamkit
{
    using cd = std::complex<double>;
    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;
    using Index = Eigen::Index;

    inline constexpr double speed_of_light = 299792458.0; // m/s
    inline constexpr double pi = std::numbers::pi;

    inline constexpr double deg2rad(double deg) { return deg * pi / 180.0; }
    inline constexpr double rad2deg(double rad) { return rad * 180.0 / pi; }
}

#endif
