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

#ifndef BEAMKIT_CHANNEL_HPP
#define BEAMKIT_CHANNEL_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "beamkit/geometry.hpp"

namespace beamkit
{
    // Piecewise-constant molecular absorption coefficient kappa(f) in 1/m.
    // Lookup returns the entry with the largest frequency <= f. Frequencies below the first
    // entry use the first entry; an empty table means kappa = 0.
    class AbsorptionTable
    {
    public:
        AbsorptionTable() = default;
        explicit AbsorptionTable(std::vector<std::pair<double, double>> entries);

        // One "frequency_hz kappa_per_m" pair per line, ascending; '#' starts a comment
        static AbsorptionTable parse(const std::string &text);
        static AbsorptionTable load(const std::string &path);

        double operator()(double frequency) const;
        const std::vector<std::pair<double, double>> &entries() const { return entries_; }
        bool empty() const { return entries_.empty(); }

    private:
        std::vector<std::pair<double, double>> entries_;
    };

    struct AngleRange
    {
        double lo = 0.0;
        double hi = 0.0;
    };

    // Saleh-Valenzuela scene parameters
    struct ChannelScene
    {
        int n_clusters = 4;
        int n_rays = 1;
        double nlos_ratio_db = -10.0;   // |alpha_NLoS| / |alpha_LoS| in dB (power ratio)
        double path_loss_exponent = 4.0;
        double distance_m = 10.0;
        AbsorptionTable absorption;
        AngleRange azimuth_deg{-150.0, 150.0};
        AngleRange elevation_deg{70.0, 90.0};
        std::optional<Direction> los_aod; // fixed LoS directions, otherwise drawn like the NLoS paths
        std::optional<Direction> los_aoa;

        // Divide every gain by the LoS gain at f_c so that the SNR refers to the LoS link budget.
        // Raw gains at 300 GHz over 10 m are around 1e-10 and would make every SNR sweep flat.
        bool normalize_gains = true;

        int n_paths() const { return 1 + n_clusters * n_rays; }
        void validate() const;
    };

    struct PathParams
    {
        bool is_los = false;
        Direction aod;
        Direction aoa;
        std::vector<cd> gains; // one per subcarrier
    };

    struct ChannelRealization
    {
        std::vector<CMatrix> h; // M matrices, N_R x N_T
        std::vector<PathParams> paths;
        std::vector<double> frequencies;
        double gamma = 1.0; // sqrt(N_T N_R / L)
        double distance_m = 0.0;
        double path_loss_exponent = 0.0;
        AbsorptionTable absorption;
    };

    // f_m = f_c + (B/M)(m - 1 - (M-1)/2), m = 1..M
    std::vector<double> subcarrier_frequencies(const CarrierConfig &cfg);

    // (c0 / (4 pi f d))^(gamma_bar/2) * exp(-kappa d / 2)
    double los_gain(double frequency, double distance, double path_loss_exponent, double kappa);

    // Seeded Mersenne Twister with distribution transforms written out, so draws do not depend
    // on the standard library's distribution implementations
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed);
        double uniform();                       // [0, 1)
        double uniform(double lo, double hi);   // [lo, hi)
        double normal();                        // standard normal (Box-Muller)
        cd complex_normal();                    // CN(0, 1)
        std::uint64_t next();

    private:
        std::mt19937_64 engine_;
    };

    // Steering of one path: A_R(Theta) A_T(Psi)^H at frequency f
    CMatrix path_response(const ArrayGeometry &tx, const ArrayGeometry &rx, const Direction &aod,
                          const Direction &aoa, double frequency);

    ChannelRealization generate_channel(const ArrayGeometry &tx, const ArrayGeometry &rx, const CarrierConfig &cfg,
                                        const ChannelScene &scene, std::uint64_t seed);

    // Top-n_s right singular vectors of h, descending, phase-fixed. Throws when n_s exceeds the numerical rank.
    CMatrix unconstrained_precoder(const CMatrix &h, int n_s);

    enum class CovarianceMode
    {
        exact,
        los_approx
    };

    // Transmit-side channel covariance at subcarrier m, with |alpha_{l,m}|^2 standing in for the gain variance
    CMatrix channel_covariance(const std::vector<PathParams> &paths, const ArrayGeometry &tx, double frequency,
                               int m, double gamma, CovarianceMode mode);

    std::vector<CMatrix> channel_covariance(const ChannelRealization &ch, const ArrayGeometry &tx,
                                            CovarianceMode mode);

    // Top-n_s eigenvectors of a Hermitian PSD matrix, descending, phase-fixed
    CMatrix statistical_precoder(const CMatrix &c, int n_s);
}

#endif
