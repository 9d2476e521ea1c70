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

#include "beamkit/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "beamkit/linalg.hpp"

namespace beamkit
{
    // ------------------------------------------------------------ absorption

    AbsorptionTable::AbsorptionTable(std::vector<std::pair<double, double>> entries) : entries_(std::move(entries))
    {
        for (std::size_t i = 0; i < entries_.size(); ++i)
        {
            if (!std::isfinite(entries_[i].first) || !std::isfinite(entries_[i].second) || entries_[i].second < 0.0)
                throw std::invalid_argument("absorption table: entries must be finite with kappa >= 0");
            if (i > 0 && !(entries_[i].first > entries_[i - 1].first))
                throw std::invalid_argument("absorption table: frequencies must be strictly ascending");
        }
    }

    AbsorptionTable AbsorptionTable::parse(const std::string &text)
    {
        std::vector<std::pair<double, double>> entries;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line))
        {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            std::istringstream ls(line);
            double f, k;
            if (!(ls >> f))
                continue;
            std::string rest;
            if (!(ls >> k) || (ls >> rest))
                throw std::invalid_argument("absorption table line " + std::to_string(lineno) +
                                            ": expected 'frequency_hz kappa_per_m'");
            entries.emplace_back(f, k);
        }
        return AbsorptionTable(std::move(entries));
    }

    AbsorptionTable AbsorptionTable::load(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::invalid_argument("cannot read absorption table '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    double AbsorptionTable::operator()(double frequency) const
    {
        if (entries_.empty())
            return 0.0;
        auto it = std::upper_bound(entries_.begin(), entries_.end(), frequency,
                                   [](double f, const auto &e) { return f < e.first; });
        if (it == entries_.begin())
            return entries_.front().second;
        return std::prev(it)->second;
    }

    void ChannelScene::validate() const
    {
        if (n_clusters < 0 || n_rays < 1)
            throw std::invalid_argument("channel scene: need n_clusters >= 0 and n_rays >= 1");
        if (!std::isfinite(nlos_ratio_db))
            throw std::invalid_argument("channel scene: NLoS power ratio must be finite");
        if (!(distance_m > 0.0))
            throw std::invalid_argument("channel scene: distance must be positive");
        if (!(path_loss_exponent >= 0.0))
            throw std::invalid_argument("channel scene: path-loss exponent must be >= 0");
        for (const AngleRange *r : {&azimuth_deg, &elevation_deg})
            if (!(r->hi >= r->lo))
                throw std::invalid_argument("channel scene: empty angle range");
        if (azimuth_deg.lo < -180.0 || azimuth_deg.hi > 180.0)
            throw std::invalid_argument("channel scene: azimuth range outside [-180, 180]");
        if (elevation_deg.lo < 0.0 || elevation_deg.hi > 180.0)
            throw std::invalid_argument("channel scene: elevation range outside [0, 180]");
        if (los_aod)
            los_aod->validate();
        if (los_aoa)
            los_aoa->validate();
    }

    // ------------------------------------------------------------------ rng

    Rng::Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t Rng::next() { return engine_(); }

    double Rng::uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

    double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double Rng::normal()
    {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
    }

    cd Rng::complex_normal() { return {normal() / std::sqrt(2.0), normal() / std::sqrt(2.0)}; }

    // -------------------------------------------------------------- channel

    std::vector<double> subcarrier_frequencies(const CarrierConfig &cfg)
    {
        cfg.validate();
        const int m_total = cfg.n_subcarriers;
        std::vector<double> f(m_total);
        for (int m = 0; m < m_total; ++m)
            f[m] = cfg.f_c + cfg.bandwidth / m_total * (m - 0.5 * (m_total - 1));
        return f;
    }

    double los_gain(double frequency, double distance, double path_loss_exponent, double kappa)
    {
        if (!(distance > 0.0))
            throw std::invalid_argument("los_gain: distance must be positive");
        if (!(frequency > 0.0))
            throw std::invalid_argument("los_gain: frequency must be positive");
        return std::pow(speed_of_light / (4.0 * pi * frequency * distance), 0.5 * path_loss_exponent) *
               std::exp(-0.5 * kappa * distance);
    }

    CMatrix path_response(const ArrayGeometry &tx, const ArrayGeometry &rx, const Direction &aod,
                          const Direction &aoa, double frequency)
    {
        if (tx.q() != rx.q())
            throw std::invalid_argument("transmit and receive subarrays must hold the same number of antennas");
        return steering_matrix(rx, aoa, frequency) * steering_matrix(tx, aod, frequency).adjoint();
    }

    static Direction draw_direction(Rng &rng, const ChannelScene &scene)
    {
        Direction d;
        d.azimuth_deg = rng.uniform(scene.azimuth_deg.lo, scene.azimuth_deg.hi);
        d.elevation_deg = rng.uniform(scene.elevation_deg.lo, scene.elevation_deg.hi);
        return d;
    }

    ChannelRealization generate_channel(const ArrayGeometry &tx, const ArrayGeometry &rx, const CarrierConfig &cfg,
                                        const ChannelScene &scene, std::uint64_t seed)
    {
        tx.validate();
        rx.validate();
        scene.validate();
        if (tx.q() != rx.q())
            throw std::invalid_argument("transmit and receive subarrays must hold the same number of antennas");

        const std::vector<double> freqs = subcarrier_frequencies(cfg);
        const int m_total = int(freqs.size());
        const int n_paths = scene.n_paths();
        Rng rng(seed);

        ChannelRealization ch;
        ch.frequencies = freqs;
        ch.gamma = std::sqrt(double(tx.n_sub()) * rx.n_sub() / n_paths);
        ch.distance_m = scene.distance_m;
        ch.path_loss_exponent = scene.path_loss_exponent;
        ch.absorption = scene.absorption;

        const double ref = scene.normalize_gains ? los_gain(cfg.f_c, scene.distance_m, scene.path_loss_exponent,
                                                            scene.absorption(cfg.f_c))
                                                 : 1.0;
        const double nlos_scale = std::pow(10.0, scene.nlos_ratio_db / 20.0);

        std::vector<double> los_mag(m_total);
        for (int m = 0; m < m_total; ++m)
            los_mag[m] = los_gain(freqs[m], scene.distance_m, scene.path_loss_exponent, scene.absorption(freqs[m])) / ref;

        // Angles first, then gains, so a realization at another subcarrier grid shares the geometry
        ch.paths.resize(n_paths);
        for (int l = 0; l < n_paths; ++l)
        {
            PathParams &p = ch.paths[l];
            p.is_los = l == 0;
            p.aod = p.is_los && scene.los_aod ? *scene.los_aod : draw_direction(rng, scene);
            p.aoa = p.is_los && scene.los_aoa ? *scene.los_aoa : draw_direction(rng, scene);
        }
        for (PathParams &p : ch.paths)
        {
            p.gains.resize(m_total);
            for (int m = 0; m < m_total; ++m)
                p.gains[m] = p.is_los ? cd(los_mag[m], 0.0) : std::polar(los_mag[m] * nlos_scale, rng.uniform(0.0, 2.0 * pi));
        }

        ch.h.resize(m_total);
        for (int m = 0; m < m_total; ++m)
        {
            CMatrix h = CMatrix::Zero(rx.n_sub(), tx.n_sub());
            for (const PathParams &p : ch.paths)
                h += p.gains[m] * path_response(tx, rx, p.aod, p.aoa, freqs[m]);
            ch.h[m] = ch.gamma * h;
        }
        return ch;
    }

    CMatrix unconstrained_precoder(const CMatrix &h, int n_s)
    {
        if (n_s < 1 || n_s > h.cols())
            throw std::invalid_argument("unconstrained_precoder: need 1 <= N_S <= N_T");
        Eigen::BDCSVD<CMatrix> svd(h, Eigen::ComputeFullV);
        const Eigen::VectorXd &s = svd.singularValues();
        Index rank = 0;
        for (Index i = 0; i < s.size(); ++i)
            if (s(i) > 1e-10 * s(0) && s(i) > 0.0)
                ++rank;
        if (n_s > rank)
            throw std::invalid_argument("unconstrained_precoder: N_S = " + std::to_string(n_s) +
                                        " exceeds the channel rank " + std::to_string(rank));
        CMatrix f = svd.matrixV().leftCols(n_s);
        fix_column_phases(f);
        return f;
    }

    CMatrix channel_covariance(const std::vector<PathParams> &paths, const ArrayGeometry &tx, double frequency,
                               int m, double gamma, CovarianceMode mode)
    {
        const auto los = std::find_if(paths.begin(), paths.end(), [](const PathParams &p) { return p.is_los; });
        CMatrix c = CMatrix::Zero(tx.n_sub(), tx.n_sub());
        auto add = [&](const PathParams &p) {
            if (m < 0 || m >= int(p.gains.size()))
                throw std::invalid_argument("channel_covariance: subcarrier index out of range");
            const CMatrix a = steering_matrix(tx, p.aod, frequency);
            c += std::norm(p.gains[m]) * (a * a.adjoint());
        };
        if (mode == CovarianceMode::los_approx)
        {
            if (los == paths.end())
                throw std::invalid_argument("channel_covariance: LoS approximation needs a LoS path");
            add(*los);
        }
        else
            for (const PathParams &p : paths)
                add(p);
        return gamma * gamma * hermitian_part(c);
    }

    std::vector<CMatrix> channel_covariance(const ChannelRealization &ch, const ArrayGeometry &tx, CovarianceMode mode)
    {
        std::vector<CMatrix> out;
        out.reserve(ch.frequencies.size());
        for (std::size_t m = 0; m < ch.frequencies.size(); ++m)
            out.push_back(channel_covariance(ch.paths, tx, ch.frequencies[m], int(m), ch.gamma, mode));
        return out;
    }

    CMatrix statistical_precoder(const CMatrix &c, int n_s)
    {
        if (c.rows() != c.cols())
            throw std::invalid_argument("statistical_precoder: covariance must be square");
        if (n_s < 1 || n_s > c.rows())
            throw std::invalid_argument("statistical_precoder: need 1 <= N_S <= N_T");
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian_part(c));
        if (eig.info() != Eigen::Success)
            throw std::runtime_error("statistical_precoder: eigendecomposition failed");
        // Eigen sorts ascending
        CMatrix f = eig.eigenvectors().rightCols(n_s).rowwise().reverse();
        fix_column_phases(f);
        return f;
    }
}
