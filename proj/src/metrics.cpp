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

#include "beamkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace beamkit
{
    double mutual_information(const CMatrix &h, const CMatrix &f, double snr_linear, int n_s)
    {
        if (h.cols() != f.rows())
            throw std::invalid_argument("mutual_information: H and F are not conformable");
        if (n_s < 1)
            throw std::invalid_argument("mutual_information: N_S must be >= 1");
        const CMatrix hf = h * f;
        CMatrix g = (snr_linear / n_s) * (hf.adjoint() * hf);
        g.diagonal().array() += 1.0;
        Eigen::LLT<CMatrix> llt(0.5 * (g + g.adjoint()));
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("mutual_information: Gram matrix is not positive definite");
        double logdet = 0.0;
        for (Index i = 0; i < g.rows(); ++i)
            logdet += 2.0 * std::log2(llt.matrixL()(i, i).real());
        return std::max(0.0, logdet);
    }

    double spectral_efficiency(const ChannelRealization &ch, const HybridBeamformer &bf, const SnrConfig &snr,
                               bool corrected)
    {
        const auto &bb = corrected ? bf.f_bb_corrected : bf.f_bb;
        if (bb.size() != ch.h.size())
            throw std::invalid_argument("spectral_efficiency: subcarrier counts differ");
        const double rho = std::pow(10.0, snr.snr_db / 10.0);
        double sum = 0.0;
        for (std::size_t m = 0; m < ch.h.size(); ++m)
            sum += mutual_information(ch.h[m], bf.f_rf * bb[m], rho, snr.n_s);
        return sum / double(ch.h.size());
    }

    double spectral_efficiency(const std::vector<CMatrix> &h, const std::vector<CMatrix> &f, const SnrConfig &snr)
    {
        if (h.size() != f.size() || h.empty())
            throw std::invalid_argument("spectral_efficiency: need matching, non-empty channel and precoder lists");
        const double rho = std::pow(10.0, snr.snr_db / 10.0);
        double sum = 0.0;
        for (std::size_t m = 0; m < h.size(); ++m)
            sum += mutual_information(h[m], f[m], rho, snr.n_s);
        return sum / double(h.size());
    }

    std::vector<double> array_gain(const CVector &w, const ArrayGeometry &tx, const std::vector<Direction> &grid,
                                   double frequency)
    {
        if (w.size() != tx.n_sub())
            throw std::invalid_argument("array_gain: precoder length does not match the array");
        if (w.norm() == 0.0)
            throw std::invalid_argument("array_gain: zero precoder");
        std::vector<double> g(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            g[i] = std::abs(subarray_steering_vector(tx, grid[i], frequency).dot(w));
        const double peak = grid.empty() ? 0.0 : *std::max_element(g.begin(), g.end());
        if (peak > 0.0)
            for (double &v : g)
                v /= peak;
        return g;
    }

    Summary aggregate(std::vector<TrialValue> values)
    {
        if (values.empty())
            throw std::invalid_argument("aggregate: no values");
        std::sort(values.begin(), values.end(),
                  [](const TrialValue &a, const TrialValue &b) { return a.trial < b.trial; });
        Summary s;
        s.count = values.size();
        double sum = 0.0;
        for (const TrialValue &v : values)
            sum += v.value;
        s.mean = sum / double(s.count);
        if (s.count > 1)
        {
            double ss = 0.0;
            for (const TrialValue &v : values)
                ss += (v.value - s.mean) * (v.value - s.mean);
            s.std_error = std::sqrt(ss / double(s.count - 1)) / std::sqrt(double(s.count));
        }
        return s;
    }

    std::size_t argmax(const std::vector<double> &v)
    {
        if (v.empty())
            throw std::invalid_argument("argmax: empty input");
        return std::size_t(std::max_element(v.begin(), v.end()) - v.begin());
    }
}
