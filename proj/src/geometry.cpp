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

#include "beamkit/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace beamkit
{
    void Direction::validate() const
    {
        if (!(azimuth_deg >= -180.0 && azimuth_deg <= 180.0))
            throw std::invalid_argument("azimuth must lie in [-180, 180] deg");
        if (!(elevation_deg >= 0.0 && elevation_deg <= 180.0))
            throw std::invalid_argument("elevation must lie in [0, 180] deg");
    }

    Eigen::Vector3d Direction::unit_vector() const
    {
        const double phi = deg2rad(azimuth_deg);
        const double theta = deg2rad(elevation_deg);
        return {std::cos(phi) * std::sin(theta), std::sin(phi) * std::sin(theta), std::cos(theta)};
    }

    void ArrayGeometry::validate() const
    {
        if (n_sub_x < 1 || n_sub_y < 1 || q_x < 1 || q_y < 1)
            throw std::invalid_argument("array counts must be >= 1");
        if (element_spacing_x < 0.0 || element_spacing_y < 0.0 || subarray_spacing_x < 0.0 || subarray_spacing_y < 0.0)
            throw std::invalid_argument("array spacings must be >= 0");
        if (!std::isfinite(element_spacing_x) || !std::isfinite(element_spacing_y) ||
            !std::isfinite(subarray_spacing_x) || !std::isfinite(subarray_spacing_y))
            throw std::invalid_argument("array spacings must be finite");
    }

    bool ArrayGeometry::subarrays_overlap() const
    {
        const bool ox = n_sub_x > 1 && q_x > 1 && (q_x - 1) * element_spacing_x >= subarray_spacing_x;
        const bool oy = n_sub_y > 1 && q_y > 1 && (q_y - 1) * element_spacing_y >= subarray_spacing_y;
        return ox || oy;
    }

    Eigen::Vector3d ArrayGeometry::subarray_center(int n) const
    {
        const int p = n % n_sub_x, s = n / n_sub_x;
        return {p * subarray_spacing_x, s * subarray_spacing_y, 0.0};
    }

    Eigen::Vector3d ArrayGeometry::element_offset(int i) const
    {
        const int r = i % q_x, t = i / q_x;
        return {(r - 0.5 * (q_x - 1)) * element_spacing_x, (t - 0.5 * (q_y - 1)) * element_spacing_y, 0.0};
    }

    void CarrierConfig::validate() const
    {
        if (n_subcarriers < 1)
            throw std::invalid_argument("number of subcarriers must be >= 1");
        if (!(f_c > 0.0) || !(bandwidth >= 0.0) || !std::isfinite(f_c) || !std::isfinite(bandwidth))
            throw std::invalid_argument("carrier frequency must be positive and bandwidth non-negative");
        const double f1 = f_c + bandwidth / n_subcarriers * (-0.5 * (n_subcarriers - 1));
        if (!(f1 > 0.0))
            throw std::invalid_argument("lowest subcarrier frequency is not positive");
    }

    std::vector<Eigen::Vector3d> antenna_positions(const ArrayGeometry &geom)
    {
        geom.validate();
        std::vector<Eigen::Vector3d> pos;
        pos.reserve(std::size_t(geom.n_sub()) * std::size_t(geom.q()));
        for (int n = 0; n < geom.n_sub(); ++n)
        {
            const Eigen::Vector3d c = geom.subarray_center(n);
            for (int i = 0; i < geom.q(); ++i)
                pos.push_back(c + geom.element_offset(i));
        }
        return pos;
    }

    CMatrix steering_matrix(const ArrayGeometry &geom, const Direction &dir, double frequency)
    {
        geom.validate();
        if (!(frequency > 0.0))
            throw std::invalid_argument("steering frequency must be positive");
        const Eigen::Vector3d omega = dir.unit_vector();
        const double k = 2.0 * pi * frequency / speed_of_light;
        const double scale = 1.0 / std::sqrt(double(geom.n_sub()));

        CMatrix a(geom.n_sub(), geom.q());
        for (int i = 0; i < geom.q(); ++i)
        {
            const double po = geom.element_offset(i).dot(omega);
            for (int n = 0; n < geom.n_sub(); ++n)
                a(n, i) = std::polar(scale, -k * (geom.subarray_center(n).dot(omega) + po));
        }
        return a;
    }

    CVector subarray_steering_vector(const ArrayGeometry &geom, const Direction &dir, double frequency)
    {
        geom.validate();
        if (!(frequency > 0.0))
            throw std::invalid_argument("steering frequency must be positive");
        const Eigen::Vector3d omega = dir.unit_vector();
        const double k = 2.0 * pi * frequency / speed_of_light;
        const double scale = 1.0 / std::sqrt(double(geom.n_sub()));

        CVector a(geom.n_sub());
        for (int n = 0; n < geom.n_sub(); ++n)
            a(n) = std::polar(scale, -k * geom.subarray_center(n).dot(omega));
        return a;
    }

    // ---------------------------------------------------------------- masks

    ConnectivityMask::ConnectivityMask(int n_rows, int n_cols, MaskKind kind, int overlap,
                                       std::vector<std::pair<int, int>> support)
        : n_rows_(n_rows), n_cols_(n_cols), kind_(kind), overlap_(overlap), support_(std::move(support))
    {
        for (int j = 0; j < n_cols_; ++j)
            for (int i = 0; i < n_rows_; ++i)
            {
                const Index pos = Index(j) * n_rows_ + i;
                if (contains(i, j))
                {
                    entries_.emplace_back(i, j);
                    positions_.push_back(pos);
                }
                else
                {
                    zero_entries_.emplace_back(i, j);
                    zero_positions_.push_back(pos);
                }
            }
    }

    static void check_shape(int n_rows, int n_cols)
    {
        if (n_rows < 1 || n_cols < 1)
            throw std::invalid_argument("mask dimensions must be >= 1");
        if (n_cols > n_rows)
            throw std::invalid_argument("mask needs at least as many rows as columns");
    }

    ConnectivityMask ConnectivityMask::fully(int n_rows, int n_cols)
    {
        check_shape(n_rows, n_cols);
        return {n_rows, n_cols, MaskKind::fully, n_rows, std::vector<std::pair<int, int>>(n_cols, {0, n_rows})};
    }

    ConnectivityMask ConnectivityMask::partial(int n_rows, int n_cols)
    {
        check_shape(n_rows, n_cols);
        if (n_rows % n_cols != 0)
            throw std::invalid_argument("partial mask needs N_T divisible by N_RF (" + std::to_string(n_rows) + " / " +
                                        std::to_string(n_cols) + ")");
        ConnectivityMask m = overlapped(n_rows, n_cols, n_rows / n_cols);
        m.kind_ = MaskKind::partial;
        return m;
    }

    ConnectivityMask ConnectivityMask::overlapped(int n_rows, int n_cols, int overlap)
    {
        check_shape(n_rows, n_cols);
        const auto [lo, hi] = overlap_range(n_rows, n_cols);
        if (overlap < lo || overlap > hi)
            throw std::invalid_argument("overlap " + std::to_string(overlap) + " outside [" + std::to_string(lo) +
                                        ", " + std::to_string(hi) + "]");
        std::vector<std::pair<int, int>> support(n_cols);
        const long long span = n_rows - overlap, den = n_cols - 1;
        for (int j = 0; j < n_cols; ++j)
        {
            // round(j * span / den), halves rounded up
            const int start = den == 0 ? 0 : int((2 * j * span + den) / (2 * den));
            support[j] = {start, overlap};
        }
        return {n_rows, n_cols, MaskKind::overlapped, overlap, std::move(support)};
    }

    ConnectivityMask ConnectivityMask::build(int n_rows, int n_cols, MaskKind kind, int overlap)
    {
        switch (kind)
        {
        case MaskKind::fully:
            return fully(n_rows, n_cols);
        case MaskKind::partial:
            return partial(n_rows, n_cols);
        case MaskKind::overlapped:
            return overlapped(n_rows, n_cols, overlap);
        }
        throw std::invalid_argument("unknown mask kind");
    }

    bool ConnectivityMask::contains(int row, int col) const
    {
        if (col < 0 || col >= n_cols_ || row < 0 || row >= n_rows_)
            return false;
        const auto [s, l] = support_[col];
        return row >= s && row < s + l;
    }

    Eigen::MatrixXd ConnectivityMask::indicator() const
    {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_rows_, n_cols_);
        for (const auto &[i, j] : entries_)
            m(i, j) = 1.0;
        return m;
    }

    bool ConnectivityMask::operator==(const ConnectivityMask &other) const
    {
        return n_rows_ == other.n_rows_ && n_cols_ == other.n_cols_ && support_ == other.support_;
    }

    std::pair<int, int> overlap_range(int n_rows, int n_cols)
    {
        check_shape(n_rows, n_cols);
        return {(n_rows + n_cols - 1) / n_cols, n_rows - n_cols + 1};
    }

    std::string to_string(Architecture arch)
    {
        switch (arch)
        {
        case Architecture::aosa_full:
            return "aosa-full";
        case Architecture::aosa_partial:
            return "aosa-partial";
        case Architecture::gosa_full:
            return "gosa-full";
        case Architecture::gosa_partial:
            return "gosa-partial";
        case Architecture::gosa_pco:
            return "gosa-pco";
        }
        return "unknown";
    }

    std::string to_string(MaskKind kind)
    {
        switch (kind)
        {
        case MaskKind::fully:
            return "fully";
        case MaskKind::partial:
            return "partial";
        case MaskKind::overlapped:
            return "overlapped";
        }
        return "unknown";
    }

    MaskKind parse_mask_kind(const std::string &name)
    {
        if (name == "fully")
            return MaskKind::fully;
        if (name == "partial")
            return MaskKind::partial;
        if (name == "overlapped" || name == "pco")
            return MaskKind::overlapped;
        throw std::invalid_argument("unknown mask kind '" + name + "'");
    }

    std::int64_t phase_shifter_count(Architecture arch, std::int64_t n_t, std::int64_t q, std::int64_t n_rf,
                                     std::int64_t overlap)
    {
        if (n_t < 1 || q < 1 || n_rf < 1)
            throw std::invalid_argument("phase shifter count needs positive arguments");
        switch (arch)
        {
        case Architecture::aosa_full:
            return n_t * q * n_rf;
        case Architecture::aosa_partial:
            return n_t * q;
        case Architecture::gosa_full:
            return n_t * n_rf;
        case Architecture::gosa_partial:
            return n_t;
        case Architecture::gosa_pco:
            if (overlap < 1)
                throw std::invalid_argument("GoSA-PCO count needs the overlap length");
            return n_rf * overlap;
        }
        throw std::invalid_argument("unknown architecture");
    }
}
