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

#ifndef BEAMKIT_GEOMETRY_HPP
#define BEAMKIT_GEOMETRY_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "beamkit/types.hpp"

namespace beamkit
{
    // Far-field direction. Azimuth in [-180, 180] deg, elevation (polar angle from +z) in [0, 180] deg.
    struct Direction
    {
        double azimuth_deg = 0.0;
        double elevation_deg = 90.0;

        // Throws std::invalid_argument when an angle is outside its range
        void validate() const;

        // Unit vector [cos(az) sin(el), sin(az) sin(el), cos(el)]
        Eigen::Vector3d unit_vector() const;
    };

    // Group-of-subarrays layout. Subarrays sit on an n_sub_x x n_sub_y grid at pitch
    // (subarray_spacing_x, subarray_spacing_y); each holds a centered q_x x q_y grid of
    // antennas at pitch (element_spacing_x, element_spacing_y). All lengths in meters.
    struct ArrayGeometry
    {
        int n_sub_x = 1;
        int n_sub_y = 1;
        int q_x = 1;
        int q_y = 1;
        double element_spacing_x = 0.0;  // delta_x
        double element_spacing_y = 0.0;  // delta_y
        double subarray_spacing_x = 0.0; // Delta_x
        double subarray_spacing_y = 0.0; // Delta_y

        int n_sub() const { return n_sub_x * n_sub_y; }
        int q() const { return q_x * q_y; }

        void validate() const;

        // True when neighbouring subarrays physically overlap; legal, but usually a configuration mistake
        bool subarrays_overlap() const;

        // Center of subarray n (subarray index n = s * n_sub_x + p)
        Eigen::Vector3d subarray_center(int n) const;

        // Offset of antenna i relative to its subarray center (antenna index i = t * q_x + r)
        Eigen::Vector3d element_offset(int i) const;
    };

    // Subcarrier grid of a wideband multicarrier link
    struct CarrierConfig
    {
        double f_c = 300e9;       // center frequency in Hz
        double bandwidth = 15e9;  // Hz
        int n_subcarriers = 64;   // M

        void validate() const;
    };

    // All n_sub * q antenna positions, subarray-major: position[n * q + i]
    std::vector<Eigen::Vector3d> antenna_positions(const ArrayGeometry &geom);

    // GoSA steering matrix, n_sub x q. Row n holds the steering vector of subarray n:
    // [A]_{n,i} = exp(-j 2 pi f / c0 * kappa_{n,i}^T Omega) / sqrt(n_sub)
    CMatrix steering_matrix(const ArrayGeometry &geom, const Direction &dir, double frequency);

    // One phase per subarray taken at the subarray center, length n_sub, entries of modulus 1/sqrt(n_sub)
    CVector subarray_steering_vector(const ArrayGeometry &geom, const Direction &dir, double frequency);

    enum class MaskKind
    {
        fully,
        partial,
        overlapped
    };

    // Which entries of an n_rows x n_cols RF precoder carry a phase shifter.
    // Column j may be nonzero only on the contiguous rows [start(j), start(j) + length(j)).
    class ConnectivityMask
    {
    public:
        ConnectivityMask() = default; // empty 0 x 0 mask

        // Block-diagonal structure with n_rows / n_cols rows per column
        static ConnectivityMask partial(int n_rows, int n_cols);
        static ConnectivityMask fully(int n_rows, int n_cols);

        // Evenly spaced windows of `overlap` rows. overlap == n_rows / n_cols reproduces the partial mask.
        static ConnectivityMask overlapped(int n_rows, int n_cols, int overlap);

        static ConnectivityMask build(int n_rows, int n_cols, MaskKind kind, int overlap = 0);

        int n_rows() const { return n_rows_; }
        int n_cols() const { return n_cols_; }
        MaskKind kind() const { return kind_; }
        int overlap() const { return overlap_; } // rows per column (M-bar); n_rows for fully connected

        int start(int col) const { return support_[col].first; }
        int length(int col) const { return support_[col].second; }
        bool contains(int row, int col) const;

        // Nonzero (row, col) pairs in column-major order
        const std::vector<std::pair<int, int>> &nonzero_entries() const { return entries_; }
        const std::vector<std::pair<int, int>> &zero_entries() const { return zero_entries_; }

        // Column-major vectorization positions of the nonzero / zero entries
        const std::vector<Index> &nonzero_positions() const { return positions_; }
        const std::vector<Index> &zero_positions() const { return zero_positions_; }

        Index size() const { return Index(positions_.size()); } // T = |V|

        // Entrywise 0/1 indicator matrix
        Eigen::MatrixXd indicator() const;

        bool operator==(const ConnectivityMask &other) const;

    private:
        ConnectivityMask(int n_rows, int n_cols, MaskKind kind, int overlap, std::vector<std::pair<int, int>> support);

        int n_rows_ = 0;
        int n_cols_ = 0;
        MaskKind kind_ = MaskKind::fully;
        int overlap_ = 0;
        std::vector<std::pair<int, int>> support_;
        std::vector<std::pair<int, int>> entries_;
        std::vector<std::pair<int, int>> zero_entries_;
        std::vector<Index> positions_;
        std::vector<Index> zero_positions_;
    };

    // Smallest and largest admissible overlap for an n_rows x n_cols overlapped mask
    std::pair<int, int> overlap_range(int n_rows, int n_cols);

    enum class Architecture
    {
        aosa_full,
        aosa_partial,
        gosa_full,
        gosa_partial,
        gosa_pco
    };

    std::string to_string(Architecture arch);
    std::string to_string(MaskKind kind);
    MaskKind parse_mask_kind(const std::string &name);

    // Number of phase shifters needed by a transmitter architecture.
    // overlap is only used for gosa_pco.
    std::int64_t phase_shifter_count(Architecture arch, std::int64_t n_t, std::int64_t q, std::int64_t n_rf,
                                     std::int64_t overlap = 0);
}

#endif
