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

#ifndef BEAMKIT_LINALG_HPP
#define BEAMKIT_LINALG_HPP

#include <vector>

#include "beamkit/types.hpp"

namespace beamkit
{
    // Moore-Penrose pseudo-inverse via SVD. Singular values below tol * sigma_max are dropped.
    // rank, when given, receives the numerical rank.
    CMatrix pinv(const CMatrix &a, double tol = 1e-12, Index *rank = nullptr);

    // Numerical rank: singular values above tol * sigma_max
    Index numerical_rank(const CMatrix &a, double tol = 1e-10);

    // Rotate each column so its largest-magnitude entry is real and positive (first index wins ties)
    void fix_column_phases(CMatrix &a);

    // Hermitian part (A + A^H) / 2
    CMatrix hermitian_part(const CMatrix &a);

    // Concatenate matrices horizontally; all must share a row count
    CMatrix hstack(const std::vector<CMatrix> &blocks);

    // Inverse of hstack with equal-width blocks
    std::vector<CMatrix> hsplit(const CMatrix &a, Index block_cols);
}

#endif
