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

#include "beamkit/linalg.hpp"

#include <stdexcept>

namespace beamkit
{
    CMatrix pinv(const CMatrix &a, double tol, Index *rank)
    {
        if (a.size() == 0)
            return CMatrix(a.cols(), a.rows());
        Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd &s = svd.singularValues();
        const double cut = tol * (s.size() ? s(0) : 0.0);
        Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
        Index r = 0;
        for (Index i = 0; i < s.size(); ++i)
            if (s(i) > cut && s(i) > 0.0)
            {
                inv(i) = 1.0 / s(i);
                ++r;
            }
        if (rank)
            *rank = r;
        return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
    }

    Index numerical_rank(const CMatrix &a, double tol)
    {
        if (a.size() == 0)
            return 0;
        Eigen::BDCSVD<CMatrix> svd(a);
        const Eigen::VectorXd &s = svd.singularValues();
        Index r = 0;
        for (Index i = 0; i < s.size(); ++i)
            if (s(i) > tol * s(0) && s(i) > 0.0)
                ++r;
        return r;
    }

    void fix_column_phases(CMatrix &a)
    {
        for (Index j = 0; j < a.cols(); ++j)
        {
            Index imax = 0;
            double best = -1.0;
            for (Index i = 0; i < a.rows(); ++i)
            {
                // Ties within rounding noise go to the first index so the choice is stable
                const double m = std::abs(a(i, j));
                if (m > best * (1.0 + 1e-12))
                {
                    best = m;
                    imax = i;
                }
            }
            if (best > 0.0)
                a.col(j) *= std::conj(a(imax, j)) / best;
        }
    }

    CMatrix hermitian_part(const CMatrix &a)
    {
        return 0.5 * (a + a.adjoint());
    }

    CMatrix hstack(const std::vector<CMatrix> &blocks)
    {
        if (blocks.empty())
            return {};
        Index cols = 0;
        for (const auto &b : blocks)
        {
            if (b.rows() != blocks.front().rows())
                throw std::invalid_argument("hstack: row count mismatch");
            cols += b.cols();
        }
        CMatrix out(blocks.front().rows(), cols);
        Index c = 0;
        for (const auto &b : blocks)
        {
            out.middleCols(c, b.cols()) = b;
            c += b.cols();
        }
        return out;
    }

    std::vector<CMatrix> hsplit(const CMatrix &a, Index block_cols)
    {
        if (block_cols < 1 || a.cols() % block_cols != 0)
            throw std::invalid_argument("hsplit: column count not a multiple of the block width");
        std::vector<CMatrix> out;
        for (Index c = 0; c < a.cols(); c += block_cols)
            out.push_back(a.middleCols(c, block_cols));
        return out;
    }
}
