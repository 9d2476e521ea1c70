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

#include "beamkit/jrc.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

#include "beamkit/channel.hpp"
#include "beamkit/linalg.hpp"

namespace beamkit
{
    CMatrix HybridBeamformer::effective(std::size_t m, bool corrected) const
    {
        const auto &bb = corrected ? f_bb_corrected : f_bb;
        if (m >= bb.size())
            throw std::out_of_range(corrected ? "no corrected baseband precoder for this subcarrier"
                                              : "subcarrier index out of range");
        return f_rf * bb[m];
    }

    CMatrix HybridBeamformer::stacked(bool corrected) const
    {
        const auto &bb = corrected ? f_bb_corrected : f_bb;
        std::vector<CMatrix> blocks;
        blocks.reserve(bb.size());
        for (const CMatrix &b : bb)
            blocks.push_back(f_rf * b);
        return hstack(blocks);
    }

    void JrcProblem::validate() const
    {
        if (!(eta >= 0.0 && eta <= 1.0))
            throw std::invalid_argument("jrc: eta must lie in [0, 1]");
        if (f_c.empty())
            throw std::invalid_argument("jrc: need at least one subcarrier");
        if (n_s < 1)
            throw std::invalid_argument("jrc: N_S must be >= 1");
        const Index n_t = mask.n_rows();
        if (n_t == 0)
            throw std::invalid_argument("jrc: empty connectivity mask");
        if (mask.n_cols() < n_s)
            throw std::invalid_argument("jrc: N_RF must be >= N_S");
        for (const CMatrix &f : f_c)
            if (f.rows() != n_t || f.cols() != n_s)
                throw std::invalid_argument("jrc: communications precoders must be N_T x N_S");
        if (eta < 1.0 || f_r.cols() > 0)
        {
            if (f_r.rows() != n_t || f_r.cols() < 1)
                throw std::invalid_argument("jrc: radar beamformer must be N_T x K with K >= 1");
            if (k() > n_s)
                throw std::invalid_argument("jrc: K = " + std::to_string(k()) + " exceeds N_S = " +
                                            std::to_string(n_s));
        }
        if (opts.fix_p_identity && k() != n_s)
            throw std::invalid_argument("jrc: fixing P to the identity needs K = N_S");
        if (opts.max_outer < 1 || !(opts.rel_tol >= 0.0))
            throw std::invalid_argument("jrc: need max_outer >= 1 and rel_tol >= 0");
        opts.mmo.validate();
    }

    CMatrix update_p(const CMatrix &f_r, const CMatrix &f_rf, const CMatrix &f_bb, bool *rank_deficient)
    {
        const Index k = f_r.cols(), n_s = f_bb.cols();
        if (k > n_s)
            throw std::invalid_argument("update_p: K exceeds N_S");
        const CMatrix inner = f_r.adjoint() * f_rf * f_bb; // K x N_S
        Eigen::JacobiSVD<CMatrix> svd(inner, Eigen::ComputeFullU | Eigen::ComputeFullV);
        if (rank_deficient)
        {
            const Eigen::VectorXd &s = svd.singularValues();
            *rank_deficient = s.size() == 0 || s(s.size() - 1) <= 1e-12 * std::max(s(0), 1e-300);
        }
        return svd.matrixU() * svd.matrixV().leftCols(k).adjoint();
    }

    CMatrix update_fbb(const CMatrix &f_rf, const CMatrix &f_cr, bool *rank_deficient)
    {
        if (f_rf.rows() != f_cr.rows())
            throw std::invalid_argument("update_fbb: F_RF and F_CR row counts differ");
        Index rank = 0;
        CMatrix f_bb = pinv(f_rf, 1e-12, &rank) * f_cr;
        if (rank_deficient)
            *rank_deficient = rank < f_rf.cols();
        const double norm = (f_rf * f_bb).norm();
        if (norm > 0.0)
            f_bb *= std::sqrt(double(f_cr.cols())) / norm;
        return f_bb;
    }

    CMatrix joint_target(const JrcProblem &problem, std::size_t m, const CMatrix &p)
    {
        if (problem.eta >= 1.0 || p.size() == 0)
            return problem.f_c[m];
        return problem.eta * problem.f_c[m] + (1.0 - problem.eta) * problem.f_r * p;
    }

    namespace
    {
        struct State
        {
            CMatrix f_rf;
            std::vector<CMatrix> f_bb;
            std::vector<CMatrix> p;
            double cost = 0.0;
        };

        double joint_cost(const CMatrix &f_rf, const std::vector<CMatrix> &f_bb, const std::vector<CMatrix> &f_cr)
        {
            double s = 0.0;
            for (std::size_t m = 0; m < f_bb.size(); ++m)
                s += (f_rf * f_bb[m] - f_cr[m]).squaredNorm();
            return std::sqrt(s);
        }
    }

    JrcSolution solve(const JrcProblem &problem, std::uint64_t seed, const std::optional<CMatrix> &f_rf_init)
    {
        problem.validate();
        const ConnectivityMask &mask = problem.mask;
        const std::size_t n_sc = problem.f_c.size();
        const bool use_p = problem.eta < 1.0;
        const Index k = problem.k();
        Rng rng(seed);

        State cur;
        const double modulus = 1.0 / std::sqrt(double(mask.n_rows()));
        if (f_rf_init)
        {
            if (f_rf_init->rows() != mask.n_rows() || f_rf_init->cols() != mask.n_cols())
                throw std::invalid_argument("jrc: initial F_RF has the wrong shape");
            cur.f_rf = CMatrix::Zero(mask.n_rows(), mask.n_cols());
            for (const auto &[i, j] : mask.nonzero_entries())
            {
                const cd v = (*f_rf_init)(i, j);
                cur.f_rf(i, j) = std::abs(v) > 0.0 ? v * (modulus / std::abs(v)) : cd(modulus, 0.0);
            }
        }
        else
        {
            cur.f_rf = CMatrix::Zero(mask.n_rows(), mask.n_cols());
            for (const auto &[i, j] : mask.nonzero_entries())
                cur.f_rf(i, j) = std::polar(modulus, rng.uniform(0.0, 2.0 * pi));
        }
        cur.f_bb.resize(n_sc);
        for (std::size_t m = 0; m < n_sc; ++m)
        {
            CMatrix b(mask.n_cols(), problem.n_s);
            for (Index j = 0; j < b.cols(); ++j)
                for (Index i = 0; i < b.rows(); ++i)
                    b(i, j) = rng.complex_normal();
            const double norm = (cur.f_rf * b).norm();
            cur.f_bb[m] = norm > 0.0 ? CMatrix(b * (std::sqrt(double(problem.n_s)) / norm)) : b;
        }

        JrcSolution sol;
        JrcDiagnostics &diag = sol.diagnostics;
        for (int it = 0; it < problem.opts.max_outer; ++it)
        {
            State next;
            std::vector<CMatrix> f_cr(n_sc);
            if (use_p)
            {
                next.p.resize(n_sc);
                for (std::size_t m = 0; m < n_sc; ++m)
                {
                    if (problem.opts.fix_p_identity)
                        next.p[m] = CMatrix::Identity(k, problem.n_s);
                    else
                    {
                        bool deficient = false;
                        next.p[m] = update_p(problem.f_r, cur.f_rf, cur.f_bb[m], &deficient);
                        diag.rank_deficient |= deficient;
                    }
                }
            }
            for (std::size_t m = 0; m < n_sc; ++m)
                f_cr[m] = joint_target(problem, m, use_p ? next.p[m] : CMatrix());

            std::vector<CMatrix> bb(n_sc);
            for (std::size_t m = 0; m < n_sc; ++m)
            {
                bool deficient = false;
                bb[m] = update_fbb(cur.f_rf, f_cr[m], &deficient);
                diag.rank_deficient |= deficient;
            }

            const ReducedProblem reduced(hstack(bb), hstack(f_cr), mask);
            const MmoResult mmo = optimize(reduced, reduced.gather(cur.f_rf), problem.opts.mmo);
            diag.mmo_iterations += mmo.iterations;
            diag.mmo_stalled |= mmo.status == MmoStatus::stalled;
            next.f_rf = reduced.scatter(mmo.x);

            next.f_bb.resize(n_sc);
            for (std::size_t m = 0; m < n_sc; ++m)
            {
                bool deficient = false;
                next.f_bb[m] = update_fbb(next.f_rf, f_cr[m], &deficient);
                diag.rank_deficient |= deficient;
            }
            next.cost = joint_cost(next.f_rf, next.f_bb, f_cr);

            if (it > 0 && next.cost > cur.cost)
            {
                diag.rejected_step = true;
                break;
            }
            const double prev = cur.cost;
            cur = std::move(next);
            diag.cost_trace.push_back(cur.cost);
            diag.outer_iterations = it + 1;
            if (it > 0 && prev - cur.cost <= problem.opts.rel_tol * prev)
                break;
        }

        sol.bf.f_rf = std::move(cur.f_rf);
        sol.bf.mask = mask;
        sol.bf.f_bb = std::move(cur.f_bb);
        sol.p = std::move(cur.p);
        return sol;
    }

    CMatrix combine_precoders(const HybridBeamformer &comm, const HybridBeamformer &radar, double eta)
    {
        if (!(eta >= 0.0 && eta <= 1.0))
            throw std::invalid_argument("combine_precoders: eta must lie in [0, 1]");
        if (comm.f_bb.size() != radar.f_bb.size())
            throw std::invalid_argument("combine_precoders: subcarrier counts differ");
        const CMatrix c = comm.stacked(), r = radar.stacked();
        if (c.rows() != r.rows() || c.cols() != r.cols())
            throw std::invalid_argument("combine_precoders: the radar solve must use K = N_S");
        return eta * c + (1.0 - eta) * r;
    }

    namespace
    {
        // Direction cosines (u, v) of the strongest linear phase ramp on the support of one RF column
        std::pair<double, double> dominant_ramp(const std::vector<std::pair<Eigen::Vector2d, cd>> &entries, double k_c,
                                                double step0)
        {
            auto score = [&](double u, double v) {
                cd acc = 0.0;
                for (const auto &[c, f] : entries)
                    acc += f * std::polar(1.0, k_c * (c.x() * u + c.y() * v));
                return std::norm(acc);
            };
            double bu = 0.0, bv = 0.0, best = -1.0;
            const int n0 = int(std::ceil(1.0 / step0));
            for (int a = -n0; a <= n0; ++a)
                for (int b = -n0; b <= n0; ++b)
                {
                    const double u = a * step0, v = b * step0;
                    if (u * u + v * v > 1.0)
                        continue;
                    const double s = score(u, v);
                    if (s > best)
                    {
                        best = s;
                        bu = u;
                        bv = v;
                    }
                }
            double step = step0;
            for (int stage = 0; stage < 4; ++stage)
            {
                step /= 4.0;
                const double cu = bu, cv = bv;
                for (int a = -4; a <= 4; ++a)
                    for (int b = -4; b <= 4; ++b)
                    {
                        const double u = cu + a * step, v = cv + b * step;
                        if (u * u + v * v > 1.0)
                            continue;
                        const double s = score(u, v);
                        if (s > best)
                        {
                            best = s;
                            bu = u;
                            bv = v;
                        }
                    }
            }
            return {bu, bv};
        }
    }

    std::vector<CMatrix> split_corrected_rf(const HybridBeamformer &bf, const ArrayGeometry &tx,
                                            const CarrierConfig &cfg, const BeamSplitOptions &opts)
    {
        const ConnectivityMask &mask = bf.mask;
        if (bf.f_rf.rows() != tx.n_sub() || mask.n_rows() != tx.n_sub())
            throw std::invalid_argument("beam split: RF precoder does not match the array");
        const std::vector<double> freqs = subcarrier_frequencies(cfg);
        const double modulus = 1.0 / std::sqrt(double(mask.n_rows()));
        const double k_c = 2.0 * pi * cfg.f_c / speed_of_light;

        // Unwrapped phase of every support entry
        Eigen::MatrixXd unwrapped = Eigen::MatrixXd::Zero(bf.f_rf.rows(), bf.f_rf.cols());
        const double pitch = std::max(std::max(tx.subarray_spacing_x, tx.subarray_spacing_y), 1e-300);
        const double step0 = std::min(0.25, 0.25 * speed_of_light / cfg.f_c /
                                                (pitch * std::max(tx.n_sub_x, tx.n_sub_y)));
        for (int j = 0; j < mask.n_cols(); ++j)
        {
            double u = 0.0, v = 0.0;
            if (opts.unwrap)
            {
                std::vector<std::pair<Eigen::Vector2d, cd>> entries;
                for (int i = mask.start(j); i < mask.start(j) + mask.length(j); ++i)
                {
                    const Eigen::Vector3d c = tx.subarray_center(i);
                    entries.emplace_back(Eigen::Vector2d(c.x(), c.y()), bf.f_rf(i, j));
                }
                std::tie(u, v) = dominant_ramp(entries, k_c, step0);
            }
            for (int i = mask.start(j); i < mask.start(j) + mask.length(j); ++i)
            {
                const Eigen::Vector3d c = tx.subarray_center(i);
                const double ramp = -k_c * (c.x() * u + c.y() * v);
                const double residual = std::arg(bf.f_rf(i, j) * std::polar(1.0, -ramp));
                unwrapped(i, j) = ramp + residual;
            }
        }

        std::vector<CMatrix> out(freqs.size());
        for (std::size_t m = 0; m < freqs.size(); ++m)
        {
            const double ratio = opts.inverse_ratio ? cfg.f_c / freqs[m] : freqs[m] / cfg.f_c;
            CMatrix f = CMatrix::Zero(bf.f_rf.rows(), bf.f_rf.cols());
            for (const auto &[i, j] : mask.nonzero_entries())
                f(i, j) = std::polar(modulus, ratio * unwrapped(i, j));
            out[m] = std::move(f);
        }
        return out;
    }

    std::vector<CMatrix> beam_split_correct(const HybridBeamformer &bf, const ArrayGeometry &tx,
                                            const CarrierConfig &cfg, const BeamSplitOptions &opts,
                                            bool *rank_deficient)
    {
        if (bf.f_bb.size() != std::size_t(cfg.n_subcarriers))
            throw std::invalid_argument("beam split: baseband count does not match the carrier");
        const std::vector<CMatrix> rf_c = split_corrected_rf(bf, tx, cfg, opts);
        Index rank = 0;
        const CMatrix rf_pinv = pinv(bf.f_rf, 1e-12, &rank);
        if (rank_deficient)
            *rank_deficient = rank < bf.f_rf.cols();

        std::vector<CMatrix> out(rf_c.size());
        for (std::size_t m = 0; m < rf_c.size(); ++m)
        {
            CMatrix b = rf_pinv * rf_c[m] * bf.f_bb[m];
            const double norm = (bf.f_rf * b).norm();
            if (norm > 0.0)
                b *= std::sqrt(double(b.cols())) / norm;
            out[m] = std::move(b);
        }
        return out;
    }
}
