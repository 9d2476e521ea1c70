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

#ifndef BEAMKIT_JRC_HPP
#define BEAMKIT_JRC_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "beamkit/geometry.hpp"
#include "beamkit/mmo.hpp"

namespace beamkit
{
    struct HybridBeamformer
    {
        CMatrix f_rf; // N_T x N_RF, zero off the mask
        ConnectivityMask mask;
        std::vector<CMatrix> f_bb;           // M matrices, N_RF x N_S
        std::vector<CMatrix> f_bb_corrected; // empty until beam-split correction runs

        // F_RF F_BB[m], or F_RF F_BB^c[m] when corrected
        CMatrix effective(std::size_t m, bool corrected = false) const;

        // [F_RF F_BB[1], ..., F_RF F_BB[M]]
        CMatrix stacked(bool corrected = false) const;
    };

    struct SolverOptions
    {
        int max_outer = 10;
        double rel_tol = 1e-6;
        MmoOptions mmo;
        bool fix_p_identity = false; // P[m] = I (requires K = N_S), used when radar and communication designs are combined afterwards
    };

    struct JrcProblem
    {
        std::vector<CMatrix> f_c; // M unconstrained communications precoders, N_T x N_S
        CMatrix f_r;              // N_T x K radar beamformer; may have zero columns when eta = 1
        double eta = 0.5;
        ConnectivityMask mask;
        int n_s = 1;
        SolverOptions opts;

        int k() const { return int(f_r.cols()); }
        void validate() const;
    };

    struct JrcDiagnostics
    {
        std::vector<double> cost_trace; // ||F_RF F_BB - F_CR||_F over all subcarriers, one entry per accepted iteration
        int outer_iterations = 0;
        int mmo_iterations = 0;
        bool mmo_stalled = false;
        bool rank_deficient = false;
        bool rejected_step = false; // an outer step raised the cost and was discarded
    };

    struct JrcSolution
    {
        HybridBeamformer bf;
        std::vector<CMatrix> p; // K x N_S per subcarrier (empty when eta = 1)
        JrcDiagnostics diagnostics;
    };

    // P = U [I_K 0] V^H from the SVD of F_R^H F_RF F_BB. rank_deficient, when given, is set if that product
    // has rank below K.
    CMatrix update_p(const CMatrix &f_r, const CMatrix &f_rf, const CMatrix &f_bb, bool *rank_deficient = nullptr);

    // F_BB = pinv(F_RF) F_CR scaled so that ||F_RF F_BB||_F = sqrt(N_S)
    CMatrix update_fbb(const CMatrix &f_rf, const CMatrix &f_cr, bool *rank_deficient = nullptr);

    // F_CR[m] = eta F_C[m] + (1 - eta) F_R P[m]
    CMatrix joint_target(const JrcProblem &problem, std::size_t m, const CMatrix &p);

    // Alternating minimization over P, F_BB and F_RF. The first F_RF is random on the mask support; later
    // manifold solves start from the current F_RF. f_rf_init replaces the random start when given.
    JrcSolution solve(const JrcProblem &problem, std::uint64_t seed,
                      const std::optional<CMatrix> &f_rf_init = std::nullopt);

    // eta (F_RF^C F_BB^C) + (1 - eta) (F_RF^R F_BB^R), stacked over subcarriers
    CMatrix combine_precoders(const HybridBeamformer &comm, const HybridBeamformer &radar, double eta);

    struct BeamSplitOptions
    {
        // Multiply phases by f_c / f_m instead of f_m / f_c. The former steers the band-edge beams
        // further away; kept for comparison.
        bool inverse_ratio = false;

        // Unwrap each RF column against its dominant linear phase ramp before scaling. Without it the
        // principal-value phases are scaled and the ramp is largely lost to wrapping.
        bool unwrap = true;
    };

    // Frequency-dependent RF precoder: support phases scaled per subcarrier, modulus kept at 1/sqrt(N_T)
    std::vector<CMatrix> split_corrected_rf(const HybridBeamformer &bf, const ArrayGeometry &tx,
                                            const CarrierConfig &cfg, const BeamSplitOptions &opts = {});

    // F_BB^c[m] = pinv(F_RF) F_RF^c[m] F_BB[m], normalized to ||F_RF F_BB^c[m]||_F = sqrt(N_S)
    std::vector<CMatrix> beam_split_correct(const HybridBeamformer &bf, const ArrayGeometry &tx,
                                            const CarrierConfig &cfg, const BeamSplitOptions &opts = {},
                                            bool *rank_deficient = nullptr);
}

#endif
