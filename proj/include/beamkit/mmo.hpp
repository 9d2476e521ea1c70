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

#ifndef BEAMKIT_MMO_HPP
#define BEAMKIT_MMO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "beamkit/geometry.hpp"

namespace beamkit
{
    struct ArmijoOptions
    {
        double initial_step = 1.0;
        double contraction = 0.5;
        double sufficient_decrease = 1e-4;
        int max_backtracks = 50;
    };

    struct MmoOptions
    {
        int max_iters = 20;
        double grad_tol = 1e-6;
        ArmijoOptions armijo;

        void validate() const;
    };

    // min ||F_RF(x) Fbb - Fcr||_F^2 over the masked RF precoder, where x holds the T = |V| entries on the
    // support (column-major order). Cost and gradient work on the N_T x N_RF matrix directly, so the
    // Kronecker-structured system matrix is never formed.
    class ReducedProblem
    {
    public:
        ReducedProblem(CMatrix f_bb_all, CMatrix f_cr_all, ConnectivityMask mask);

        const ConnectivityMask &mask() const { return mask_; }
        Index size() const { return mask_.size(); }
        double modulus() const { return modulus_; } // 1 / sqrt(N_T)

        CMatrix scatter(const CVector &x) const; // T -> N_T x N_RF, zeros off the support
        CVector gather(const CMatrix &f) const;  // N_T x N_RF -> T

        double cost(const CVector &x) const;

        // Mask restriction of 2 (F_RF Fbb - Fcr) Fbb^H; df = Re sum conj(g_i) dx_i
        CVector euclidean_gradient(const CVector &x) const;

        const CMatrix &f_bb() const { return f_bb_; }
        const CMatrix &f_cr() const { return f_cr_; }

    private:
        CMatrix f_bb_;
        CMatrix f_cr_;
        ConnectivityMask mask_;
        double modulus_;
    };

    // Tangent projection on the complex circle of radius |x_i|: g - Re{g conj(x)} x / |x|^2
    CVector riemannian_gradient(const CVector &x, const CVector &egrad);

    // Entrywise renormalization to the given modulus
    CVector retract(const CVector &v, double modulus);

    enum class MmoStatus
    {
        converged,     // gradient norm below tolerance
        max_iterations,
        stalled        // line search failed along steepest descent
    };

    std::string to_string(MmoStatus s);

    struct MmoResult
    {
        CVector x;
        std::vector<double> cost_trace; // cost at x0 followed by one entry per accepted step
        int iterations = 0;
        int gradient_evaluations = 0;
        MmoStatus status = MmoStatus::max_iterations;
    };

    // Riemannian conjugate gradient with Polak-Ribiere (clamped at zero) and Armijo backtracking.
    // An accepted Armijo step is refined by one quadratic-interpolation trial when that lowers the cost.
    MmoResult optimize(const ReducedProblem &problem, const CVector &x0, const MmoOptions &opts = {});

    // Uniform random phases on the support, modulus 1/sqrt(N_T)
    CVector random_point(const ReducedProblem &problem, std::uint64_t seed);
}

#endif
