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

#include "beamkit/mmo.hpp"

#include <cmath>
#include <stdexcept>

#include "beamkit/channel.hpp"

namespace beamkit
{
    void MmoOptions::validate() const
    {
        if (max_iters < 0)
            throw std::invalid_argument("mmo: max_iters must be >= 0");
        if (!(grad_tol > 0.0))
            throw std::invalid_argument("mmo: grad_tol must be positive");
        if (!(armijo.initial_step > 0.0) || !(armijo.sufficient_decrease > 0.0) || armijo.max_backtracks < 1)
            throw std::invalid_argument("mmo: Armijo step, decrease constant and backtrack count must be positive");
        if (!(armijo.contraction > 0.0 && armijo.contraction < 1.0))
            throw std::invalid_argument("mmo: Armijo contraction must lie in (0, 1)");
    }

    ReducedProblem::ReducedProblem(CMatrix f_bb_all, CMatrix f_cr_all, ConnectivityMask mask)
        : f_bb_(std::move(f_bb_all)), f_cr_(std::move(f_cr_all)), mask_(std::move(mask)),
          modulus_(1.0 / std::sqrt(double(mask_.n_rows())))
    {
        if (f_bb_.rows() != mask_.n_cols())
            throw std::invalid_argument("mmo: baseband rows must equal the mask column count");
        if (f_cr_.rows() != mask_.n_rows())
            throw std::invalid_argument("mmo: target rows must equal the mask row count");
        if (f_bb_.cols() != f_cr_.cols())
            throw std::invalid_argument("mmo: baseband and target column counts differ");
    }

    CMatrix ReducedProblem::scatter(const CVector &x) const
    {
        if (x.size() != size())
            throw std::invalid_argument("mmo: point length does not match the mask");
        CMatrix f = CMatrix::Zero(mask_.n_rows(), mask_.n_cols());
        const auto &pos = mask_.nonzero_positions();
        for (Index t = 0; t < x.size(); ++t)
            f.data()[pos[t]] = x(t);
        return f;
    }

    CVector ReducedProblem::gather(const CMatrix &f) const
    {
        if (f.rows() != mask_.n_rows() || f.cols() != mask_.n_cols())
            throw std::invalid_argument("mmo: matrix shape does not match the mask");
        const auto &pos = mask_.nonzero_positions();
        CVector x(Index(pos.size()));
        for (Index t = 0; t < x.size(); ++t)
            x(t) = f.data()[pos[t]];
        return x;
    }

    double ReducedProblem::cost(const CVector &x) const
    {
        return (scatter(x) * f_bb_ - f_cr_).squaredNorm();
    }

    CVector ReducedProblem::euclidean_gradient(const CVector &x) const
    {
        return gather(2.0 * (scatter(x) * f_bb_ - f_cr_) * f_bb_.adjoint());
    }

    CVector riemannian_gradient(const CVector &x, const CVector &egrad)
    {
        if (x.size() != egrad.size())
            throw std::invalid_argument("riemannian_gradient: size mismatch");
        CVector g(x.size());
        for (Index i = 0; i < x.size(); ++i)
        {
            const double r2 = std::norm(x(i));
            g(i) = r2 > 0.0 ? egrad(i) - (egrad(i) * std::conj(x(i))).real() * x(i) / r2 : egrad(i);
        }
        return g;
    }

    CVector retract(const CVector &v, double modulus)
    {
        CVector out(v.size());
        for (Index i = 0; i < v.size(); ++i)
        {
            const double a = std::abs(v(i));
            out(i) = a > 0.0 ? v(i) * (modulus / a) : cd(modulus, 0.0);
        }
        return out;
    }

    std::string to_string(MmoStatus s)
    {
        switch (s)
        {
        case MmoStatus::converged:
            return "converged";
        case MmoStatus::max_iterations:
            return "max-iterations";
        case MmoStatus::stalled:
            return "stalled";
        }
        return "unknown";
    }

    static double real_inner(const CVector &a, const CVector &b)
    {
        return a.dot(b).real(); // Eigen's dot conjugates the first argument
    }

    MmoResult optimize(const ReducedProblem &problem, const CVector &x0, const MmoOptions &opts)
    {
        opts.validate();
        const double r = problem.modulus();
        if (x0.size() != problem.size())
            throw std::invalid_argument("mmo: initial point length does not match the mask");
        for (Index i = 0; i < x0.size(); ++i)
            if (std::abs(std::abs(x0(i)) - r) > 1e-8)
                throw std::invalid_argument("mmo: initial point is not on the manifold");

        MmoResult res;
        res.x = x0;
        double f = problem.cost(res.x);
        CVector grad = riemannian_gradient(res.x, problem.euclidean_gradient(res.x));
        res.gradient_evaluations = 1;
        res.cost_trace.push_back(f);
        if (grad.norm() < opts.grad_tol)
        {
            res.status = MmoStatus::converged;
            return res;
        }

        const ArmijoOptions &ls = opts.armijo;
        CVector d = -grad;
        res.status = MmoStatus::max_iterations;

        // Returns true and updates x_new / f_new when a step along dir passes the Armijo test
        auto line_search = [&](const CVector &dir, double slope, CVector &x_new, double &f_new) {
            double alpha = ls.initial_step;
            for (int b = 0; b < ls.max_backtracks; ++b, alpha *= ls.contraction)
            {
                x_new = retract(res.x + alpha * dir, r);
                f_new = problem.cost(x_new);
                if (f_new <= f + ls.sufficient_decrease * alpha * slope)
                {
                    // Armijo alone happily accepts a step that jumps across the minimum and lands at
                    // nearly the same cost, which makes steepest descent zig-zag. Try the minimizer of
                    // the quadratic through f, slope and f_new; keep it only if it is strictly better.
                    const double curv = f_new - f - slope * alpha;
                    if (curv > 0.0)
                    {
                        const double alpha_q = -slope * alpha * alpha / (2.0 * curv);
                        if (alpha_q > 0.0 && alpha_q < alpha)
                        {
                            CVector x_q = retract(res.x + alpha_q * dir, r);
                            const double f_q = problem.cost(x_q);
                            if (f_q < f_new)
                            {
                                x_new = std::move(x_q);
                                f_new = f_q;
                            }
                        }
                    }
                    return true;
                }
            }
            return false;
        };

        for (int k = 0; k < opts.max_iters; ++k)
        {
            double slope = real_inner(grad, d);
            if (!(slope < 0.0))
            {
                d = -grad;
                slope = -grad.squaredNorm();
            }

            CVector x_new;
            double f_new = f;
            bool ok = line_search(d, slope, x_new, f_new);
            if (!ok && (d + grad).norm() > 0.0)
            {
                d = -grad;
                ok = line_search(d, -grad.squaredNorm(), x_new, f_new);
            }
            if (!ok)
            {
                res.status = MmoStatus::stalled;
                break;
            }

            const CVector grad_new = riemannian_gradient(x_new, problem.euclidean_gradient(x_new));
            ++res.gradient_evaluations;
            ++res.iterations;
            res.cost_trace.push_back(f_new);

            if (grad_new.norm() < opts.grad_tol)
            {
                res.x = x_new;
                res.status = MmoStatus::converged;
                break;
            }

            // Transport the previous direction and gradient into the new tangent space
            const CVector d_t = riemannian_gradient(x_new, d);
            const CVector g_t = riemannian_gradient(x_new, grad);
            const double beta = std::max(0.0, real_inner(grad_new, grad_new - g_t) / grad.squaredNorm());
            d = -grad_new + beta * d_t;

            res.x = x_new;
            f = f_new;
            grad = grad_new;
        }
        return res;
    }

    CVector random_point(const ReducedProblem &problem, std::uint64_t seed)
    {
        Rng rng(seed);
        CVector x(problem.size());
        for (Index i = 0; i < x.size(); ++i)
            x(i) = std::polar(problem.modulus(), rng.uniform(0.0, 2.0 * pi));
        return x;
    }
}
