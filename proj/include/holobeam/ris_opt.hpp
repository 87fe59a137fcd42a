// SPDX-License-Identifier: Apache-2.0
//
// holobeam - joint digital, holographic and RIS beamforming for RHS-RIS MU-MISO downlinks
// Copyright (C) 2026 The holobeam authors
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

#ifndef HOLOBEAM_RIS_OPT_HPP
#define HOLOBEAM_RIS_OPT_HPP

#include "channel.hpp"
#include "common.hpp"

#include <cmath>
#include <vector>

namespace holobeam
{
    // Per-user link coefficients for the RIS phase subproblem. For receiving user k and
    // stream k', the received amplitude is conj(theta^H a_{k',k} + b_{k',k}), so
    // |theta^H a_{k',k} + b_{k',k}|^2 is the received power.
    struct RisLink
    {
        std::vector<CMatrix> a; // a[k] is N_RIS x K, column k' holds a_{k',k}
        CMatrix b;              // K x K, b(k', k)
        double sigma2 = 0.0;

        Eigen::Index k() const { return b.cols(); }
        Eigen::Index n_ris() const { return a.empty() ? 0 : a.front().rows(); }
    };

    // x = M_v f_{k'};  a_{k',k} = conj(h_{R,k}^T o (G_R x)),  b_{k',k} = conj(h_{d,k}^H x).
    inline RisLink build_ris_link(const ChannelSet &ch, const CMatrix &m_v, const CMatrix &f, double sigma2)
    {
        const auto k = ch.h_d.rows();
        if (m_v.rows() != ch.h_d.cols() || m_v.cols() != f.rows() || f.cols() != k)
            throw Error("incompatible channel dimensions");
        const CMatrix x = m_v * f;           // N_t x K
        const CMatrix gx = ch.g_r * x;       // N_RIS x K
        RisLink link;
        link.sigma2 = sigma2;
        link.b = (ch.h_d * x).transpose().conjugate(); // (k', k)
        link.a.resize(static_cast<std::size_t>(k));
        for (Eigen::Index user = 0; user < k; ++user)
        {
            CMatrix ak(ch.h_r.cols(), k);
            for (Eigen::Index stream = 0; stream < k; ++stream)
                ak.col(stream) = ch.h_r.row(user).transpose().cwiseProduct(gx.col(stream)).conjugate();
            link.a[static_cast<std::size_t>(user)] = std::move(ak);
        }
        return link;
    }

    namespace detail
    {
        // z(k', k) = theta^H a_{k',k} + b_{k',k}
        inline CMatrix ris_amplitudes(const RisLink &link, const CVector &theta)
        {
            const auto k = link.k();
            CMatrix z(k, k);
            for (Eigen::Index user = 0; user < k; ++user)
                z.col(user) = (theta.adjoint() * link.a[static_cast<std::size_t>(user)]).transpose() + link.b.col(user);
            return z;
        }
    }

    // Sum of log(1 + SINR_k) in nats.
    inline double objective_nats(const RisLink &link, const CVector &theta)
    {
        const CMatrix z = detail::ris_amplitudes(link, theta);
        double total = 0.0;
        for (Eigen::Index user = 0; user < link.k(); ++user)
        {
            const double all = z.col(user).squaredNorm() + link.sigma2;
            const double sig = std::norm(z(user, user));
            total += std::log(all) - std::log(all - sig);
        }
        return total;
    }

    // Sum-rate in bps/Hz.
    inline double objective(const RisLink &link, const CVector &theta)
    {
        return objective_nats(link, theta) / std::log(2.0);
    }

    // Gradient of the nats objective with respect to theta, as d/dRe + j d/dIm.
    inline CVector euclidean_gradient(const RisLink &link, const CVector &theta)
    {
        const CMatrix z = detail::ris_amplitudes(link, theta);
        CVector g = CVector::Zero(theta.size());
        for (Eigen::Index user = 0; user < link.k(); ++user)
        {
            const auto &ak = link.a[static_cast<std::size_t>(user)];
            const double all = z.col(user).squaredNorm() + link.sigma2;
            const double interf = all - std::norm(z(user, user));
            CVector with_signal = ak * z.col(user).conjugate();
            CVector without_signal = with_signal - ak.col(user) * std::conj(z(user, user));
            g += 2.0 * (with_signal / all - without_signal / interf);
        }
        return g;
    }

    // Projection onto the tangent space of the complex circle at theta.
    inline CVector riemannian_gradient(const CVector &theta, const CVector &egrad)
    {
        const RVector radial = egrad.cwiseProduct(theta.conjugate()).real();
        return egrad - radial.cast<cplx>().cwiseProduct(theta);
    }

    inline CVector transport(const CVector &theta_new, const CVector &eta_old)
    {
        return riemannian_gradient(theta_new, eta_old);
    }

    inline CVector retract(const CVector &theta, const CVector &eta, double step)
    {
        CVector out = theta + step * eta;
        for (Eigen::Index i = 0; i < out.size(); ++i)
        {
            const double r = std::abs(out(i));
            if (!(r > 0.0) || !std::isfinite(r))
                throw Error("retraction singularity");
            out(i) /= r;
        }
        return out;
    }

    struct RcgOptions
    {
        int max_iters = 200;
        double grad_tol = 1e-6; // on |grad f| / |Euclidean gradient|, so the test ignores the SNR scale
        double armijo_c = 1e-4;
        double shrink = 0.5;
        double initial_step = 1.0; // in units of 1 / max_i |d_i|, i.e. a trial rotation of about one radian
        int max_halvings = 50;
        bool keep_iterates = false;
    };

    struct RcgTrace
    {
        std::vector<double> objective;   // bps/Hz, starting at theta_init
        std::vector<double> grad_norm;
        std::vector<CVector> iterates;   // filled when keep_iterates is set
        int iterations = 0;
        bool line_search_failed = false;
        bool converged = false;
    };

    struct RcgResult
    {
        CVector theta;
        RcgTrace trace;
    };

    namespace detail
    {
        inline double inner(const CVector &x, const CVector &y)
        {
            return x.dot(y).real(); // Re(x^H y)
        }
    }

    // Riemannian conjugate-gradient ascent with Polak-Ribiere+ and Armijo backtracking.
    inline RcgResult solve_p3(const RisLink &link, const CVector &theta_init, const RcgOptions &opt = {})
    {
        if (theta_init.size() != link.n_ris())
            throw Error("incompatible channel dimensions");
        for (Eigen::Index i = 0; i < theta_init.size(); ++i)
            if (std::abs(std::abs(theta_init(i)) - 1.0) > 1e-9)
                throw Error("RIS phases must be unit modulus");

        RcgResult out;
        CVector theta = retract(theta_init, CVector::Zero(theta_init.size()), 0.0);
        double f = objective_nats(link, theta);
        CVector eg = euclidean_gradient(link, theta);
        CVector g = riemannian_gradient(theta, eg);
        auto stationary = [&]() { return g.norm() <= opt.grad_tol * eg.norm(); };
        CVector d = g;
        const double ln2 = std::log(2.0);
        out.trace.objective.push_back(f / ln2);
        out.trace.grad_norm.push_back(g.norm());
        if (opt.keep_iterates)
            out.trace.iterates.push_back(theta);
        const Eigen::Index restart_every = std::max<Eigen::Index>(1, theta.size());

        for (int it = 0; it < opt.max_iters; ++it)
        {
            if (stationary())
            {
                out.trace.converged = true;
                break;
            }
            double slope = detail::inner(g, d);
            if (!(slope > 0.0))
            {
                d = g;
                slope = g.squaredNorm();
            }

            double step = opt.initial_step / d.cwiseAbs().maxCoeff();
            bool accepted = false;
            CVector theta_new;
            double f_new = f;
            for (int h = 0; h <= opt.max_halvings; ++h, step *= opt.shrink)
            {
                try
                {
                    theta_new = retract(theta, d, step);
                }
                catch (const Error &)
                {
                    continue;
                }
                f_new = objective_nats(link, theta_new);
                if (f_new >= f + opt.armijo_c * step * slope)
                {
                    accepted = true;
                    break;
                }
            }
            if (!accepted)
            {
                out.trace.line_search_failed = true;
                break;
            }

            eg = euclidean_gradient(link, theta_new);
            const CVector g_new = riemannian_gradient(theta_new, eg);
            const CVector g_old_t = transport(theta_new, g);
            const CVector d_old_t = transport(theta_new, d);
            double beta = detail::inner(g_new, g_new - g_old_t) / g.squaredNorm();
            if (!(beta > 0.0) || (it + 1) % restart_every == 0)
                beta = 0.0;
            d = g_new + beta * d_old_t;

            theta = theta_new;
            f = f_new;
            g = g_new;
            ++out.trace.iterations;
            out.trace.objective.push_back(f / ln2);
            out.trace.grad_norm.push_back(g.norm());
            if (opt.keep_iterates)
                out.trace.iterates.push_back(theta);
        }
        if (!out.trace.converged && stationary())
            out.trace.converged = true;
        out.theta = theta;
        return out;
    }

    inline RcgResult solve_p3(const RisLink &link, const CVector &theta_init, int max_iters, double grad_tol)
    {
        RcgOptions opt;
        opt.max_iters = max_iters;
        opt.grad_tol = grad_tol;
        return solve_p3(link, theta_init, opt);
    }
}

#endif
