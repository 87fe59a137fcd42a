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

#ifndef HOLOBEAM_HOLO_BF_HPP
#define HOLOBEAM_HOLO_BF_HPP

#include "common.hpp"
#include "digital_bf.hpp"
#include "rates.hpp"
#include "rhs.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace holobeam
{
    // Quadratic forms of the amplitude subproblem. Only the real parts of the Hermitian
    // matrices enter m^T Re(.) m for real m, so those are what is stored.
    struct FractionalProblem
    {
        std::vector<RMatrix> sigma;       // Re(Sigma_k): desired-signal form of user k
        std::vector<RMatrix> sigma_tilde; // Re(Sigma~_k): sum over k' != k of leakage into user k
        RMatrix sigma_sum;                // sum_k Re(Sigma_k)
        RMatrix sigma_tilde_sum;          // sum_k Re(Sigma~_k)
        RVector m0;                       // linearisation point
        double sigma2 = 0.0;
    };

    // h rows are h_{tot,k}^H (already multiplied by C when coupling is on). With
    // w = h_k^T o (V f_k'), m^T Re(conj(w) w^T) m = |h_k^H diag(m) V f_k'|^2.
    inline FractionalProblem build_fractional(const CMatrix &h, const CMatrix &v, const CMatrix &f, const RVector &m0,
                                              double sigma2)
    {
        const auto k = h.rows(), nt = h.cols();
        if (v.rows() != nt || f.rows() != v.cols() || f.cols() != k || m0.size() != nt)
            throw Error("incompatible holographic problem dimensions");

        FractionalProblem fp;
        fp.m0 = m0;
        fp.sigma2 = sigma2;
        fp.sigma.assign(static_cast<std::size_t>(k), RMatrix::Zero(nt, nt));
        fp.sigma_tilde.assign(static_cast<std::size_t>(k), RMatrix::Zero(nt, nt));
        const CMatrix vf = v * f; // N_t x K
        for (Eigen::Index user = 0; user < k; ++user)
        {
            for (Eigen::Index stream = 0; stream < k; ++stream)
            {
                const CVector w = h.row(user).transpose().cwiseProduct(vf.col(stream));
                const RVector re = w.real(), im = w.imag();
                auto &dst = stream == user ? fp.sigma[static_cast<std::size_t>(user)]
                                           : fp.sigma_tilde[static_cast<std::size_t>(user)];
                dst.noalias() += re * re.transpose();
                dst.noalias() += im * im.transpose();
            }
        }
        fp.sigma_sum = RMatrix::Zero(nt, nt);
        fp.sigma_tilde_sum = RMatrix::Zero(nt, nt);
        for (Eigen::Index user = 0; user < k; ++user)
        {
            fp.sigma_sum += fp.sigma[static_cast<std::size_t>(user)];
            fp.sigma_tilde_sum += fp.sigma_tilde[static_cast<std::size_t>(user)];
        }
        return fp;
    }

    // Sum of per-user SINRs, sum_k m^T S_k m / (m^T S~_k m + sigma2).
    inline double ratio_sum(const FractionalProblem &fp, const RVector &m)
    {
        double total = 0.0;
        for (std::size_t k = 0; k < fp.sigma.size(); ++k)
            total += m.dot(fp.sigma[k] * m) / (m.dot(fp.sigma_tilde[k] * m) + fp.sigma2);
        return total;
    }

    struct BoxQpOptions
    {
        double tolerance = 1e-10; // on the step-normalised projected-gradient residual
        int max_iterations = 20000;
    };

    struct BoxQpResult
    {
        RVector m;
        double residual = 0.0;
        int iterations = 0;
    };

    namespace detail
    {
        inline RVector clamp01(const RVector &x)
        {
            return x.cwiseMax(0.0).cwiseMin(1.0);
        }

        // Largest eigenvalue of -A for symmetric NSD A, by power iteration.
        inline double curvature_bound(const RMatrix &a)
        {
            const auto n = a.rows();
            if (n == 0)
                return 0.0;
            RVector x = RVector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
            x(0) += 0.1; // avoid starting orthogonal to a structured top eigenvector
            x.normalize();
            double est = 0.0;
            for (int it = 0; it < 60; ++it)
            {
                RVector y = -(a * x);
                const double ny = y.norm();
                if (ny == 0.0)
                    return 0.0;
                est = ny;
                x = y / ny;
            }
            return est;
        }
    }

    // Maximise b^T m + m^T A m over [0, 1]^N for symmetric negative semidefinite A.
    // Spectral projected gradient: Barzilai-Borwein trial step, projection onto the box,
    // exact line search along the projected direction (the objective is quadratic).
    inline BoxQpResult box_qp_max(const RMatrix &a, const RVector &b, const RVector &start,
                                  const BoxQpOptions &opt = {})
    {
        const auto n = b.size();
        if (a.rows() != n || a.cols() != n || start.size() != n)
            throw Error("inner QP failed: dimension mismatch");
        if (!a.allFinite() || !b.allFinite())
            throw Error("inner QP failed: non-finite data");

        BoxQpResult out;
        const double curv = detail::curvature_bound(a);
        const double scale = std::max(b.cwiseAbs().maxCoeff(), 1e-300);
        if (curv <= 1e-14 * scale)
        {
            // linear objective: corners
            out.m = RVector(n);
            for (Eigen::Index i = 0; i < n; ++i)
                out.m(i) = b(i) > 0.0 ? 1.0 : (b(i) < 0.0 ? 0.0 : std::clamp(start(i), 0.0, 1.0));
            return out;
        }

        const double lip = 2.0 * curv; // Lipschitz constant of the gradient
        auto grad = [&](const RVector &m) -> RVector { return b + 2.0 * (a * m); };
        auto residual = [&](const RVector &m, const RVector &g) {
            return (detail::clamp01(m + g / lip) - m).cwiseAbs().maxCoeff();
        };

        RVector m = detail::clamp01(start);
        RVector g = grad(m);
        double step = 1.0 / lip;
        const double step_min = 1e-6 / lip, step_max = 1e6 / lip;

        for (int it = 0; it < opt.max_iterations; ++it)
        {
            out.residual = residual(m, g);
            if (out.residual <= opt.tolerance)
            {
                out.m = m;
                out.iterations = it;
                return out;
            }
            const RVector d = detail::clamp01(m + step * g) - m;
            const double slope = g.dot(d);
            const double curv_d = d.dot(a * d); // <= 0
            double t = 1.0;
            if (curv_d < 0.0)
                t = std::min(1.0, slope / (-2.0 * curv_d));
            if (!(slope > 0.0))
            {
                // no ascent along the spectral direction; fall back to the safe step
                step = 1.0 / lip;
                continue;
            }
            const RVector s = t * d;
            m = detail::clamp01(m + s);
            const RVector g_new = grad(m);
            const double sy = -s.dot(g_new - g); // = -2 s^T A s >= 0
            step = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, step_min, step_max) : step_max;
            g = g_new;
        }
        out.residual = residual(m, g);
        if (out.residual <= opt.tolerance * 100.0)
        {
            out.m = m;
            out.iterations = opt.max_iterations;
            return out;
        }
        std::ostringstream msg;
        msg << "inner QP failed: residual " << out.residual << " after " << opt.max_iterations
            << " iterations; iterate = [" << m.transpose() << "]";
        throw Error(msg.str());
    }

    struct DinkelbachResult
    {
        RVector m;
        double lambda = 0.0; // ratio N(m) / D(m) at the returned m
        int iterations = 0;
        bool converged = false;
        std::vector<double> lambda_trace;   // lambda_1, lambda_2, ...
        std::vector<double> residual_trace; // F_{lambda_{t-1}}(m_t); one extra entry at the final lambda on early stop
        std::vector<RVector> iterates;
    };

    // Dinkelbach on the aggregated surrogate
    //   N(m) / D(m),  N(m) = 2 m0^T S m - m0^T S m0,  D(m) = m^T S~ m + sigma2,
    // where S, S~ are the user-summed forms. Each step maximises the parametric objective
    // 2 m0^T S m - lambda m^T S~ m over the box and updates lambda to the ratio at the new
    // point. The stopping quantity is N(m_t) - lambda D(m_t), which has the same argmax and
    // tends to zero. All quantities are normalised by sigma2 so the tolerance is in SINR units.
    inline DinkelbachResult dinkelbach_solve(const FractionalProblem &fp, double zeta, int max_iter,
                                             const BoxQpOptions &qp = {})
    {
        if (!(zeta > 0.0) || max_iter < 1)
            throw Error("dinkelbach needs zeta > 0 and max_iter >= 1");
        const double norm = fp.sigma2 > 0.0 ? 1.0 / fp.sigma2 : 1.0;
        const RMatrix s = fp.sigma_sum * norm;
        const RMatrix st = fp.sigma_tilde_sum * norm;
        const double noise = fp.sigma2 * norm;
        const RVector b = 2.0 * (s * fp.m0);
        const double c0 = fp.m0.dot(s * fp.m0);

        auto numer = [&](const RVector &m) { return b.dot(m) - c0; };
        auto denom = [&](const RVector &m) { return m.dot(st * m) + noise; };

        DinkelbachResult out;
        out.m = detail::clamp01(fp.m0);
        out.lambda = numer(out.m) / denom(out.m);
        double lambda = 0.0;
        for (int t = 1; t <= max_iter; ++t)
        {
            const auto sol = box_qp_max(-lambda * st, b, out.m, qp);
            const double n = numer(sol.m), d = denom(sol.m);
            const double residual = n - lambda * d;
            const double next = n / d;
            if (t > 1 && ((sol.m - out.m).cwiseAbs().maxCoeff() <= 1e-14 || next < lambda))
            {
                // same maximiser again, or an inexact inner solve that lands below the current
                // iterate (whose own residual is zero); keep the iterate and log the final residual
                out.residual_trace.push_back(std::max(residual, 0.0));
                out.converged = true;
                break;
            }
            out.m = sol.m;
            out.lambda = next;
            out.iterations = t;
            out.lambda_trace.push_back(next);
            out.residual_trace.push_back(residual);
            out.iterates.push_back(sol.m);
            lambda = next;
            if (residual <= zeta)
            {
                out.converged = true;
                break;
            }
        }
        return out;
    }

    struct P2Problem
    {
        CMatrix h_tot; // K x N_t, rows h_{tot,k}^H
        const RhsGeometry *geom = nullptr; // supplies V and C
        CMatrix f;     // N_RF x K
        double sigma2 = 0.0;
        double p_t = std::numeric_limits<double>::infinity(); // transmit budget kept feasible
    };

    struct P2Options
    {
        int sca_rounds = 3;
        double zeta = 1e-6;
        int max_iter = 50;
        BoxQpOptions qp{};
    };

    struct P2Result
    {
        RVector m;
        int dinkelbach_iterations = 0;
        int rounds_accepted = 0;
        std::vector<double> sum_rate_trace; // exact sum-rate after each accepted round, starting at m_init
        std::vector<double> ratio_trace;    // exact sum of SINRs, same points
    };

    // Subproblem P2 by successive linearisation. Each round rebuilds the quadratic forms at
    // the current point and runs Dinkelbach. The candidate is scaled down if it would exceed
    // the transmit budget with the current F (scaling m keeps it inside the box), and it is
    // accepted only if neither the exact sum-rate nor the exact SINR sum decreases.
    inline P2Result solve_p2(const P2Problem &prob, const RVector &m_init, const P2Options &opt = {})
    {
        if (prob.geom == nullptr)
            throw Error("P2 needs an RHS geometry");
        const auto &geom = *prob.geom;
        if (m_init.minCoeff() < 0.0 || m_init.maxCoeff() > 1.0)
            throw Error("holographic amplitudes must lie in [0, 1]");
        const CMatrix h_eff = geom.coupled_channel(prob.h_tot);

        auto evaluate = [&](const RVector &m, double &rate, double &ratio) {
            const CMatrix mv = geom.response(m);
            const RVector s = sinr(prob.h_tot, mv, prob.f, prob.sigma2);
            ratio = s.sum();
            rate = s.unaryExpr([](double x) { return std::log2(1.0 + x); }).sum();
        };

        P2Result out;
        out.m = m_init;
        double rate = 0.0, ratio = 0.0;
        evaluate(out.m, rate, ratio);
        out.sum_rate_trace.push_back(rate);
        out.ratio_trace.push_back(ratio);

        for (int round = 0; round < opt.sca_rounds; ++round)
        {
            const auto fp = build_fractional(h_eff, geom.v, prob.f, out.m, prob.sigma2);
            const auto dk = dinkelbach_solve(fp, opt.zeta, opt.max_iter, opt.qp);
            out.dinkelbach_iterations += dk.iterations;

            RVector cand = dk.m;
            if (std::isfinite(prob.p_t))
            {
                const double power = transmit_power(geom.response(cand), prob.f);
                if (power > prob.p_t)
                    cand *= std::sqrt(prob.p_t / power);
            }
            double cand_rate = 0.0, cand_ratio = 0.0;
            evaluate(cand, cand_rate, cand_ratio);
            if (!(cand_rate >= rate && cand_ratio >= ratio) || cand == out.m)
                break; // the next round would linearise at the same point
            out.m = cand;
            rate = cand_rate;
            ratio = cand_ratio;
            ++out.rounds_accepted;
            out.sum_rate_trace.push_back(rate);
            out.ratio_trace.push_back(ratio);
        }
        return out;
    }

    // Uncoupled surface, no transmit cap.
    inline RVector solve_p2(const CMatrix &h_tot, const CMatrix &v, const CMatrix &f, const RVector &m_init,
                            double sigma2, int sca_rounds)
    {
        RhsGeometry geom;
        geom.v = v;
        geom.coupled = false;
        P2Problem prob{h_tot, &geom, f, sigma2};
        P2Options opt;
        opt.sca_rounds = sca_rounds;
        return solve_p2(prob, m_init, opt).m;
    }
}

#endif
