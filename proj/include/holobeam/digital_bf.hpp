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

#ifndef HOLOBEAM_DIGITAL_BF_HPP
#define HOLOBEAM_DIGITAL_BF_HPP

#include "common.hpp"
#include "numerics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

namespace holobeam
{
    struct DigitalBeamformer
    {
        CMatrix f_tilde; // N_RF x K, unnormalised ZF
        RVector p;       // K allocated powers
        CMatrix f;       // f_tilde * diag(sqrt(p))
        RVector mu;      // diagonal loads
        double epsilon = 0.0;
    };

    struct WaterFilling
    {
        RVector p;
        double epsilon = 0.0; // 1 / water level
    };

    // Q has row k = h_{tot,k}^H M_v; F~ = Q^H (Q Q^H)^-1.
    inline CMatrix zf_beamformer(const CMatrix &h_tot, const CMatrix &m_v)
    {
        if (h_tot.cols() != m_v.rows())
            throw Error("incompatible channel dimensions");
        if (h_tot.rows() > m_v.cols())
            throw Error("ZF infeasible for this channel draw");
        const CMatrix q = h_tot * m_v;
        if (!q.allFinite() || q.cwiseAbs().maxCoeff() == 0.0)
            throw Error("ZF infeasible for this channel draw");
        return numerics::pinv_right(q, "ZF infeasible for this channel draw");
    }

    // p_k = max(1/eps - mu_k sigma2, 0) / mu_k  with  sum_k max(1/eps - mu_k sigma2, 0) = P_T.
    // Active set by sorting the floors mu_k sigma2; the water level then has a closed form.
    inline WaterFilling water_fill(const RVector &mu, double sigma2, double p_t)
    {
        const auto k = mu.size();
        if (k == 0 || !(p_t > 0.0) || !(sigma2 >= 0.0) || !(mu.minCoeff() > 0.0))
            throw Error("water-filling needs mu > 0, sigma2 >= 0 and P_T > 0");

        std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return mu(a) < mu(b); });

        double level = 0.0;
        double floor_sum = 0.0;
        for (Eigen::Index n = 1; n <= k; ++n)
        {
            floor_sum += mu(order[static_cast<std::size_t>(n - 1)]) * sigma2;
            const double candidate = (p_t + floor_sum) / static_cast<double>(n);
            const double next_floor =
                n < k ? mu(order[static_cast<std::size_t>(n)]) * sigma2 : std::numeric_limits<double>::infinity();
            if (candidate <= next_floor)
            {
                level = candidate;
                break;
            }
        }

        WaterFilling out;
        out.epsilon = 1.0 / level;
        out.p.resize(k);
        for (Eigen::Index i = 0; i < k; ++i)
            out.p(i) = std::max(level - mu(i) * sigma2, 0.0) / mu(i);
        return out;
    }

    // Subproblem P1: ZF on the effective channel, then water-filling under the transmit budget.
    inline DigitalBeamformer solve_p1(const CMatrix &h_tot, const CMatrix &m_v, double sigma2, double p_t)
    {
        DigitalBeamformer bf;
        bf.f_tilde = zf_beamformer(h_tot, m_v);
        const CMatrix radiated = m_v * bf.f_tilde;
        bf.mu = radiated.colwise().squaredNorm().transpose();
        if (!(bf.mu.minCoeff() > 0.0) || !bf.mu.allFinite())
            throw Error("ZF infeasible for this channel draw");
        auto wf = water_fill(bf.mu, sigma2, p_t);
        bf.p = wf.p;
        bf.epsilon = wf.epsilon;
        bf.f = bf.f_tilde * bf.p.cwiseSqrt().asDiagonal();
        return bf;
    }

    inline double transmit_power(const CMatrix &m_v, const CMatrix &f)
    {
        return (m_v * f).squaredNorm();
    }
}

#endif
