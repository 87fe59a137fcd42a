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

#ifndef HOLOBEAM_RATES_HPP
#define HOLOBEAM_RATES_HPP

#include "common.hpp"

#include <cmath>

namespace holobeam
{
    struct Rates
    {
        RVector per_user; // bps/Hz
        double total = 0.0;
    };

    // Per-user SINR of h_tot,k^H M_v f_k against the other streams plus noise.
    inline RVector sinr(const CMatrix &h_tot, const CMatrix &m_v, const CMatrix &f, double sigma2)
    {
        const CMatrix g = h_tot * (m_v * f); // K x K, g(k, k') = h_k^H M_v f_k'
        const auto k = g.rows();
        RVector out(k);
        for (Eigen::Index i = 0; i < k; ++i)
        {
            double interference = 0.0;
            for (Eigen::Index j = 0; j < k; ++j)
                if (j != i)
                    interference += std::norm(g(i, j));
            out(i) = std::norm(g(i, i)) / (sigma2 + interference);
        }
        return out;
    }

    inline Rates sum_rate(const CMatrix &h_tot, const CMatrix &m_v, const CMatrix &f, double sigma2)
    {
        if (h_tot.cols() != m_v.rows() || m_v.cols() != f.rows() || h_tot.rows() != f.cols())
            throw Error("incompatible beamformer dimensions");
        const RVector s = sinr(h_tot, m_v, f, sigma2);
        Rates r;
        r.per_user = s.unaryExpr([](double x) { return std::log2(1.0 + x); });
        r.total = r.per_user.sum();
        return r;
    }
}

#endif
