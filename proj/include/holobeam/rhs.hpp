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

#ifndef HOLOBEAM_RHS_HPP
#define HOLOBEAM_RHS_HPP

#include "channel.hpp"
#include "common.hpp"
#include "config.hpp"
#include "numerics.hpp"

#include <vector>

namespace holobeam
{
    struct BeamDirection
    {
        double azimuth = 0.0;
        double elevation = 0.0;
    };

    struct RhsGeometry
    {
        std::vector<Point2> element_positions; // row-major grid, index ix * n_y + iy
        std::vector<Point2> feed_positions;
        CMatrix v;      // N_t x N_RF fixed reference-wave phases
        CMatrix c;      // N_t x N_t coupling, identity when disabled
        bool coupled = false;
        double refractive_index = 1.0;
        double wavelength = 1.0;
        int n_x = 1, n_y = 1;

        Eigen::Index n_t() const { return v.rows(); }
        Eigen::Index n_rf() const { return v.cols(); }

        // M_v = C diag(m) V
        CMatrix response(const RVector &m) const
        {
            CMatrix mv = m.asDiagonal() * v;
            if (coupled)
                return c * mv;
            return mv;
        }

        // Rows h^H C: the channel as seen by diag(m) V.
        CMatrix coupled_channel(const CMatrix &h_tot) const
        {
            return coupled ? CMatrix(h_tot * c) : h_tot;
        }
    };

    struct HoloAmplitudes
    {
        RVector m;       // N_t, each in [0, 1]
        RMatrix weights; // K x N_RF, sums to 1
    };

    inline std::vector<Point2> grid_positions(int n_x, int n_y, double pitch)
    {
        std::vector<Point2> out;
        out.reserve(static_cast<std::size_t>(n_x) * n_y);
        for (int ix = 0; ix < n_x; ++ix)
            for (int iy = 0; iy < n_y; ++iy)
                out.push_back({ix * pitch, iy * pitch});
        return out;
    }

    // Feeds spread evenly along the surface's long axis, on its centre line.
    inline std::vector<Point2> feed_positions(int n_x, int n_y, double pitch, int n_rf)
    {
        std::vector<Point2> out;
        const bool along_x = n_x >= n_y;
        const double extent = (along_x ? n_x : n_y) * pitch;
        const double centre = ((along_x ? n_y : n_x) - 1) * pitch / 2.0;
        for (int q = 0; q < n_rf; ++q)
        {
            const double s = (q + 0.5) * extent / n_rf - pitch / 2.0;
            out.push_back(along_x ? Point2{s, centre} : Point2{centre, s});
        }
        return out;
    }

    // V(p, q) = exp(-j 2 pi gamma D_pq / lambda)
    inline CMatrix build_v(const std::vector<Point2> &elements, const std::vector<Point2> &feeds, double gamma,
                           double wavelength)
    {
        if (elements.empty() || feeds.empty())
            throw Error("RHS needs at least one element and one feed");
        CMatrix v(static_cast<Eigen::Index>(elements.size()), static_cast<Eigen::Index>(feeds.size()));
        const double k_r = 2.0 * pi * gamma / wavelength;
        for (std::size_t p = 0; p < elements.size(); ++p)
            for (std::size_t q = 0; q < feeds.size(); ++q)
                v(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) =
                    std::polar(1.0, -k_r * distance(elements[p], feeds[q]));
        return v;
    }

    // C = D^(-1/2) with D(n', n) = sinc(2 |t_n' - t_n| / lambda); identity when disabled.
    inline CMatrix coupling_matrix(const std::vector<Point2> &positions, double wavelength, bool enabled)
    {
        const auto n = static_cast<Eigen::Index>(positions.size());
        if (!enabled)
            return CMatrix::Identity(n, n);
        CMatrix d(n, n);
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = 0; b < n; ++b)
                d(a, b) = numerics::sinc_norm(2.0 * distance(positions[static_cast<std::size_t>(a)],
                                                             positions[static_cast<std::size_t>(b)]) /
                                              wavelength);
        return numerics::inv_sqrt_hermitian(d);
    }

    inline RhsGeometry make_rhs_geometry(const SystemConfig &cfg)
    {
        RhsGeometry g;
        g.wavelength = cfg.wavelength();
        g.refractive_index = cfg.refractive_index;
        g.n_x = cfg.n_t_x;
        g.n_y = cfg.n_t_y;
        const double pitch = cfg.rhs_spacing_wavelengths * g.wavelength;
        g.element_positions = grid_positions(cfg.n_t_x, cfg.n_t_y, pitch);
        g.feed_positions = feed_positions(cfg.n_t_x, cfg.n_t_y, pitch, cfg.n_rf);
        g.v = build_v(g.element_positions, g.feed_positions, g.refractive_index, g.wavelength);
        g.coupled = cfg.coupling_enabled;
        g.c = coupling_matrix(g.element_positions, g.wavelength, cfg.coupling_enabled);
        return g;
    }

    inline RMatrix uniform_beam_weights(Eigen::Index k, Eigen::Index n_rf)
    {
        return RMatrix::Constant(k, n_rf, 1.0 / static_cast<double>(k * n_rf));
    }

    // Amplitude pattern from the holographic interference principle: for each beam k and
    // feed q, (Re[Psi_obj Psi_ref^*] + 1) / 2, blended with the weights a_{k,q}.
    inline HoloAmplitudes holographic_pattern(const RhsGeometry &geom, const std::vector<BeamDirection> &directions,
                                              const RMatrix &weights)
    {
        const auto k = static_cast<Eigen::Index>(directions.size());
        const auto nrf = static_cast<Eigen::Index>(geom.feed_positions.size());
        if (weights.rows() != k || weights.cols() != nrf)
            throw Error("beam weights must be K x N_RF");
        if (weights.minCoeff() < 0.0 || std::abs(weights.sum() - 1.0) > 1e-9)
            throw Error("beam weights must be non-negative and sum to 1");

        const double k0 = 2.0 * pi / geom.wavelength;
        const double kr = k0 * geom.refractive_index;
        const auto nt = static_cast<Eigen::Index>(geom.element_positions.size());

        HoloAmplitudes out;
        out.weights = weights;
        out.m = RVector::Zero(nt);
        for (Eigen::Index b = 0; b < k; ++b)
        {
            const auto &dir = directions[static_cast<std::size_t>(b)];
            const double kx = k0 * std::sin(dir.azimuth) * std::sin(dir.elevation);
            const double ky = k0 * std::cos(dir.elevation);
            for (Eigen::Index p = 0; p < nt; ++p)
            {
                const auto &r = geom.element_positions[static_cast<std::size_t>(p)];
                const double obj_phase = kx * r.x + ky * r.y;
                for (Eigen::Index q = 0; q < nrf; ++q)
                {
                    const double ref_phase = kr * distance(r, geom.feed_positions[static_cast<std::size_t>(q)]);
                    // Re[exp(-j obj) * conj(exp(-j ref))] = cos(obj - ref)
                    const double single = (std::cos(obj_phase - ref_phase) + 1.0) / 2.0;
                    out.m(p) += weights(b, q) * single;
                }
            }
        }
        out.m = out.m.cwiseMax(0.0).cwiseMin(1.0);
        return out;
    }

    inline CMatrix assemble_m_v(const CMatrix &c, const RVector &m, const CMatrix &v)
    {
        if (c.rows() != c.cols() || c.cols() != m.size() || v.rows() != m.size())
            throw Error("incompatible RHS dimensions");
        return c * (m.asDiagonal() * v);
    }

    // Departure direction that best matches a channel row (h^H), found on a 5 degree grid.
    inline BeamDirection dominant_direction(const CMatrix &h_row, int n_x, int n_y, double spacing_wavelengths)
    {
        BeamDirection best;
        double best_gain = -1.0;
        constexpr int n_az = 72, n_el = 19;
        for (int ia = 0; ia < n_az; ++ia)
            for (int ie = 0; ie < n_el; ++ie)
            {
                const double az = 2.0 * pi * ia / n_az;
                const double el = (pi / 2.0) * ie / (n_el - 1);
                const CVector a = array_response(n_x, n_y, spacing_wavelengths, az, el);
                const double gain = std::abs((h_row * a)(0, 0));
                if (gain > best_gain)
                {
                    best_gain = gain;
                    best = {az, el};
                }
            }
        return best;
    }

    // The channel rows carry conj(a_t) and V carries exp(-j k_r D), so a hologram adds
    // up coherently when its object wave vector is the negated departure direction.
    inline BeamDirection hologram_direction(const BeamDirection &departure)
    {
        return {departure.azimuth + pi, pi - departure.elevation};
    }
}

#endif
