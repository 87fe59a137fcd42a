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

#ifndef HOLOBEAM_CHANNEL_HPP
#define HOLOBEAM_CHANNEL_HPP

#include "common.hpp"
#include "config.hpp"
#include "rng.hpp"

#include <cmath>
#include <ostream>
#include <vector>

namespace holobeam
{
    enum class LinkClass
    {
        los,
        nlos
    };

    // Close-in path-loss constants: PL = a + 10 b log10(d) + kappa, kappa ~ N(0, sigma^2) dB.
    struct PathLossModel
    {
        double intercept_db;
        double exponent;
        double shadow_sigma_db;
    };
    inline constexpr PathLossModel path_loss_los{61.4, 2.0, 5.8};
    inline constexpr PathLossModel path_loss_nlos{72.0, 2.92, 8.7};

    inline const PathLossModel &path_loss_constants(LinkClass link)
    {
        return link == LinkClass::los ? path_loss_los : path_loss_nlos;
    }

    inline double path_loss_db(double dist_m, LinkClass link, double shadowing_db = 0.0)
    {
        if (!(dist_m > 0.0))
            throw Error("path loss requires a positive distance");
        const auto &pl = path_loss_constants(link);
        return pl.intercept_db + 10.0 * pl.exponent * std::log10(dist_m) + shadowing_db;
    }

    // UPA response; element (nx, ny) sits at index nx * n_y + ny.
    inline CVector array_response(int n_x, int n_y, double spacing_wavelengths, double azimuth, double elevation)
    {
        const double norm = 1.0 / std::sqrt(static_cast<double>(n_x) * n_y);
        const double ux = std::sin(azimuth) * std::sin(elevation);
        const double uy = std::cos(elevation);
        CVector a(static_cast<Eigen::Index>(n_x) * n_y);
        for (int ix = 0; ix < n_x; ++ix)
            for (int iy = 0; iy < n_y; ++iy)
            {
                const double phase = 2.0 * pi * spacing_wavelengths * (ix * ux + iy * uy);
                a(ix * n_y + iy) = std::polar(norm, phase);
            }
        return a;
    }

    // One multipath component; receive angles are zero for single-antenna ends.
    struct PathInfo
    {
        cplx gain;
        double az_tx = 0.0, el_tx = 0.0;
        double az_rx = 0.0, el_rx = 0.0;
        double path_loss_db = 0.0;
        LinkClass link = LinkClass::nlos;
    };

    struct ChannelSet
    {
        CMatrix h_d; // K x N_t, row k = h_{d,k}^H
        CMatrix h_r; // K x N_RIS, row k = h_{R,k}^H
        CMatrix g_r; // N_RIS x N_t

        std::vector<PathInfo> paths_bs_ris;
        std::vector<std::vector<PathInfo>> paths_ris_ue; // per user
        std::vector<std::vector<PathInfo>> paths_direct; // per user

        Eigen::Index k_users() const { return h_d.rows(); }
        Eigen::Index n_t() const { return h_d.cols(); }
        Eigen::Index n_ris() const { return g_r.rows(); }
    };

    struct EffectiveChannel
    {
        CMatrix h_tot; // K x N_t, row k = h_{tot,k}^H
    };

    namespace detail
    {
        inline double draw_shadowing(Rng &rng, LinkClass link, bool enabled)
        {
            if (!enabled)
                return 0.0;
            return std::normal_distribution<double>(0.0, path_loss_constants(link).shadow_sigma_db)(rng);
        }

        inline PathInfo draw_path(Rng &rng, double dist, LinkClass link, double extra_loss_db, bool shadowing,
                                  bool rx_angles)
        {
            PathInfo p;
            p.link = link;
            p.az_tx = uniform(rng, 0.0, 2.0 * pi);
            p.el_tx = uniform(rng, 0.0, pi / 2.0);
            if (rx_angles)
            {
                p.az_rx = uniform(rng, 0.0, 2.0 * pi);
                p.el_rx = uniform(rng, 0.0, pi / 2.0);
            }
            p.path_loss_db = path_loss_db(dist, link, draw_shadowing(rng, link, shadowing)) + extra_loss_db;
            p.gain = complex_normal(rng, std::pow(10.0, -0.1 * p.path_loss_db));
            return p;
        }
    }

    // Saleh-Valenzuela draw of the BS->RIS, RIS->UE and BS->UE channels. The first
    // path of every RIS link is line-of-sight; all direct paths are NLOS and pay the
    // penetration loss. Draw order is fixed (G_R, then per user h_R, then h_d), so the
    // result is a pure function of (cfg, rng state).
    inline ChannelSet generate_channels(const SystemConfig &cfg, Rng &rng)
    {
        const int k = cfg.k_users, nt = cfg.n_t(), nris = cfg.n_ris();
        ChannelSet ch;
        ch.h_d = CMatrix::Zero(k, nt);
        ch.h_r = CMatrix::Zero(k, nris);
        ch.g_r = CMatrix::Zero(nris, nt);

        const double d_br = distance(cfg.bs_pos, cfg.ris_pos);
        const double g_scale = std::sqrt(static_cast<double>(nris) * nt / cfg.paths_bs_ris);
        for (int l = 0; l < cfg.paths_bs_ris; ++l)
        {
            const auto link = l == 0 ? LinkClass::los : LinkClass::nlos;
            auto p = detail::draw_path(rng, d_br, link, 0.0, cfg.shadowing_enabled, true);
            const CVector a_r = array_response(cfg.n_ris_x, cfg.n_ris_y, cfg.ris_spacing_wavelengths, p.az_rx, p.el_rx);
            const CVector a_t = array_response(cfg.n_t_x, cfg.n_t_y, cfg.rhs_spacing_wavelengths, p.az_tx, p.el_tx);
            ch.g_r.noalias() += (g_scale * p.gain) * a_r * a_t.adjoint();
            ch.paths_bs_ris.push_back(p);
        }

        ch.paths_ris_ue.resize(static_cast<std::size_t>(k));
        const double r_scale = std::sqrt(static_cast<double>(nris) / cfg.paths_ris_ue);
        for (int u = 0; u < k; ++u)
        {
            const double d_ru = distance(cfg.ris_pos, cfg.ue_positions[static_cast<std::size_t>(u)]);
            for (int l = 0; l < cfg.paths_ris_ue; ++l)
            {
                const auto link = l == 0 ? LinkClass::los : LinkClass::nlos;
                auto p = detail::draw_path(rng, d_ru, link, 0.0, cfg.shadowing_enabled, false);
                const CVector a_t = array_response(cfg.n_ris_x, cfg.n_ris_y, cfg.ris_spacing_wavelengths, p.az_tx, p.el_tx);
                ch.h_r.row(u) += (r_scale * p.gain) * a_t.adjoint();
                ch.paths_ris_ue[static_cast<std::size_t>(u)].push_back(p);
            }
        }

        ch.paths_direct.resize(static_cast<std::size_t>(k));
        const double d_scale = std::sqrt(static_cast<double>(nt) / cfg.paths_direct);
        for (int u = 0; u < k; ++u)
        {
            const double d_bu = distance(cfg.bs_pos, cfg.ue_positions[static_cast<std::size_t>(u)]);
            for (int l = 0; l < cfg.paths_direct; ++l)
            {
                auto p = detail::draw_path(rng, d_bu, LinkClass::nlos, cfg.penetration_loss_db, cfg.shadowing_enabled, false);
                const CVector a_t = array_response(cfg.n_t_x, cfg.n_t_y, cfg.rhs_spacing_wavelengths, p.az_tx, p.el_tx);
                ch.h_d.row(u) += (d_scale * p.gain) * a_t.adjoint();
                ch.paths_direct[static_cast<std::size_t>(u)].push_back(p);
            }
        }
        return ch;
    }

    // H_tot = H_d + H_R diag(theta) G_R
    inline EffectiveChannel assemble_h_tot(const ChannelSet &ch, const CVector &theta)
    {
        if (ch.h_r.rows() != ch.h_d.rows() || ch.h_r.cols() != ch.g_r.rows() || ch.g_r.cols() != ch.h_d.cols() ||
            theta.size() != ch.g_r.rows())
            throw Error("incompatible channel dimensions");
        return {ch.h_d + ch.h_r * theta.asDiagonal() * ch.g_r};
    }

    // The set with the RIS links removed (no-RIS benchmark).
    inline ChannelSet without_ris(const ChannelSet &ch)
    {
        ChannelSet out = ch;
        out.h_r.setZero();
        out.g_r.setZero();
        return out;
    }

    namespace detail
    {
        // delta with ||delta|| = u * radius * ||x||, u ~ U[0, 1], isotropic direction.
        inline CMatrix ball_error(const CMatrix &x, double radius_factor, Rng &rng)
        {
            CMatrix dir(x.rows(), x.cols());
            for (Eigen::Index i = 0; i < dir.size(); ++i)
                dir(i) = complex_normal(rng, 1.0);
            const double u = uniform(rng, 0.0, 1.0);
            const double n = dir.norm();
            if (n == 0.0)
                return CMatrix::Zero(x.rows(), x.cols());
            return dir * (u * radius_factor * x.norm() / n);
        }
    }

    // Imperfect CSI: every user's own channels (direct row and RIS->UE row) are moved
    // inside a ball of radius radius_factor * norm. G_R is shared and left exact.
    inline ChannelSet perturb_csi(const ChannelSet &ch, double radius_factor, Rng &rng)
    {
        if (!(radius_factor >= 0.0 && radius_factor < 1.0))
            throw Error("csi radius factor must lie in [0, 1)");
        ChannelSet out = ch;
        if (radius_factor == 0.0)
            return out;
        for (Eigen::Index k = 0; k < ch.k_users(); ++k)
        {
            out.h_d.row(k) += detail::ball_error(ch.h_d.row(k), radius_factor, rng);
            out.h_r.row(k) += detail::ball_error(ch.h_r.row(k), radius_factor, rng);
        }
        return out;
    }

    // Channel dump for cross-implementation regression: one row per entry,
    // "matrix,row,col,re,im".
    inline void write_channel_csv(std::ostream &os, const ChannelSet &ch)
    {
        char buf[160];
        os << "matrix,row,col,re,im\n";
        auto dump = [&](const char *name, const CMatrix &m) {
            for (Eigen::Index r = 0; r < m.rows(); ++r)
                for (Eigen::Index c = 0; c < m.cols(); ++c)
                {
                    std::snprintf(buf, sizeof buf, "%s,%ld,%ld,%.17g,%.17g\n", name, static_cast<long>(r),
                                  static_cast<long>(c), m(r, c).real(), m(r, c).imag());
                    os << buf;
                }
        };
        dump("h_d", ch.h_d);
        dump("h_r", ch.h_r);
        dump("g_r", ch.g_r);
    }
}

#endif
