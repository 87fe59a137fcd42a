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

#ifndef HOLOBEAM_AM_DRIVER_HPP
#define HOLOBEAM_AM_DRIVER_HPP

#include "channel.hpp"
#include "common.hpp"
#include "config.hpp"
#include "digital_bf.hpp"
#include "holo_bf.hpp"
#include "rates.hpp"
#include "rhs.hpp"
#include "ris_opt.hpp"
#include "rng.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace holobeam
{
    struct BeamformerState
    {
        CMatrix f;      // N_RF x K
        RVector m;      // N_t, in [0, 1]
        CVector theta;  // N_RIS, unit modulus
        double sum_rate = 0.0;
        RVector per_user_rates;
    };

    enum class AmStep
    {
        init,
        p1,
        p2,
        p3
    };

    inline std::string_view to_string(AmStep s)
    {
        switch (s)
        {
        case AmStep::init: return "init";
        case AmStep::p1: return "p1";
        case AmStep::p2: return "p2";
        case AmStep::p3: return "p3";
        }
        return "?";
    }

    struct AmTrace
    {
        std::vector<double> objective; // observed-CSI sum-rate after each sub-step
        std::vector<AmStep> step;
        std::vector<int> outer;        // outer iteration of each entry, 0 for init
        int outer_iterations = 0;
        int dinkelbach_iterations = 0;
        int rcg_iterations = 0;
        int p1_rejected = 0;
        bool rcg_line_search_failed = false;
    };

    struct AmResult
    {
        BeamformerState state;
        AmTrace trace;
    };

    namespace detail
    {
        inline RVector initial_amplitudes(const SystemConfig &cfg, const RhsGeometry &geom, const CMatrix &h_tot)
        {
            if (cfg.holo_init == HoloInit::random)
            {
                auto rng = make_rng(cfg.seed, "m_init");
                RVector m(geom.n_t());
                for (Eigen::Index i = 0; i < m.size(); ++i)
                    m(i) = uniform(rng, 0.0, 1.0);
                return m;
            }
            std::vector<BeamDirection> dirs;
            for (Eigen::Index k = 0; k < h_tot.rows(); ++k)
                dirs.push_back(hologram_direction(
                    dominant_direction(h_tot.row(k), cfg.n_t_x, cfg.n_t_y, cfg.rhs_spacing_wavelengths)));
            return holographic_pattern(geom, dirs, uniform_beam_weights(h_tot.rows(), geom.n_rf())).m;
        }

        inline void evaluate_true(BeamformerState &s, const ChannelSet &ch_true, const RhsGeometry &geom, double sigma2)
        {
            const auto r = sum_rate(assemble_h_tot(ch_true, s.theta).h_tot, geom.response(s.m), s.f, sigma2);
            s.sum_rate = r.total;
            s.per_user_rates = r.per_user;
        }

        // Algorithm body shared by the optimized scheme and the two benchmarks. With
        // optimize_theta off, theta is held at theta0 and only P1 and P2 alternate.
        inline AmResult alternate(const SystemConfig &cfg, const ChannelSet &ch_true, const ChannelSet &ch_obs,
                                  const RhsGeometry &geom, const CVector &theta0, bool optimize_theta)
        {
            const double sigma2 = cfg.noise_watts();
            AmResult res;
            auto &st = res.state;
            auto &tr = res.trace;
            st.theta = theta0;

            CMatrix h_obs = assemble_h_tot(ch_obs, st.theta).h_tot;
            st.m = initial_amplitudes(cfg, geom, h_obs);
            st.f = solve_p1(h_obs, geom.response(st.m), sigma2, cfg.p_t_watts).f;
            double current = sum_rate(h_obs, geom.response(st.m), st.f, sigma2).total;
            auto record = [&](AmStep s, int outer) {
                tr.objective.push_back(current);
                tr.step.push_back(s);
                tr.outer.push_back(outer);
            };
            record(AmStep::init, 0);

            P2Options p2opt;
            p2opt.sca_rounds = cfg.sca_rounds;
            p2opt.zeta = cfg.dinkelbach_tol;
            p2opt.max_iter = cfg.dinkelbach_max_iter;
            RcgOptions rcg;
            rcg.max_iters = cfg.rcg_max_iter;
            rcg.grad_tol = cfg.rcg_grad_tol;

            for (int outer = 1; outer <= cfg.outer_iterations; ++outer)
            {
                const double start = current;

                // P1. The previous F stays feasible (its power depends on m only), so a
                // ZF + water-filling solution that scores lower is discarded.
                try
                {
                    const CMatrix f = solve_p1(h_obs, geom.response(st.m), sigma2, cfg.p_t_watts).f;
                    const double r = sum_rate(h_obs, geom.response(st.m), f, sigma2).total;
                    if (r >= current)
                    {
                        st.f = f;
                        current = r;
                    }
                    else
                        ++tr.p1_rejected;
                }
                catch (const Error &)
                {
                    ++tr.p1_rejected;
                }
                record(AmStep::p1, outer);

                // P2
                P2Problem prob{h_obs, &geom, st.f, sigma2, cfg.p_t_watts};
                const auto p2 = solve_p2(prob, st.m, p2opt);
                tr.dinkelbach_iterations += p2.dinkelbach_iterations;
                st.m = p2.m;
                current = sum_rate(h_obs, geom.response(st.m), st.f, sigma2).total;
                record(AmStep::p2, outer);

                // P3
                if (optimize_theta)
                {
                    const auto link = build_ris_link(ch_obs, geom.response(st.m), st.f, sigma2);
                    const auto p3 = solve_p3(link, st.theta, rcg);
                    tr.rcg_iterations += p3.trace.iterations;
                    tr.rcg_line_search_failed = tr.rcg_line_search_failed || p3.trace.line_search_failed;
                    st.theta = p3.theta;
                    h_obs = assemble_h_tot(ch_obs, st.theta).h_tot;
                    current = sum_rate(h_obs, geom.response(st.m), st.f, sigma2).total;
                    record(AmStep::p3, outer);
                }

                tr.outer_iterations = outer;
                if (std::abs(current - start) <= cfg.am_rel_tol * std::max(std::abs(start), 1e-12))
                    break;
            }
            evaluate_true(st, ch_true, geom, sigma2);
            return res;
        }

        inline CVector random_theta(const SystemConfig &cfg, Eigen::Index n)
        {
            auto rng = make_rng(cfg.seed, "theta");
            return random_unit_modulus(rng, n);
        }
    }

    // Alternating maximisation over (F, m, theta). Solvers see ch_obs; the reported rate
    // uses ch_true.
    inline AmResult am_optimize(const SystemConfig &cfg, const ChannelSet &ch_true, const ChannelSet &ch_obs,
                                const RhsGeometry &geom)
    {
        return detail::alternate(cfg, ch_true, ch_obs, geom, detail::random_theta(cfg, ch_obs.n_ris()), true);
    }

    // Benchmarks: no RIS, or a random RIS held fixed. P1 and P2 still alternate.
    inline AmResult run_baseline(const SystemConfig &cfg, const ChannelSet &ch_true, const ChannelSet &ch_obs,
                                 const RhsGeometry &geom, RisMode mode)
    {
        if (mode == RisMode::optimized)
            return am_optimize(cfg, ch_true, ch_obs, geom);
        if (mode == RisMode::none)
            return detail::alternate(cfg, without_ris(ch_true), without_ris(ch_obs), geom,
                                     CVector::Ones(ch_obs.n_ris()), false);
        return detail::alternate(cfg, ch_true, ch_obs, geom, detail::random_theta(cfg, ch_obs.n_ris()), false);
    }

    inline AmResult run_baseline(const SystemConfig &cfg, const ChannelSet &ch, const RhsGeometry &geom, RisMode mode)
    {
        return run_baseline(cfg, ch, ch, geom, mode);
    }

    inline AmResult run_scheme(const SystemConfig &cfg, const ChannelSet &ch_true, const ChannelSet &ch_obs,
                               const RhsGeometry &geom)
    {
        return run_baseline(cfg, ch_true, ch_obs, geom, cfg.ris_mode);
    }
}

#endif
