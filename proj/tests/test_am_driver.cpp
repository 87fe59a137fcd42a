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

#include <holobeam/am_driver.hpp>

#include <gtest/gtest.h>

using namespace holobeam;

namespace
{
    struct Realization
    {
        SystemConfig cfg;
        RhsGeometry geom;
        ChannelSet ch;
    };

    Realization draw(std::uint64_t seed, SystemConfig cfg = paper_default())
    {
        cfg.seed = seed;
        auto rng = make_rng(seed, "channel");
        auto ch = generate_channels(cfg, rng);
        return {cfg, make_rhs_geometry(cfg), std::move(ch)};
    }

    void expect_monotone(const AmTrace &t, double tol)
    {
        for (std::size_t i = 1; i < t.objective.size(); ++i)
            EXPECT_GE(t.objective[i], t.objective[i - 1] - tol) << "sub-step " << i;
    }
}

TEST(AmOptimize, MonotoneTraceSeed11)
{
    const auto r = draw(11);
    const auto res = am_optimize(r.cfg, r.ch, r.ch, r.geom);
    ASSERT_GE(res.trace.objective.size(), 4u);
    expect_monotone(res.trace, 1e-6);
    EXPECT_EQ(res.trace.step.front(), AmStep::init);
    EXPECT_NEAR(res.state.sum_rate, res.trace.objective.back(), 1e-9);
    EXPECT_NEAR(res.state.sum_rate, res.state.per_user_rates.sum(), 1e-9);
}

TEST(AmOptimize, StateInvariants)
{
    const auto r = draw(12);
    const auto res = am_optimize(r.cfg, r.ch, r.ch, r.geom);
    const auto &s = res.state;
    EXPECT_EQ(s.f.rows(), 8);
    EXPECT_EQ(s.f.cols(), 4);
    EXPECT_GE(s.m.minCoeff(), 0.0);
    EXPECT_LE(s.m.maxCoeff(), 1.0);
    for (Eigen::Index i = 0; i < s.theta.size(); ++i)
        EXPECT_NEAR(std::abs(s.theta(i)), 1.0, 1e-12);
    EXPECT_LE(transmit_power(r.geom.response(s.m), s.f), r.cfg.p_t_watts * (1.0 + 1e-9));
    EXPECT_GT(res.trace.rcg_iterations, 0);
    EXPECT_GT(res.trace.dinkelbach_iterations, 0);
    EXPECT_GE(res.trace.outer_iterations, 1);
    EXPECT_LE(res.trace.outer_iterations, r.cfg.outer_iterations);
}

TEST(AmOptimize, ZeroOuterIterationsReturnsInitialState)
{
    auto cfg = paper_default();
    cfg.outer_iterations = 0;
    const auto r = draw(13, cfg);
    const auto res = am_optimize(r.cfg, r.ch, r.ch, r.geom);
    ASSERT_EQ(res.trace.objective.size(), 1u);
    EXPECT_EQ(res.trace.outer_iterations, 0);
    const double direct =
        sum_rate(assemble_h_tot(r.ch, res.state.theta).h_tot, r.geom.response(res.state.m), res.state.f,
                 cfg.noise_watts())
            .total;
    EXPECT_NEAR(res.state.sum_rate, direct, 1e-12);
    EXPECT_NEAR(res.trace.objective[0], direct, 1e-12);
}

TEST(AmOptimize, ImperfectCsiReportsTrueChannel)
{
    auto cfg = paper_default();
    cfg.csi_mode = CsiMode::imperfect;
    const auto r = draw(14, cfg);
    auto csi = make_rng(14, "csi");
    const auto obs = perturb_csi(r.ch, 0.1, csi);
    const auto res = am_optimize(r.cfg, r.ch, obs, r.geom);
    expect_monotone(res.trace, 1e-6);
    const auto &s = res.state;
    const double on_true =
        sum_rate(assemble_h_tot(r.ch, s.theta).h_tot, r.geom.response(s.m), s.f, cfg.noise_watts()).total;
    const double on_obs =
        sum_rate(assemble_h_tot(obs, s.theta).h_tot, r.geom.response(s.m), s.f, cfg.noise_watts()).total;
    EXPECT_NEAR(s.sum_rate, on_true, 1e-12);
    EXPECT_NEAR(res.trace.objective.back(), on_obs, 1e-9);
}

TEST(Baseline, NoRisSkipsPhaseStepAndIgnoresRisLinks)
{
    const auto r = draw(15);
    const auto a = run_baseline(r.cfg, r.ch, r.geom, RisMode::none);
    for (auto s : a.trace.step)
        EXPECT_NE(s, AmStep::p3);
    EXPECT_EQ(a.trace.rcg_iterations, 0);
    expect_monotone(a.trace, 1e-6);

    auto other = r.ch;
    other.h_r = CMatrix::Random(other.h_r.rows(), other.h_r.cols()) * 1e-3;
    other.g_r = CMatrix::Random(other.g_r.rows(), other.g_r.cols()) * 1e-3;
    const auto b = run_baseline(r.cfg, other, r.geom, RisMode::none);
    EXPECT_EQ(a.state.sum_rate, b.state.sum_rate);
}

TEST(Baseline, RandomRisIsDeterministic)
{
    const auto r = draw(16);
    const auto a = run_baseline(r.cfg, r.ch, r.geom, RisMode::random);
    const auto b = run_baseline(r.cfg, r.ch, r.geom, RisMode::random);
    EXPECT_EQ(a.state.theta, b.state.theta);
    EXPECT_EQ(a.state.sum_rate, b.state.sum_rate);
    expect_monotone(a.trace, 1e-6);
    auto cfg2 = r.cfg;
    cfg2.seed = 17;
    EXPECT_NE(run_baseline(cfg2, r.ch, r.geom, RisMode::random).state.theta, a.state.theta);
}

TEST(Baseline, OptimizedAtLeastRandomOnObservedCsi)
{
    for (std::uint64_t seed = 100; seed < 120; ++seed)
    {
        const auto r = draw(seed);
        const auto opt = am_optimize(r.cfg, r.ch, r.ch, r.geom);
        const auto rnd = run_baseline(r.cfg, r.ch, r.geom, RisMode::random);
        EXPECT_GE(opt.trace.objective.back(), rnd.trace.objective.back() - 1e-9) << "seed " << seed;
    }
}

TEST(AmOptimize, RandomAmplitudeInit)
{
    auto cfg = paper_default();
    cfg.holo_init = HoloInit::random;
    const auto r = draw(18, cfg);
    const auto res = am_optimize(r.cfg, r.ch, r.ch, r.geom);
    expect_monotone(res.trace, 1e-6);
    EXPECT_TRUE(std::isfinite(res.state.sum_rate));
}

TEST(AmOptimize, CoupledSurface)
{
    auto cfg = paper_default();
    cfg.coupling_enabled = true;
    const auto r = draw(19, cfg);
    const auto res = am_optimize(r.cfg, r.ch, r.ch, r.geom);
    expect_monotone(res.trace, 1e-6);
    EXPECT_LE(transmit_power(r.geom.response(res.state.m), res.state.f), cfg.p_t_watts * (1.0 + 1e-9));
}
