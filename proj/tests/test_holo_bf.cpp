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

#include "oracles.hpp"

#include <holobeam/channel.hpp>
#include <holobeam/config.hpp>
#include <holobeam/digital_bf.hpp>
#include <holobeam/holo_bf.hpp>
#include <holobeam/rates.hpp>
#include <holobeam/rhs.hpp>

#include <gtest/gtest.h>

using namespace holobeam;

namespace
{
    RVector random_box(Rng &rng, Eigen::Index n)
    {
        RVector m(n);
        for (Eigen::Index i = 0; i < n; ++i)
            m(i) = uniform(rng, 0.0, 1.0);
        return m;
    }

    FractionalProblem scalar_problem(double s, double st, double m0, double sigma2)
    {
        FractionalProblem fp;
        fp.sigma = {RMatrix::Constant(1, 1, s)};
        fp.sigma_tilde = {RMatrix::Constant(1, 1, st)};
        fp.sigma_sum = fp.sigma[0];
        fp.sigma_tilde_sum = fp.sigma_tilde[0];
        fp.m0 = RVector::Constant(1, m0);
        fp.sigma2 = sigma2;
        return fp;
    }

    FractionalProblem random_problem(Rng &rng, Eigen::Index k, Eigen::Index n, double sigma2)
    {
        const CMatrix h = oracle::random_matrix(rng, k, n);
        CMatrix v(n, 3);
        for (Eigen::Index i = 0; i < v.size(); ++i)
            v(i) = std::polar(1.0, uniform(rng, 0.0, 2.0 * pi));
        const CMatrix f = oracle::random_matrix(rng, 3, k);
        return build_fractional(h, v, f, random_box(rng, n), sigma2);
    }
}

TEST(BuildFractional, SingleUserHasNoInterference)
{
    auto rng = make_rng(31, "frac");
    const auto fp = random_problem(rng, 1, 5, 1.0);
    EXPECT_EQ(fp.sigma_tilde[0].norm(), 0.0);
    EXPECT_GT(fp.sigma[0].norm(), 0.0);
}

TEST(BuildFractional, ZeroStreamGivesZeroForm)
{
    auto rng = make_rng(32, "frac");
    const CMatrix h = oracle::random_matrix(rng, 2, 4);
    const CMatrix v = oracle::random_matrix(rng, 4, 3);
    CMatrix f = oracle::random_matrix(rng, 3, 2);
    f.col(1).setZero();
    const auto fp = build_fractional(h, v, f, RVector::Ones(4), 1.0);
    EXPECT_EQ(fp.sigma[1].norm(), 0.0);
    EXPECT_EQ(fp.sigma_tilde[0].norm(), 0.0);
}

TEST(BuildFractional, QuadraticFormIdentity)
{
    auto rng = make_rng(33, "frac");
    for (int trial = 0; trial < 100; ++trial)
    {
        const Eigen::Index k = 1 + trial % 4, n = 4 + trial % 5;
        const CMatrix h = oracle::random_matrix(rng, k, n);
        const CMatrix v = oracle::random_matrix(rng, n, 4);
        const CMatrix f = oracle::random_matrix(rng, 4, k);
        const auto fp = build_fractional(h, v, f, RVector::Ones(n), 1.0);
        const RVector m = trial == 0 ? RVector::Ones(n) : random_box(rng, n);
        const CMatrix g = h * m.asDiagonal() * v * f;
        for (Eigen::Index u = 0; u < k; ++u)
        {
            const auto &s = fp.sigma[static_cast<std::size_t>(u)];
            const auto &st = fp.sigma_tilde[static_cast<std::size_t>(u)];
            const double sig = std::norm(g(u, u));
            double interf = 0.0;
            for (Eigen::Index j = 0; j < k; ++j)
                if (j != u)
                    interf += std::norm(g(u, j));
            EXPECT_NEAR(m.dot(s * m), sig, 1e-9 * sig);
            EXPECT_NEAR(m.dot(st * m), interf, 1e-9 * std::max(interf, 1e-300));
            EXPECT_GE(m.dot(st * m), -1e-12 * sig);
            EXPECT_LT((s - s.transpose()).norm(), 1e-12 * s.norm());
        }
    }
}

TEST(BoxQp, LinearObjectiveCorners)
{
    const auto r = box_qp_max(RMatrix::Zero(2, 2), (RVector(2) << 1.0, -1.0).finished(), RVector::Constant(2, 0.5));
    EXPECT_EQ(r.m(0), 1.0);
    EXPECT_EQ(r.m(1), 0.0);
}

TEST(BoxQp, InteriorOptimum)
{
    const auto r = box_qp_max(-RMatrix::Identity(2, 2), RVector::Ones(2), RVector::Zero(2));
    EXPECT_NEAR(r.m(0), 0.5, 1e-8);
    EXPECT_NEAR(r.m(1), 0.5, 1e-8);
}

TEST(BoxQp, ClippedOptimum)
{
    const auto r = box_qp_max(-RMatrix::Identity(2, 2), RVector::Constant(2, 4.0), RVector::Zero(2));
    EXPECT_NEAR(r.m(0), 1.0, 1e-12);
    EXPECT_NEAR(r.m(1), 1.0, 1e-12);
}

TEST(BoxQp, KktOnRandomInstances)
{
    auto rng = make_rng(34, "qp");
    for (int trial = 0; trial < 200; ++trial)
    {
        const Eigen::Index n = 2 + trial % 12;
        const RMatrix g = RMatrix::NullaryExpr(n, n, [&]() { return uniform(rng, -1.0, 1.0); });
        const RMatrix a = -(g * g.transpose()) * std::pow(10.0, uniform(rng, -3.0, 3.0));
        const RVector b = RVector::NullaryExpr(n, [&]() { return uniform(rng, -5.0, 5.0); });
        const auto r = box_qp_max(a, b, random_box(rng, n));
        const RVector grad = b + 2.0 * a * r.m;
        for (Eigen::Index i = 0; i < n; ++i)
        {
            ASSERT_GE(r.m(i), 0.0);
            ASSERT_LE(r.m(i), 1.0);
            const double scale = 1.0 + grad.cwiseAbs().maxCoeff();
            if (r.m(i) > 1e-9 && r.m(i) < 1.0 - 1e-9)
                EXPECT_LT(std::abs(grad(i)), 1e-6 * scale);
            else if (r.m(i) <= 1e-9)
                EXPECT_LT(grad(i), 1e-6 * scale);
            else
                EXPECT_GT(grad(i), -1e-6 * scale);
        }
    }
}

TEST(BoxQp, RejectsNonFinite)
{
    RVector b = RVector::Ones(2);
    b(0) = std::nan("");
    EXPECT_THROW(box_qp_max(-RMatrix::Identity(2, 2), b, RVector::Zero(2)), Error);
}

TEST(Dinkelbach, ScalarToy)
{
    const auto r = dinkelbach_solve(scalar_problem(1.0, 1.0, 1.0, 1.0), 1e-10, 50);
    EXPECT_NEAR(r.m(0), 1.0, 1e-9);
    EXPECT_NEAR(r.lambda, 0.5, 1e-9);
    EXPECT_TRUE(r.converged);
}

TEST(Dinkelbach, NoInterferenceIsOneStep)
{
    FractionalProblem fp;
    RMatrix s(3, 3);
    s << 2.0, -1.0, 0.0, -1.0, 2.0, -3.0, 0.0, -3.0, 1.0;
    fp.sigma = {s};
    fp.sigma_tilde = {RMatrix::Zero(3, 3)};
    fp.sigma_sum = s;
    fp.sigma_tilde_sum = RMatrix::Zero(3, 3);
    fp.m0 = RVector::Ones(3);
    fp.sigma2 = 1.0;
    const auto r = dinkelbach_solve(fp, 1e-6, 50);
    const RVector coef = s * fp.m0; // (1, -2, -2)
    EXPECT_EQ(r.iterations, 1);
    for (Eigen::Index i = 0; i < 3; ++i)
        EXPECT_EQ(r.m(i), coef(i) > 0.0 ? 1.0 : 0.0);
}

TEST(Dinkelbach, GridOracleAndMonotoneTraces)
{
    auto rng = make_rng(35, "dinkel");
    for (int trial = 0; trial < 20; ++trial)
    {
        const auto fp = random_problem(rng, 3, 4, uniform(rng, 0.1, 5.0));
        const auto r = dinkelbach_solve(fp, 1e-9, 100);
        const double grid = oracle::grid_max([&](const RVector &m) { return oracle::aggregated_ratio(fp, m); }, 4, 20);
        EXPECT_GE(oracle::aggregated_ratio(fp, r.m), grid - 1e-6);
        EXPECT_NEAR(oracle::aggregated_ratio(fp, r.m), r.lambda, 1e-9 * std::max(1.0, std::abs(r.lambda)));
        for (std::size_t t = 1; t < r.lambda_trace.size(); ++t)
        {
            EXPECT_GE(r.lambda_trace[t], r.lambda_trace[t - 1]);
            EXPECT_LE(r.residual_trace[t], r.residual_trace[t - 1] + 1e-12);
        }
        for (const auto &m : r.iterates)
        {
            EXPECT_GE(m.minCoeff(), 0.0);
            EXPECT_LE(m.maxCoeff(), 1.0);
        }
        EXPECT_TRUE(r.converged);
        EXPECT_LE(r.residual_trace.back(), 1e-9);
    }
}

TEST(Dinkelbach, RejectsBadTolerance)
{
    EXPECT_THROW(dinkelbach_solve(scalar_problem(1, 1, 1, 1), 0.0, 10), Error);
}

TEST(SolveP2, ZeroRoundsReturnsInit)
{
    auto rng = make_rng(36, "p2");
    const CMatrix h = oracle::random_matrix(rng, 2, 4), v = oracle::random_matrix(rng, 4, 2),
                  f = oracle::random_matrix(rng, 2, 2);
    const RVector m0 = random_box(rng, 4);
    EXPECT_EQ(solve_p2(h, v, f, m0, 1.0, 0), m0);
    EXPECT_THROW(solve_p2(h, v, f, RVector::Constant(4, 1.5), 1.0, 1), Error);
}

// Single user: the sum of SINRs is a Rayleigh-type ratio; compare against a grid.
TEST(SolveP2, SingleUserNearGridOptimum)
{
    auto rng = make_rng(37, "p2");
    for (int trial = 0; trial < 10; ++trial)
    {
        const CMatrix h = oracle::random_matrix(rng, 1, 4), v = oracle::random_matrix(rng, 4, 2),
                      f = oracle::random_matrix(rng, 2, 1);
        const double s2 = 0.5;
        auto exact = [&](const RVector &m) {
            return sinr(h, m.asDiagonal() * v, f, s2).sum();
        };
        const RVector m = solve_p2(h, v, f, RVector::Constant(4, 0.5), s2, 3);
        const double grid = oracle::grid_max(exact, 4, 10);
        EXPECT_GE(exact(m), 0.98 * grid);
        EXPECT_GE(m.minCoeff(), 0.0);
        EXPECT_LE(m.maxCoeff(), 1.0);
    }
}

TEST(SolveP2, DefaultRealizationIsGuarded)
{
    auto cfg = paper_default();
    const auto geom = make_rhs_geometry(cfg);
    auto rng = make_rng(derive_seed(0, std::uint64_t{4}), "channel");
    const auto ch = generate_channels(cfg, rng);
    auto trng = make_rng(4, "theta");
    const CMatrix h = assemble_h_tot(ch, random_unit_modulus(trng, cfg.n_ris())).h_tot;
    const RVector m0 = RVector::Constant(64, 0.5);
    const double s2 = cfg.noise_watts();
    const CMatrix f = solve_p1(h, geom.response(m0), s2, cfg.p_t_watts).f;
    P2Problem prob{h, &geom, f, s2, cfg.p_t_watts};
    const auto r = solve_p2(prob, m0);
    ASSERT_FALSE(r.ratio_trace.empty());
    for (std::size_t i = 1; i < r.ratio_trace.size(); ++i)
    {
        EXPECT_GE(r.ratio_trace[i], r.ratio_trace[i - 1]);
        EXPECT_GE(r.sum_rate_trace[i], r.sum_rate_trace[i - 1]);
    }
    EXPECT_GE(sinr(h, geom.response(r.m), f, s2).sum(), sinr(h, geom.response(m0), f, s2).sum() - 1e-9);
    EXPECT_LE(transmit_power(geom.response(r.m), f), cfg.p_t_watts * (1.0 + 1e-9));
    EXPECT_GE(r.m.minCoeff(), 0.0);
    EXPECT_LE(r.m.maxCoeff(), 1.0);
}

TEST(SolveP2, CoupledSurface)
{
    auto cfg = paper_default();
    cfg.coupling_enabled = true;
    const auto geom = make_rhs_geometry(cfg);
    auto rng = make_rng(derive_seed(0, std::uint64_t{5}), "channel");
    const auto ch = generate_channels(cfg, rng);
    const CMatrix h = assemble_h_tot(ch, CVector::Ones(cfg.n_ris())).h_tot;
    const RVector m0 = RVector::Constant(64, 0.5);
    const double s2 = cfg.noise_watts();
    const CMatrix f = solve_p1(h, geom.response(m0), s2, cfg.p_t_watts).f;
    P2Problem prob{h, &geom, f, s2, cfg.p_t_watts};
    const auto r = solve_p2(prob, m0);
    EXPECT_GE(r.sum_rate_trace.back(), r.sum_rate_trace.front());
    // the coupled quadratic forms reproduce the coupled response
    const auto fp = build_fractional(geom.coupled_channel(h), geom.v, f, m0, s2);
    const CMatrix g = h * geom.response(r.m) * f;
    EXPECT_NEAR(r.m.dot(fp.sigma[0] * r.m), std::norm(g(0, 0)), 1e-9 * std::norm(g(0, 0)));
}
