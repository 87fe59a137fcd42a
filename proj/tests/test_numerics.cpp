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

#include <holobeam/numerics.hpp>
#include <holobeam/rng.hpp>

#include <gtest/gtest.h>

using namespace holobeam;

namespace
{
    CMatrix random_matrix(Rng &rng, Eigen::Index r, Eigen::Index c)
    {
        CMatrix m(r, c);
        for (Eigen::Index i = 0; i < m.size(); ++i)
            m(i) = complex_normal(rng, 1.0);
        return m;
    }
}

TEST(PinvRight, Identity)
{
    const CMatrix f = numerics::pinv_right(CMatrix::Identity(2, 2));
    EXPECT_LT((f - CMatrix::Identity(2, 2)).norm(), 1e-14);
}

TEST(PinvRight, Diagonal)
{
    CMatrix q = CMatrix::Zero(2, 2);
    q(0, 0) = 1.0;
    q(1, 1) = 2.0;
    const CMatrix f = numerics::pinv_right(q);
    EXPECT_NEAR(std::abs(f(0, 0) - cplx(1.0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(f(1, 1) - cplx(0.5)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(f(0, 1)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(f(1, 0)), 0.0, 1e-14);
}

TEST(PinvRight, RandomWideResidual)
{
    auto rng = make_rng(1, "pinv");
    for (int trial = 0; trial < 200; ++trial)
    {
        const Eigen::Index k = 1 + trial % 4, n = k + trial % 5;
        const CMatrix q = random_matrix(rng, k, n);
        const CMatrix f = numerics::pinv_right(q);
        ASSERT_EQ(f.rows(), n);
        ASSERT_EQ(f.cols(), k);
        EXPECT_LT((q * f - CMatrix::Identity(k, k)).cwiseAbs().maxCoeff(), 1e-10);
        // minimum-norm right inverse: columns lie in the row space of Q
        const CMatrix oracle = q.adjoint() * (q * q.adjoint()).inverse();
        EXPECT_LT((f - oracle).norm(), 1e-9 * oracle.norm());
    }
}

TEST(PinvRight, RankDeficientThrows)
{
    CMatrix q(2, 3);
    q << 1.0, 2.0, 3.0, 2.0, 4.0, 6.0;
    try
    {
        numerics::pinv_right(q);
        FAIL() << "expected an error";
    }
    catch (const Error &e)
    {
        EXPECT_STREQ(e.what(), "rank-deficient effective channel");
    }
}

TEST(PinvRight, TallThrows)
{
    EXPECT_THROW(numerics::pinv_right(CMatrix::Ones(3, 2)), Error);
}

TEST(InvSqrtHermitian, Identity)
{
    EXPECT_LT((numerics::inv_sqrt_hermitian(CMatrix::Identity(3, 3)) - CMatrix::Identity(3, 3)).norm(), 1e-14);
}

TEST(InvSqrtHermitian, Diagonal)
{
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 9.0;
    const CMatrix c = numerics::inv_sqrt_hermitian(d);
    EXPECT_NEAR(c(0, 0).real(), 0.5, 1e-14);
    EXPECT_NEAR(c(1, 1).real(), 1.0 / 3.0, 1e-14);
    EXPECT_NEAR(std::abs(c(0, 1)), 0.0, 1e-14);
}

TEST(InvSqrtHermitian, TwoByTwoAgainstDirectInverse)
{
    CMatrix d(2, 2);
    d << 1.0, 0.5, 0.5, 1.0;
    const CMatrix c = numerics::inv_sqrt_hermitian(d);
    EXPECT_LT((c * c * d - CMatrix::Identity(2, 2)).norm(), 1e-12);
    EXPECT_LT((c * c - d.inverse()).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((c - c.adjoint()).norm(), 1e-15);
    // eigenvalues 1.5 and 0.5 with eigenvectors (1, +-1)/sqrt 2
    const double a = 0.5 * (1.0 / std::sqrt(1.5) + 1.0 / std::sqrt(0.5));
    const double b = 0.5 * (1.0 / std::sqrt(1.5) - 1.0 / std::sqrt(0.5));
    EXPECT_NEAR(c(0, 0).real(), a, 1e-14);
    EXPECT_NEAR(c(0, 1).real(), b, 1e-14);
}

TEST(InvSqrtHermitian, RandomHermitianPd)
{
    auto rng = make_rng(2, "invsqrt");
    for (int trial = 0; trial < 50; ++trial)
    {
        const CMatrix a = random_matrix(rng, 6, 6);
        const CMatrix d = a * a.adjoint() + 0.1 * CMatrix::Identity(6, 6);
        const CMatrix c = numerics::inv_sqrt_hermitian(d);
        EXPECT_LT((c - c.adjoint()).norm(), 1e-12 * c.norm());
        EXPECT_LT((c * c * d - CMatrix::Identity(6, 6)).norm(), 1e-8);
    }
}

TEST(InvSqrtHermitian, NotPositiveDefinite)
{
    CMatrix d(2, 2);
    d << 1.0, 2.0, 2.0, 1.0;
    try
    {
        numerics::inv_sqrt_hermitian(d);
        FAIL() << "expected an error";
    }
    catch (const Error &e)
    {
        EXPECT_STREQ(e.what(), "coupling matrix not positive definite");
    }
}

TEST(SincNorm, KnownValues)
{
    EXPECT_EQ(numerics::sinc_norm(0.0), 1.0);
    EXPECT_NEAR(numerics::sinc_norm(1.0), 0.0, 1e-16);
    EXPECT_NEAR(numerics::sinc_norm(0.5), 2.0 / pi, 1e-15);
    EXPECT_NEAR(numerics::sinc_norm(1e-9), 1.0, 1e-15);
}

TEST(SincNorm, EvenAndBounded)
{
    auto rng = make_rng(3, "sinc");
    for (int i = 0; i < 1000; ++i)
    {
        const double x = uniform(rng, -20.0, 20.0);
        EXPECT_EQ(numerics::sinc_norm(x), numerics::sinc_norm(-x));
        EXPECT_LE(std::abs(numerics::sinc_norm(x)), 1.0);
    }
}

TEST(Units, DbmToWatts)
{
    EXPECT_DOUBLE_EQ(numerics::dbm_to_watts(30.0), 1.0);
    EXPECT_DOUBLE_EQ(numerics::dbm_to_watts(0.0), 1e-3);
    EXPECT_NEAR(numerics::dbm_to_watts(-90.0), 1e-12, 1e-27);
    EXPECT_DOUBLE_EQ(numerics::db_to_linear(20.0), 100.0);
}

TEST(Rng, DeterministicStreams)
{
    auto a = make_rng(42, "x");
    auto b = make_rng(42, "x");
    auto c = make_rng(42, "y");
    const auto va = a(), vb = b(), vc = c();
    EXPECT_EQ(va, vb);
    EXPECT_NE(va, vc);
    EXPECT_NE(derive_seed(7, std::uint64_t{1}), derive_seed(7, std::uint64_t{2}));
}

TEST(Rng, UnitModulus)
{
    auto rng = make_rng(5, "theta");
    const CVector t = random_unit_modulus(rng, 64);
    for (Eigen::Index i = 0; i < t.size(); ++i)
        EXPECT_NEAR(std::abs(t(i)), 1.0, 1e-15);
}
