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

#ifndef HOLOBEAM_NUMERICS_HPP
#define HOLOBEAM_NUMERICS_HPP

#include "common.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace holobeam::numerics
{
    // Q Q^H is treated as singular above this condition number.
    inline constexpr double max_gram_condition = 1e12;

    // Smallest eigenvalue accepted by inv_sqrt_hermitian. The sinc Gram matrix of an
    // 8x8 grid at quarter-wavelength pitch has a smallest eigenvalue near 3e-11, so the
    // floor sits below that while staying well above the eigensolver's rounding level.
    inline constexpr double min_eigenvalue = 1e-13;

    // Right pseudo-inverse Q^H (Q Q^H)^-1 of a wide matrix, computed from a thin QR of
    // Q^H so the conditioning is that of Q rather than of the Gram matrix.
    inline CMatrix pinv_right(const CMatrix &q, const char *singular_message = "rank-deficient effective channel")
    {
        const auto rows = q.rows(), cols = q.cols();
        if (rows == 0 || rows > cols)
            throw Error(singular_message);

        const CMatrix qh = q.adjoint(); // cols x rows
        Eigen::HouseholderQR<CMatrix> qr(qh);
        const CMatrix r = qr.matrixQR().topRows(rows).triangularView<Eigen::Upper>();

        Eigen::JacobiSVD<CMatrix> svd(r);
        const auto &sv = svd.singularValues();
        const double smax = sv(0), smin = sv(sv.size() - 1);
        if (!(smin > 0.0) || !std::isfinite(smax) || (smax / smin) * (smax / smin) > max_gram_condition)
            throw Error(singular_message);

        // Q = R^H U^H  =>  Q^H (Q Q^H)^-1 = U R^-H
        const CMatrix u = qr.householderQ() * CMatrix::Identity(cols, rows);
        const CMatrix r_inv_h = r.adjoint().triangularView<Eigen::Lower>().solve(CMatrix::Identity(rows, rows));
        return u * r_inv_h;
    }

    // D^(-1/2) for Hermitian positive definite D.
    inline CMatrix inv_sqrt_hermitian(const CMatrix &d)
    {
        if (d.rows() != d.cols())
            throw Error("coupling matrix not positive definite");
        const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
        if ((d - d.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
            throw Error("coupling matrix not positive definite");

        Eigen::SelfAdjointEigenSolver<CMatrix> eig(d);
        if (eig.info() != Eigen::Success)
            throw Error("coupling matrix not positive definite");
        const RVector &lambda = eig.eigenvalues();
        if (lambda.minCoeff() <= min_eigenvalue)
            throw Error("coupling matrix not positive definite");

        const RVector inv_sqrt = lambda.cwiseSqrt().cwiseInverse();
        const CMatrix &vecs = eig.eigenvectors();
        CMatrix c = vecs * inv_sqrt.asDiagonal() * vecs.adjoint();
        return (c + c.adjoint()) * 0.5; // exact Hermitian symmetry
    }

    // Normalised sinc, sin(pi x) / (pi x).
    inline double sinc_norm(double x)
    {
        const double px = pi * x;
        if (std::abs(px) < 1e-8)
            return 1.0 - px * px / 6.0;
        return std::sin(px) / px;
    }

    inline double dbm_to_watts(double dbm)
    {
        return std::pow(10.0, (dbm - 30.0) / 10.0);
    }

    inline double db_to_linear(double db)
    {
        return std::pow(10.0, db / 10.0);
    }
}

#endif
