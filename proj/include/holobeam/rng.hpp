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

#ifndef HOLOBEAM_RNG_HPP
#define HOLOBEAM_RNG_HPP

#include "common.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace holobeam
{
    using Rng = std::mt19937_64;

    // splitmix64 finaliser
    inline std::uint64_t mix64(std::uint64_t z)
    {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // FNV-1a
    inline std::uint64_t hash_string(std::string_view s)
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : s)
        {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t salt)
    {
        return mix64(parent ^ mix64(salt + 0x632be59bd9b4e019ULL));
    }

    inline std::uint64_t derive_seed(std::uint64_t parent, std::string_view tag)
    {
        return derive_seed(parent, hash_string(tag));
    }

    inline Rng make_rng(std::uint64_t seed, std::string_view stream)
    {
        return Rng(derive_seed(seed, stream));
    }

    // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    inline cplx complex_normal(Rng &rng, double variance)
    {
        std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
        const double re = n(rng);
        const double im = n(rng);
        return {re, im};
    }

    inline double uniform(Rng &rng, double lo, double hi)
    {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    }

    inline CVector random_unit_modulus(Rng &rng, Eigen::Index n)
    {
        CVector out(n);
        for (Eigen::Index i = 0; i < n; ++i)
            out(i) = std::polar(1.0, uniform(rng, 0.0, 2.0 * pi));
        return out;
    }
}

#endif
