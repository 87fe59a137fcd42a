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

#ifndef HOLOBEAM_HOLOBEAM_HPP
#define HOLOBEAM_HOLOBEAM_HPP

#include "am_driver.hpp"
#include "channel.hpp"
#include "common.hpp"
#include "config.hpp"
#include "digital_bf.hpp"
#include "harness.hpp"
#include "holo_bf.hpp"
#include "numerics.hpp"
#include "rates.hpp"
#include "rhs.hpp"
#include "ris_opt.hpp"
#include "rng.hpp"

#endif
