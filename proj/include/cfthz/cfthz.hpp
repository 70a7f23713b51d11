// SPDX-License-Identifier: Apache-2.0
//
// cfthz - cell-free terahertz downlinks with leaky-wave antennas
// Copyright (C) 2026 The cfthz authors
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

#pragma once

// Umbrella header

#include "alloc.hpp"
#include "config.hpp"
#include "io.hpp"
#include "phy.hpp"
#include "random.hpp"
#include "selection.hpp"
#include "sim.hpp"

namespace cfthz
{
    inline constexpr const char *version = "0.1.0";
}
