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

#include <bit>
#include <cstdint>
#include <span>
#include <string_view>

namespace cfthz
{
    // 64-bit FNV-1a, stable across platforms and runs
    inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xCBF29CE484222325ULL)
    {
        for (unsigned char ch : bytes)
        {
            h ^= ch;
            h *= 0x100000001B3ULL;
        }
        return h;
    }

    inline std::uint64_t fnv1a64(std::span<const double> values, std::uint64_t h = 0xCBF29CE484222325ULL)
    {
        for (double v : values)
        {
            auto bits = std::bit_cast<std::uint64_t>(v);
            for (int b = 0; b < 8; ++b)
            {
                h ^= (bits >> (8 * b)) & 0xFFu;
                h *= 0x100000001B3ULL;
            }
        }
        return h;
    }

} // namespace cfthz
