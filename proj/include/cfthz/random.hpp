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
#include <limits>

namespace cfthz
{
    // Counter-based generator: output k of a stream is mix(key + k * gamma), i.e. SplitMix64
    // with an explicit counter. Substreams are derived by hashing tags into the key, so the
    // value of a draw depends only on (key, counter), never on scheduling.
    class CounterRng
    {
    public:
        using result_type = std::uint64_t;

        explicit CounterRng(std::uint64_t key = 0) : key_(mix(key ^ 0x6A09E667F3BCC909ULL)) {}

        static constexpr result_type min() { return 0; }
        static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

        result_type operator()() { return mix(key_ + (++counter_) * kGamma); }

        // Independent substream identified by `tag`
        CounterRng derive(std::uint64_t tag) const
        {
            CounterRng r;
            r.key_ = mix(key_ ^ mix(tag + kGamma));
            return r;
        }

        CounterRng derive(double tag) const { return derive(std::bit_cast<std::uint64_t>(tag)); }

        std::uint64_t counter() const { return counter_; }

    private:
        static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

        static constexpr std::uint64_t mix(std::uint64_t z)
        {
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            return z ^ (z >> 31);
        }

        std::uint64_t key_ = 0;
        std::uint64_t counter_ = 0;
    };

} // namespace cfthz
