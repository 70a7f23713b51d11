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

#include "phy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace cfthz
{
    // One access point as seen from the UE
    struct AccessPoint
    {
        int id = 0;
        double distance = 1.0; // [m]
        double angle = 0.5;    // LoS angle [rad], in (0, pi/2)
    };

    // Everything needed to turn an AP geometry into a received PSD
    struct LinkBudget
    {
        AntennaConfig antenna;
        PhysConstants consts;
        double psd = 1.0 / 16.0e9;          // Per-AP transmit PSD [W/Hz]
        double gamma_th = 0.0;              // Receiver sensitivity [W/Hz]
        std::optional<double> fixed_gain;   // Test hook: replaces antenna_gain by a constant

        double gain(double f, double theta) const
        {
            if (fixed_gain)
            {
                if (!(f >= antenna.f_co))
                    throw std::domain_error("antenna_gain: frequency below cutoff");
                return *fixed_gain;
            }
            return antenna_gain(f, theta, antenna, consts);
        }

        // gamma(f, theta_n) = p * G(f, theta_n) * |h|^2
        double rss(double f, const AccessPoint &ap) const
        {
            return psd * gain(f, ap.angle) * path_gain(f, ap.distance, consts);
        }

        // gamma * 1(gamma >= gamma_th)
        double thresholded_rss(double f, const AccessPoint &ap) const
        {
            double g = rss(f, ap);
            return g >= gamma_th ? g : 0.0;
        }
    };

    inline double link_rss(double f, const AccessPoint &ap, double p, const AntennaConfig &cfg,
                           const PhysConstants &consts = {})
    {
        if (!(p > 0.0))
            throw std::domain_error("link_rss: transmit PSD must be positive");
        return p * antenna_gain(f, ap.angle, cfg, consts) * path_gain(f, ap.distance, consts);
    }

    enum class Scheme
    {
        Mrt,
        BestNsel,
        BestPerSubchannel,
        NearestNeighbor
    };

    inline std::string_view to_string(Scheme s)
    {
        switch (s)
        {
        case Scheme::Mrt:
            return "mrt";
        case Scheme::BestNsel:
            return "best_nsel";
        case Scheme::BestPerSubchannel:
            return "best_single";
        case Scheme::NearestNeighbor:
            return "nearest";
        }
        return "?";
    }

    // Realizes the binary selection x_n(f, theta_n). Set-based schemes carry a static id set;
    // BestPerSubchannel is a rule resolved at query time.
    class SelectionMask
    {
    public:
        SelectionMask(Scheme scheme, std::vector<int> ids) : scheme_(scheme), ids_(std::move(ids))
        {
            std::sort(ids_.begin(), ids_.end());
            ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
        }

        Scheme scheme() const { return scheme_; }
        bool per_frequency() const { return scheme_ == Scheme::BestPerSubchannel; }
        const std::vector<int> &static_set() const { return ids_; }
        bool contains(int id) const { return std::binary_search(ids_.begin(), ids_.end(), id); }

    private:
        Scheme scheme_;
        std::vector<int> ids_;
    };

    inline SelectionMask select_mrt(std::span<const AccessPoint> aps)
    {
        if (aps.empty())
            throw std::invalid_argument("select_mrt: empty AP list");
        std::vector<int> ids;
        for (const auto &ap : aps)
            ids.push_back(ap.id);
        return {Scheme::Mrt, std::move(ids)};
    }

    // Ranking metric for best-N_sel: RSS at the AP's peak-radiation frequency, clamped to f_upper
    inline double peak_rss(const AccessPoint &ap, const LinkBudget &budget, double f_upper)
    {
        double f = std::min(peak_frequency(ap.angle, budget.antenna.f_co), f_upper);
        return budget.rss(f, ap);
    }

    inline SelectionMask select_best_nsel(std::span<const AccessPoint> aps, int n_sel, const LinkBudget &budget,
                                          double f_upper)
    {
        if (n_sel < 1 || static_cast<std::size_t>(n_sel) > aps.size())
            throw std::invalid_argument("select_best_nsel: n_sel must be in [1, N]");

        std::vector<std::pair<double, int>> ranked;
        ranked.reserve(aps.size());
        for (const auto &ap : aps)
            ranked.emplace_back(peak_rss(ap, budget, f_upper), ap.id);
        std::sort(ranked.begin(), ranked.end(), [](const auto &a, const auto &b)
                  { return a.first != b.first ? a.first > b.first : a.second < b.second; });

        std::vector<int> ids;
        for (int i = 0; i < n_sel; ++i)
            ids.push_back(ranked[i].second);
        return {Scheme::BestNsel, std::move(ids)};
    }

    // Id of the AP with the largest RSS at f (ties: lower id)
    inline int select_best_at(std::span<const AccessPoint> aps, double f, const LinkBudget &budget)
    {
        if (aps.empty())
            throw std::invalid_argument("select_best_at: empty AP list");
        int best_id = 0;
        double best = -1.0;
        for (const auto &ap : aps)
        {
            double g = budget.rss(f, ap);
            if (g > best || (g == best && ap.id < best_id))
            {
                best = g;
                best_id = ap.id;
            }
        }
        return best_id;
    }

    inline SelectionMask select_best_per_subchannel(std::span<const AccessPoint> aps)
    {
        if (aps.empty())
            throw std::invalid_argument("select_best_per_subchannel: empty AP list");
        return {Scheme::BestPerSubchannel, {}};
    }

    inline SelectionMask select_nearest(std::span<const AccessPoint> aps)
    {
        if (aps.empty())
            throw std::invalid_argument("select_nearest: empty AP list");
        const AccessPoint *best = &aps.front();
        for (const auto &ap : aps)
            if (ap.distance < best->distance || (ap.distance == best->distance && ap.id < best->id))
                best = &ap;
        return {Scheme::NearestNeighbor, {best->id}};
    }

    // Combined RSS at the UE: thresholded sum over the selected APs (coherent MRT combining),
    // or the max-form for the per-subchannel best AP.
    inline double combined_rss(const SelectionMask &mask, std::span<const AccessPoint> aps, double f,
                               const LinkBudget &budget)
    {
        double acc = 0.0;
        if (mask.per_frequency())
        {
            for (const auto &ap : aps)
                acc = std::max(acc, budget.thresholded_rss(f, ap));
            return acc;
        }
        for (const auto &ap : aps)
            if (mask.contains(ap.id))
                acc += budget.thresholded_rss(f, ap);
        return acc;
    }

    // Number of distinct APs a mask activates; for the per-subchannel rule this needs the
    // frequencies actually used.
    inline std::size_t active_ap_count(const SelectionMask &mask, std::span<const AccessPoint> aps,
                                       std::span<const double> used_freqs, const LinkBudget &budget)
    {
        if (!mask.per_frequency())
            return mask.static_set().size();
        std::vector<int> ids;
        for (double f : used_freqs)
            ids.push_back(select_best_at(aps, f, budget));
        std::sort(ids.begin(), ids.end());
        return static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
    }

} // namespace cfthz
