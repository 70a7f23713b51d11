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

#include "alloc.hpp"
#include "config.hpp"
#include "sim.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <span>
#include <string>
#include <vector>

// Machine-readable output. Numbers are written with std::to_chars (shortest round-trip form,
// '.' separator, no grouping), so files are locale independent and byte-reproducible.

namespace cfthz
{
    inline std::string fmt_num(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[64];
        auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, end);
    }

    inline std::string fmt_num(long long v) { return std::to_string(v); }

    inline std::string sweep_csv_header(SweepAxis axis)
    {
        return std::string(to_string(axis)) +
               ",scheme,mean_rate_bps,stderr_bps,mean_active_aps,trials,mean_integrated_rate_bps,stderr_integrated_bps\n";
    }

    inline void write_sweep_rows(std::ostream &os, const SweepPoint &pt)
    {
        for (const auto &st : pt.stats)
            os << fmt_num(pt.axis_value) << ',' << to_string(st.scheme) << ',' << fmt_num(st.mean_rate) << ','
               << fmt_num(st.stderr_rate) << ',' << fmt_num(st.mean_active) << ',' << st.trials << ','
               << fmt_num(st.mean_integrated) << ',' << fmt_num(st.stderr_integrated) << '\n';
    }

    inline void write_sweep_csv(std::ostream &os, const SweepResult &res)
    {
        os << sweep_csv_header(res.axis);
        for (const auto &pt : res.points)
            write_sweep_rows(os, pt);
    }

    struct GainRow
    {
        double theta = 0.0; // [rad]
        double f = 0.0;     // [Hz]
        double gain = 0.0;
    };

    inline void write_gain_csv(std::ostream &os, std::span<const GainRow> rows)
    {
        os << "theta_rad,f_hz,gain,gain_db\n";
        for (const auto &r : rows)
            os << fmt_num(r.theta) << ',' << fmt_num(r.f) << ',' << fmt_num(r.gain) << ','
               << fmt_num(10.0 * std::log10(r.gain)) << '\n';
    }

    inline void write_trace_csv(std::ostream &os, std::span<const double> trace)
    {
        os << "iteration,best_objective_bps\n";
        for (std::size_t t = 0; t < trace.size(); ++t)
            os << t + 1 << ',' << fmt_num(trace[t]) << '\n';
    }

    // Records (index, center_hz, width_hz, rss_w_per_hz, rss_dbm_hz, rate_bps)
    template <class RssFn>
    nlohmann::json plan_to_json(const SubchannelPlan &plan, RssFn &&rss_fn, double noise_psd)
    {
        nlohmann::json j;
        j["total_budget_hz"] = plan.total_budget;
        j["total_width_hz"] = plan.total_width();
        auto &arr = j["channels"] = nlohmann::json::array();
        double total = 0.0;
        for (std::size_t i = 0; i < plan.channels.size(); ++i)
        {
            const auto &ch = plan.channels[i];
            double rss = rss_fn(ch.center);
            double rate = ch.width > 0.0 ? ch.width * std::log2(1.0 + rss / noise_psd) : 0.0;
            total += rate;
            arr.push_back({{"index", i},
                           {"center_hz", ch.center},
                           {"width_hz", ch.width},
                           {"rss_w_per_hz", rss},
                           {"rss_dbm_hz", rss > 0.0 ? nlohmann::json(w_hz_to_dbm_hz(rss)) : nlohmann::json(nullptr)},
                           {"rate_bps", rate}});
        }
        j["rate_bps"] = total;
        return j;
    }

    inline nlohmann::json outcome_to_json(const SchemeOutcome &o)
    {
        nlohmann::json j;
        j["scheme"] = std::string(to_string(o.scheme));
        j["plan_rate_bps"] = o.plan_rate;
        j["integrated_rate_bps"] = o.integrated_rate;
        j["active_aps"] = o.active_aps;
        j["dead"] = o.dead;
        j["incumbent_rate_bps"] = o.incumbent_rate;
        auto &chs = j["channels"] = nlohmann::json::array();
        for (std::size_t i = 0; i < o.plan.channels.size(); ++i)
            chs.push_back({{"index", i},
                           {"center_hz", o.plan.channels[i].center},
                           {"width_hz", o.plan.channels[i].width},
                           {"rss_w_per_hz", i < o.center_rss.size() ? o.center_rss[i] : 0.0}});
        j["trace_bps"] = o.trace;
        return j;
    }

    inline nlohmann::json trial_to_json(const TrialResult &t)
    {
        nlohmann::json j;
        j["scenario_digest"] = hex64(t.digest);
        auto &aps = j["aps"] = nlohmann::json::array();
        for (const auto &ap : t.aps)
            aps.push_back({{"id", ap.id}, {"distance_m", ap.distance}, {"angle_rad", ap.angle}});
        auto &out = j["outcomes"] = nlohmann::json::array();
        for (const auto &o : t.outcomes)
            out.push_back(outcome_to_json(o));
        return j;
    }

} // namespace cfthz
