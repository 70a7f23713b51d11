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
#include "digest.hpp"
#include "parallel.hpp"
#include "phy.hpp"
#include "random.hpp"
#include "selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace cfthz
{
    // Selection schemes plus the two reference baselines
    enum class SchemeKind
    {
        Mrt,
        BestNsel,
        BestSingle,
        Nearest,
        EqualMrt,
        ColocatedMrt
    };

    inline constexpr SchemeKind all_schemes[] = {SchemeKind::Mrt, SchemeKind::BestNsel, SchemeKind::BestSingle,
                                                 SchemeKind::Nearest, SchemeKind::EqualMrt, SchemeKind::ColocatedMrt};

    inline std::string_view to_string(SchemeKind s)
    {
        switch (s)
        {
        case SchemeKind::Mrt:
            return "mrt";
        case SchemeKind::BestNsel:
            return "best_nsel";
        case SchemeKind::BestSingle:
            return "best_single";
        case SchemeKind::Nearest:
            return "nearest";
        case SchemeKind::EqualMrt:
            return "equal_mrt";
        case SchemeKind::ColocatedMrt:
            return "colocated_mrt";
        }
        return "?";
    }

    inline std::optional<SchemeKind> parse_scheme(std::string_view name)
    {
        for (auto s : all_schemes)
            if (to_string(s) == name)
                return s;
        return std::nullopt;
    }

    struct ScenarioConfig
    {
        int n_aps = 20;
        int n_sel = 2;
        double radius = 50.0;        // coverage radius [m]
        double d_min = 0.5;          // [m]
        double angle_guard = 0.01;   // theta ~ U(guard, pi/2 - guard) [rad]
        double f_upper = 300.0e9;    // [Hz]
        double b_total = 16.0e9;     // [Hz]
        double p_total = 1.0;        // [W]
        double noise_psd = dbm_hz_to_w_hz(-168.0); // [W/Hz]
        double gamma_th = dbm_hz_to_w_hz(-174.5);  // [W/Hz]
        double eps_db = 0.5;
        int trials = 200;
        std::uint64_t seed = 1;
        std::vector<SchemeKind> schemes{std::begin(all_schemes), std::end(all_schemes)};
        AntennaConfig antenna;
        PhysConstants consts;
        CEConfig ce;

        double f_co() const { return antenna.f_co; }
        double psd() const { return p_total / b_total; } // per-AP transmit PSD
        Band band() const { return {antenna.f_co, f_upper}; }

        LinkBudget link_budget() const
        {
            LinkBudget lb;
            lb.antenna = antenna;
            lb.consts = consts;
            lb.psd = psd();
            lb.gamma_th = gamma_th;
            return lb;
        }

        AllocProblem problem() const { return {band(), eps_db, b_total, noise_psd, ce.budget}; }

        // Empty when valid; otherwise "<key>: <reason>"
        std::string is_valid() const
        {
            if (auto e = antenna.is_valid(consts); !e.empty())
                return "antenna: " + e;
            if (auto e = ce.is_valid(); !e.empty())
                return "ce: " + e;
            if (!(consts.c > 0.0))
                return "physics.c_m_per_s: must be positive";
            if (n_aps < 1)
                return "n_aps: must be >= 1";
            if (n_sel < 1)
                return "n_sel: must be >= 1";
            if (!(d_min > 0.0))
                return "d_min_m: must be positive";
            if (!(radius > d_min))
                return "radius_m: must exceed d_min_m";
            if (!(angle_guard > 0.0 && angle_guard < std::numbers::pi / 4.0))
                return "angle_guard_rad: must be in (0, pi/4)";
            if (!(f_upper > antenna.f_co))
                return "f_upper_hz: must exceed antenna.f_co_hz";
            if (!(b_total > 0.0))
                return "b_total_hz: must be positive";
            if (!(p_total > 0.0))
                return "p_total_w: must be positive";
            if (!(noise_psd > 0.0))
                return "noise_psd: must be positive";
            if (!(gamma_th >= 0.0))
                return "gamma_th: must be non-negative";
            if (!(eps_db >= 0.0))
                return "eps_db: must be non-negative";
            if (trials < 1)
                return "trials: must be >= 1";
            if (schemes.empty())
                return "schemes: must not be empty";
            return {};
        }

        void validate() const
        {
            if (auto e = is_valid(); !e.empty())
                throw std::invalid_argument("invalid configuration: " + e);
        }
    };

    // Distances ~ U(d_min, radius), angles ~ U(guard, pi/2 - guard); ids 0..N-1
    template <class Rng>
    std::vector<AccessPoint> generate_scenario(Rng &rng, const ScenarioConfig &cfg)
    {
        std::uniform_real_distribution<double> dist(cfg.d_min, cfg.radius);
        std::uniform_real_distribution<double> ang(cfg.angle_guard, std::numbers::pi / 2.0 - cfg.angle_guard);
        std::vector<AccessPoint> aps(static_cast<std::size_t>(cfg.n_aps));
        for (int n = 0; n < cfg.n_aps; ++n)
        {
            auto &ap = aps[static_cast<std::size_t>(n)];
            ap.id = n;
            ap.distance = dist(rng);
            ap.angle = ang(rng);
        }
        return aps;
    }

    inline std::uint64_t scenario_digest(std::span<const AccessPoint> aps)
    {
        std::vector<double> v;
        for (const auto &ap : aps)
        {
            v.push_back(static_cast<double>(ap.id));
            v.push_back(ap.distance);
            v.push_back(ap.angle);
        }
        return fnv1a64(v);
    }

    // Thresholded per-AP RSS on the CE frequency grid, shared by every scheme of one trial
    class LinkTable
    {
    public:
        LinkTable(std::span<const AccessPoint> aps, const LinkBudget &budget, Band band, double step)
            : aps_(aps.begin(), aps.end()), budget_(budget), band_(band), step_(step)
        {
            const std::size_t n = SpectrumGrid::nodes_for(band, step);
            rows_.resize(aps_.size());
            for (std::size_t a = 0; a < aps_.size(); ++a)
            {
                rows_[a].resize(n);
                for (std::size_t k = 0; k < n; ++k)
                    rows_[a][k] = budget.thresholded_rss(band.lo + static_cast<double>(k) * step, aps_[a]);
            }
        }

        const std::vector<AccessPoint> &aps() const { return aps_; }
        const LinkBudget &budget() const { return budget_; }

        // Combined RSS of `mask` as a grid-backed spectrum
        SpectrumGrid spectrum(const SelectionMask &mask) const
        {
            const std::size_t n = SpectrumGrid::nodes_for(band_, step_);
            std::vector<double> v(n, 0.0);
            for (std::size_t a = 0; a < aps_.size(); ++a)
            {
                if (mask.per_frequency())
                {
                    for (std::size_t k = 0; k < n; ++k)
                        v[k] = std::max(v[k], rows_[a][k]);
                }
                else if (mask.contains(aps_[a].id))
                {
                    for (std::size_t k = 0; k < n; ++k)
                        v[k] += rows_[a][k];
                }
            }
            auto fn = [mask, aps = aps_, budget = budget_](double f)
            { return combined_rss(mask, aps, f, budget); };
            return SpectrumGrid(band_, step_, std::move(v), fn);
        }

    private:
        std::vector<AccessPoint> aps_;
        LinkBudget budget_;
        Band band_;
        double step_;
        std::vector<std::vector<double>> rows_;
    };

    struct SchemeOutcome
    {
        SchemeKind scheme = SchemeKind::Mrt;
        double plan_rate = 0.0;       // sum B_i log2(1 + rss(f_i)/sigma^2) [bit/s]
        double integrated_rate = 0.0; // integrated over each subchannel [bit/s]
        std::size_t active_aps = 0;
        bool dead = false;            // every link below gamma_th across the band
        SubchannelPlan plan;
        std::vector<double> center_rss;
        SubchannelPlan incumbent;
        double incumbent_rate = 0.0;
        std::vector<double> trace;
    };

    inline SelectionMask make_mask(SchemeKind scheme, std::span<const AccessPoint> aps, const ScenarioConfig &cfg,
                                   const LinkBudget &budget)
    {
        switch (scheme)
        {
        case SchemeKind::Mrt:
        case SchemeKind::EqualMrt:
        case SchemeKind::ColocatedMrt:
            return select_mrt(aps);
        case SchemeKind::BestNsel:
            // fewer APs than n_sel: every AP is selected
            return select_best_nsel(aps, std::min(cfg.n_sel, static_cast<int>(aps.size())), budget, cfg.f_upper);
        case SchemeKind::BestSingle:
            return select_best_per_subchannel(aps);
        case SchemeKind::Nearest:
            return select_nearest(aps);
        }
        throw std::invalid_argument("make_mask: unknown scheme");
    }

    namespace detail
    {
        template <class Rng>
        SchemeOutcome optimize_spectrum(SchemeKind scheme, const SpectrumGrid &grid, const ScenarioConfig &cfg, Rng rng)
        {
            SchemeOutcome out;
            out.scheme = scheme;
            const auto vals = grid.values();
            out.dead = std::all_of(vals.begin(), vals.end(), [](double v)
                                   { return !(v > 0.0); });
            auto res = ce_optimize(grid, cfg.problem(), cfg.ce, rng);
            out.plan = std::move(res.final_plan.plan);
            out.center_rss = std::move(res.final_plan.center_rss);
            out.plan_rate = res.final_plan.objective;
            out.integrated_rate = integrated_rate(out.plan, grid, cfg.noise_psd, cfg.ce.step);
            out.incumbent = std::move(res.incumbent);
            out.incumbent_rate = res.incumbent_objective;
            out.trace = std::move(res.trace);
            return out;
        }
    } // namespace detail

    // One selection scheme on one scenario: mask -> combined RSS -> CE allocation.
    // `rng` is taken by value so every scheme of a trial can replay the same CE stream.
    template <class Rng>
    SchemeOutcome run_trial(const LinkTable &table, SchemeKind scheme, const ScenarioConfig &cfg, Rng rng)
    {
        if (scheme == SchemeKind::EqualMrt || scheme == SchemeKind::ColocatedMrt)
            throw std::invalid_argument("run_trial: baselines have dedicated entry points");
        const auto &aps = table.aps();
        auto mask = make_mask(scheme, aps, cfg, table.budget());
        auto grid = table.spectrum(mask);
        auto out = detail::optimize_spectrum(scheme, grid, cfg, rng);

        std::vector<double> used;
        for (const auto &ch : out.plan.channels)
            if (ch.width > 0.0)
                used.push_back(ch.center);
        out.active_aps = active_ap_count(mask, aps, used, table.budget());
        return out;
    }

    template <class Rng>
    SchemeOutcome run_trial(std::span<const AccessPoint> aps, SchemeKind scheme, const ScenarioConfig &cfg, Rng rng)
    {
        LinkTable table(aps, cfg.link_budget(), cfg.band(), cfg.ce.step);
        return run_trial(table, scheme, cfg, rng);
    }

    // Evenly spaced subchannel centers of the equal-allocation reference
    inline SubchannelPlan equal_plan(const ScenarioConfig &cfg)
    {
        const int I = cfg.ce.n_sub;
        const double spacing = cfg.band().span() / I, width = cfg.b_total / I;
        if (width > spacing)
            throw std::invalid_argument("equal_allocation_baseline: b_total / I exceeds the subchannel spacing");
        SubchannelPlan plan;
        plan.total_budget = cfg.b_total;
        for (int i = 1; i <= I; ++i)
            plan.channels.push_back({cfg.f_co() + (i - 0.5) * spacing, width});
        return plan;
    }

    // MRT over all APs with I equal-width subchannels at evenly spaced centers. The headline
    // rate is the integrated one since these channels ignore coherence.
    inline SchemeOutcome equal_allocation_baseline(const LinkTable &table, const ScenarioConfig &cfg)
    {
        SchemeOutcome out;
        out.scheme = SchemeKind::EqualMrt;
        out.plan = equal_plan(cfg);
        auto grid = table.spectrum(select_mrt(table.aps()));
        const auto vals = grid.values();
        out.dead = std::all_of(vals.begin(), vals.end(), [](double v)
                               { return !(v > 0.0); });
        for (const auto &ch : out.plan.channels)
            out.center_rss.push_back(grid(ch.center));
        out.plan_rate = plan_rate(out.plan, grid, cfg.noise_psd);
        out.integrated_rate = integrated_rate(out.plan, grid, cfg.noise_psd, cfg.ce.step);
        out.incumbent = out.plan;
        out.incumbent_rate = out.plan_rate;
        out.active_aps = table.aps().size();
        return out;
    }

    inline SchemeOutcome equal_allocation_baseline(std::span<const AccessPoint> aps, const ScenarioConfig &cfg)
    {
        LinkTable table(aps, cfg.link_budget(), cfg.band(), cfg.ce.step);
        return equal_allocation_baseline(table, cfg);
    }

    // Co-located site: N antennas sharing one (d, theta) draw, MRT combined, CE allocated.
    // Counts as a single active AP.
    template <class Rng>
    SchemeOutcome colocated_at(const AccessPoint &site, const ScenarioConfig &cfg, Rng ce_rng)
    {
        std::vector<AccessPoint> antennas(static_cast<std::size_t>(cfg.n_aps), site);
        for (int n = 0; n < cfg.n_aps; ++n)
            antennas[static_cast<std::size_t>(n)].id = n;
        LinkTable table(antennas, cfg.link_budget(), cfg.band(), cfg.ce.step);
        auto grid = table.spectrum(select_mrt(antennas));
        auto out = detail::optimize_spectrum(SchemeKind::ColocatedMrt, grid, cfg, ce_rng);
        out.active_aps = 1;
        return out;
    }

    template <class Rng, class CeRng>
    SchemeOutcome colocated_baseline(Rng &rng, const ScenarioConfig &cfg, CeRng ce_rng)
    {
        ScenarioConfig one = cfg;
        one.n_aps = 1;
        one.n_sel = 1;
        auto site = generate_scenario(rng, one).front();
        return colocated_at(site, cfg, ce_rng);
    }

    struct TrialResult
    {
        std::vector<AccessPoint> aps;
        std::uint64_t digest = 0;
        std::vector<SchemeOutcome> outcomes; // in cfg.schemes order
    };

    // Root stream of one trial: depends on (seed, axis value, trial index) only
    inline CounterRng trial_stream(std::uint64_t seed, double axis_value, std::uint64_t trial)
    {
        return CounterRng(seed).derive(axis_value).derive(trial);
    }

    // Every configured scheme on one freshly drawn scenario. Selection schemes share one CE stream.
    inline TrialResult run_full_trial(const ScenarioConfig &cfg, CounterRng stream)
    {
        auto scen_rng = stream.derive(std::uint64_t{0});
        const auto ce_rng = stream.derive(std::uint64_t{1});
        auto site_rng = stream.derive(std::uint64_t{2});

        TrialResult tr;
        tr.aps = generate_scenario(scen_rng, cfg);
        tr.digest = scenario_digest(tr.aps);
        LinkTable table(tr.aps, cfg.link_budget(), cfg.band(), cfg.ce.step);
        for (auto s : cfg.schemes)
        {
            if (s == SchemeKind::EqualMrt)
                tr.outcomes.push_back(equal_allocation_baseline(table, cfg));
            else if (s == SchemeKind::ColocatedMrt)
                tr.outcomes.push_back(colocated_baseline(site_rng, cfg, ce_rng));
            else
                tr.outcomes.push_back(run_trial(table, s, cfg, ce_rng));
        }
        return tr;
    }

    enum class SweepAxis
    {
        NumAps,
        TotalBandwidth
    };

    inline std::string_view to_string(SweepAxis a) { return a == SweepAxis::NumAps ? "n_aps" : "b_total_hz"; }

    inline ScenarioConfig apply_axis(ScenarioConfig cfg, SweepAxis axis, double value)
    {
        if (axis == SweepAxis::NumAps)
        {
            if (!(value >= 1.0) || value != std::floor(value))
                throw std::invalid_argument("n_aps axis value must be a positive integer");
            cfg.n_aps = static_cast<int>(value);
        }
        else
            cfg.b_total = value;
        cfg.validate();
        return cfg;
    }

    struct SchemeStats
    {
        SchemeKind scheme = SchemeKind::Mrt;
        double mean_rate = 0.0;
        double stderr_rate = 0.0;
        double mean_integrated = 0.0;
        double stderr_integrated = 0.0;
        double mean_active = 0.0;
        int trials = 0;
    };

    struct SweepPoint
    {
        double axis_value = 0.0;
        std::vector<SchemeStats> stats;   // in cfg.schemes order
        std::vector<TrialResult> trials;  // in trial order
    };

    struct SweepResult
    {
        SweepAxis axis = SweepAxis::NumAps;
        std::vector<SweepPoint> points;
    };

    namespace detail
    {
        inline std::pair<double, double> mean_stderr(std::span<const double> x)
        {
            const double n = static_cast<double>(x.size());
            double mean = 0.0;
            for (double v : x)
                mean += v;
            mean /= n;
            if (x.size() < 2)
                return {mean, 0.0};
            double ss = 0.0;
            for (double v : x)
                ss += (v - mean) * (v - mean);
            return {mean, std::sqrt(ss / (n - 1.0) / n)};
        }
    } // namespace detail

    inline SweepPoint aggregate(double axis_value, const ScenarioConfig &cfg, std::vector<TrialResult> trials)
    {
        SweepPoint pt;
        pt.axis_value = axis_value;
        for (std::size_t s = 0; s < cfg.schemes.size(); ++s)
        {
            std::vector<double> r, ir;
            double active = 0.0;
            for (const auto &t : trials)
            {
                r.push_back(t.outcomes[s].plan_rate);
                ir.push_back(t.outcomes[s].integrated_rate);
                active += static_cast<double>(t.outcomes[s].active_aps);
            }
            SchemeStats st;
            st.scheme = cfg.schemes[s];
            // Equal allocation ignores coherence, so its headline rate is the integrated one
            if (st.scheme == SchemeKind::EqualMrt)
                r = ir;
            std::tie(st.mean_rate, st.stderr_rate) = detail::mean_stderr(r);
            std::tie(st.mean_integrated, st.stderr_integrated) = detail::mean_stderr(ir);
            st.mean_active = active / static_cast<double>(trials.size());
            st.trials = static_cast<int>(trials.size());
            pt.stats.push_back(st);
        }
        pt.trials = std::move(trials);
        return pt;
    }

    // All trials of one axis value. Results are identical for any thread count.
    inline SweepPoint monte_carlo_point(const ScenarioConfig &base, SweepAxis axis, double value, unsigned threads = 1)
    {
        auto cfg = apply_axis(base, axis, value);
        std::vector<TrialResult> trials(static_cast<std::size_t>(cfg.trials));
        parallel_for(trials.size(), threads, [&](std::size_t t)
                     { trials[t] = run_full_trial(cfg, trial_stream(cfg.seed, value, t)); });
        return aggregate(value, cfg, std::move(trials));
    }

    inline SweepResult monte_carlo(const ScenarioConfig &cfg, SweepAxis axis, std::span<const double> values,
                                   unsigned threads = 1)
    {
        SweepResult res;
        res.axis = axis;
        for (double v : values)
            res.points.push_back(monte_carlo_point(cfg, axis, v, threads));
        return res;
    }

} // namespace cfthz
