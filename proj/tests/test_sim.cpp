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

#include <catch2/catch_amalgamated.hpp>

#include "cfthz/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

using namespace cfthz;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    ScenarioConfig small_config(int n_aps = 6)
    {
        ScenarioConfig cfg;
        cfg.n_aps = n_aps;
        cfg.trials = 8;
        cfg.ce.n_sub = 8;
        cfg.ce.samples = 30;
        cfg.ce.elites = 3;
        cfg.ce.max_iter = 8;
        cfg.ce.step = 50.0e6;
        return cfg;
    }

    std::vector<AccessPoint> scenario(const ScenarioConfig &cfg, std::uint64_t trial)
    {
        auto rng = trial_stream(cfg.seed, cfg.n_aps, trial).derive(std::uint64_t{0});
        return generate_scenario(rng, cfg);
    }

    bool same_outcome(const SchemeOutcome &a, const SchemeOutcome &b)
    {
        if (a.plan.channels.size() != b.plan.channels.size())
            return false;
        for (std::size_t i = 0; i < a.plan.channels.size(); ++i)
            if (a.plan.channels[i].center != b.plan.channels[i].center ||
                a.plan.channels[i].width != b.plan.channels[i].width)
                return false;
        return a.plan_rate == b.plan_rate && a.integrated_rate == b.integrated_rate &&
               a.active_aps == b.active_aps && a.trace == b.trace;
    }

    bool same_trial(const TrialResult &a, const TrialResult &b)
    {
        if (a.digest != b.digest || a.outcomes.size() != b.outcomes.size())
            return false;
        for (std::size_t s = 0; s < a.outcomes.size(); ++s)
            if (!same_outcome(a.outcomes[s], b.outcomes[s]))
                return false;
        return true;
    }
} // namespace

TEST_CASE("scheme names round-trip")
{
    for (auto s : all_schemes)
        CHECK(parse_scheme(to_string(s)) == s);
    CHECK_FALSE(parse_scheme("mrt2").has_value());
}

TEST_CASE("ScenarioConfig validation")
{
    ScenarioConfig cfg;
    CHECK(cfg.is_valid().empty());
    CHECK(cfg.psd() == 1.0 / 16.0e9);

    auto bad = cfg;
    bad.d_min = 0.0;
    CHECK(bad.is_valid().rfind("d_min", 0) == 0);
    bad = cfg;
    bad.radius = 0.4;
    CHECK_FALSE(bad.is_valid().empty());
    bad = cfg;
    bad.f_upper = 90.0e9;
    CHECK_FALSE(bad.is_valid().empty());
    bad = cfg;
    bad.p_total = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("generate_scenario")
{
    ScenarioConfig cfg;
    cfg.n_aps = 100000;
    CounterRng rng(17);
    auto aps = generate_scenario(rng, cfg);
    double sum = 0.0;
    for (std::size_t n = 0; n < aps.size(); ++n)
    {
        const auto &ap = aps[n];
        REQUIRE(ap.id == static_cast<int>(n));
        REQUIRE(ap.distance >= cfg.d_min);
        REQUIRE(ap.distance <= cfg.radius);
        REQUIRE(ap.angle >= cfg.angle_guard);
        REQUIRE(ap.angle <= std::numbers::pi / 2.0 - cfg.angle_guard);
        sum += ap.distance;
    }
    CHECK_THAT(sum / static_cast<double>(aps.size()), WithinRel((cfg.d_min + cfg.radius) / 2.0, 0.01));

    ScenarioConfig small;
    auto a = scenario(small, 3), b = scenario(small, 3), c = scenario(small, 4);
    CHECK(scenario_digest(a) == scenario_digest(b));
    CHECK(scenario_digest(a) != scenario_digest(c));
}

TEST_CASE("LinkTable spectra")
{
    auto cfg = small_config(4);
    auto aps = scenario(cfg, 0);
    auto lb = cfg.link_budget();
    LinkTable table(aps, lb, cfg.band(), cfg.ce.step);
    for (auto scheme : {SchemeKind::Mrt, SchemeKind::BestNsel, SchemeKind::BestSingle, SchemeKind::Nearest})
    {
        auto mask = make_mask(scheme, aps, cfg, lb);
        auto grid = table.spectrum(mask);
        for (std::size_t k = 0; k < grid.size(); k += 97)
            CHECK_THAT(grid.rss(k), WithinRel(combined_rss(mask, aps, grid.freq(k), lb), 1e-12));
        // off-node queries fall back to the exact combination
        double f = grid.freq(10) + 0.3 * cfg.ce.step;
        CHECK(grid(f) == combined_rss(mask, aps, f, lb));
    }
}

TEST_CASE("run_trial")
{
    auto cfg = small_config();
    const CounterRng ce(5);

    SECTION("single AP: all schemes see the same spectrum")
    {
        auto one = small_config(1);
        auto aps = scenario(one, 2);
        auto ref = run_trial(std::span<const AccessPoint>(aps), SchemeKind::Mrt, one, ce);
        for (auto s : {SchemeKind::BestNsel, SchemeKind::BestSingle, SchemeKind::Nearest})
        {
            auto o = run_trial(std::span<const AccessPoint>(aps), s, one, ce);
            CHECK(o.plan_rate == ref.plan_rate);
            CHECK(o.integrated_rate == ref.integrated_rate);
        }
    }

    SECTION("active AP counts")
    {
        auto aps = scenario(cfg, 1);
        auto mrt = run_trial(std::span<const AccessPoint>(aps), SchemeKind::Mrt, cfg, ce);
        auto nn = run_trial(std::span<const AccessPoint>(aps), SchemeKind::Nearest, cfg, ce);
        auto b2 = run_trial(std::span<const AccessPoint>(aps), SchemeKind::BestNsel, cfg, ce);
        auto b1 = run_trial(std::span<const AccessPoint>(aps), SchemeKind::BestSingle, cfg, ce);
        CHECK(mrt.active_aps <= aps.size());
        CHECK(mrt.active_aps >= b2.active_aps);
        CHECK(nn.active_aps == 1);
        CHECK(b2.active_aps <= static_cast<std::size_t>(cfg.n_sel));
        CHECK(b1.active_aps <= static_cast<std::size_t>(cfg.ce.n_sub));
        CHECK(b1.active_aps >= 1);
        for (const auto *o : {&mrt, &nn, &b2, &b1})
        {
            CHECK(o->plan_rate >= 0.0);
            CHECK(o->integrated_rate >= 0.0);
            CHECK(o->trace.size() == static_cast<std::size_t>(cfg.ce.max_iter));
        }
    }

    SECTION("baselines are rejected")
    {
        auto aps = scenario(cfg, 1);
        CHECK_THROWS_AS(run_trial(std::span<const AccessPoint>(aps), SchemeKind::EqualMrt, cfg, ce),
                        std::invalid_argument);
        CHECK_THROWS_AS(run_trial(std::span<const AccessPoint>(aps), SchemeKind::ColocatedMrt, cfg, ce),
                        std::invalid_argument);
    }

    SECTION("dead scenario")
    {
        auto far = cfg;
        far.gamma_th = 1.0;
        auto aps = scenario(far, 1);
        auto o = run_trial(std::span<const AccessPoint>(aps), SchemeKind::Mrt, far, ce);
        CHECK(o.dead);
        CHECK(o.plan_rate == 0.0);
        CHECK(o.integrated_rate == 0.0);
    }
}

TEST_CASE("MRT dominates best-N_sel on paired scenarios and CE streams")
{
    auto cfg = small_config(8);
    double mrt_sum = 0.0, sel_sum = 0.0;
    int wins = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t)
    {
        auto stream = trial_stream(cfg.seed, cfg.n_aps, static_cast<std::uint64_t>(t));
        auto ce = stream.derive(std::uint64_t{1});
        auto aps = scenario(cfg, static_cast<std::uint64_t>(t));
        LinkTable table(aps, cfg.link_budget(), cfg.band(), cfg.ce.step);
        auto sel = run_trial(table, SchemeKind::BestNsel, cfg, ce);
        mrt_sum += run_trial(table, SchemeKind::Mrt, cfg, ce).plan_rate;
        sel_sum += sel.plan_rate;

        // the selected plan carried over to the MRT spectrum never loses rate
        auto mrt_grid = table.spectrum(select_mrt(aps));
        wins += integrated_rate(sel.plan, mrt_grid, cfg.noise_psd, cfg.ce.step) >= sel.integrated_rate;
    }
    CHECK(mrt_sum >= sel_sum);
    CHECK(wins == trials);
}

TEST_CASE("equal allocation baseline")
{
    ScenarioConfig cfg;
    auto plan = equal_plan(cfg);
    REQUIRE(plan.channels.size() == 40);
    CHECK_THAT(plan.channels[0].width, WithinRel(0.4e9, 1e-12));
    CHECK_THAT(plan.channels[1].center - plan.channels[0].center, WithinRel(5.0e9, 1e-12));
    CHECK(validate_plan(plan, cfg.band(), 1e9, [](double) { return 1.0; }).empty());

    auto over = cfg;
    over.b_total = 250.0e9;
    CHECK_THROWS_AS(equal_plan(over), std::invalid_argument);

    SECTION("flat spectrum matches the CE optimum")
    {
        const double s = 3.0e-20;
        auto flat = [s](double) { return s; };
        double eq = integrated_rate(plan, flat, cfg.noise_psd, cfg.ce.step);
        CounterRng rng(8);
        CEConfig ce = cfg.ce;
        ce.max_iter = 5;
        auto res = ce_optimize(flat, cfg.problem(), ce, rng);
        CHECK_THAT(eq, WithinRel(res.final_plan.objective, 0.05));
    }

    SECTION("zero RSS gives zero")
    {
        auto dead = small_config();
        dead.gamma_th = 1.0;
        auto aps = scenario(dead, 0);
        auto o = equal_allocation_baseline(std::span<const AccessPoint>(aps), dead);
        CHECK(o.dead);
        CHECK(o.integrated_rate == 0.0);
        CHECK(o.plan_rate == 0.0);
    }

    SECTION("reports both metrics")
    {
        auto small = small_config();
        auto aps = scenario(small, 0);
        auto o = equal_allocation_baseline(std::span<const AccessPoint>(aps), small);
        CHECK(o.integrated_rate > 0.0);
        CHECK(o.plan_rate > 0.0);
        CHECK(o.active_aps == aps.size());
    }
}

TEST_CASE("co-located baseline")
{
    auto cfg = small_config(5);
    const CounterRng ce(11);

    SECTION("identical links combine to N times one link")
    {
        AccessPoint site{0, 6.0, 0.8};
        std::vector<AccessPoint> copies(5, site);
        for (int n = 0; n < 5; ++n)
            copies[static_cast<std::size_t>(n)].id = n;
        auto lb = cfg.link_budget();
        LinkTable table(copies, lb, cfg.band(), cfg.ce.step);
        auto grid = table.spectrum(select_mrt(copies));
        for (std::size_t k = 0; k < grid.size(); k += 101)
        {
            double g0 = lb.rss(grid.freq(k), site);
            if (g0 >= lb.gamma_th)
                CHECK_THAT(grid.rss(k), WithinRel(5.0 * g0, 1e-12));
        }
        CHECK(colocated_at(site, cfg, ce).active_aps == 1);
    }

    SECTION("a co-located site at the nearest AP beats nearest-neighbour selection")
    {
        int ok = 0;
        const int trials = 20;
        for (int t = 0; t < trials; ++t)
        {
            auto aps = scenario(cfg, static_cast<std::uint64_t>(t));
            auto nearest = *std::min_element(aps.begin(), aps.end(), [](const auto &a, const auto &b)
                                             { return a.distance < b.distance; });
            double co = colocated_at(nearest, cfg, ce).plan_rate;
            double nn = run_trial(std::span<const AccessPoint>(aps), SchemeKind::Nearest, cfg, ce).plan_rate;
            ok += co >= nn;
        }
        CHECK(ok == trials);
    }

    SECTION("site draw is deterministic")
    {
        CounterRng a(3), b(3);
        CHECK(colocated_baseline(a, cfg, ce).plan_rate == colocated_baseline(b, cfg, ce).plan_rate);
    }
}

TEST_CASE("run_full_trial")
{
    auto cfg = small_config();
    auto tr = run_full_trial(cfg, trial_stream(cfg.seed, cfg.n_aps, 0));
    REQUIRE(tr.outcomes.size() == cfg.schemes.size());
    for (std::size_t s = 0; s < cfg.schemes.size(); ++s)
        CHECK(tr.outcomes[s].scheme == cfg.schemes[s]);
    CHECK(tr.digest == scenario_digest(scenario(cfg, 0)));
    CHECK(same_trial(tr, run_full_trial(cfg, trial_stream(cfg.seed, cfg.n_aps, 0))));
}

TEST_CASE("monte_carlo")
{
    auto cfg = small_config();

    SECTION("one trial: means equal the trial")
    {
        cfg.trials = 1;
        auto pt = monte_carlo_point(cfg, SweepAxis::NumAps, 6);
        REQUIRE(pt.trials.size() == 1);
        for (std::size_t s = 0; s < cfg.schemes.size(); ++s)
        {
            const auto &o = pt.trials[0].outcomes[s];
            double headline = cfg.schemes[s] == SchemeKind::EqualMrt ? o.integrated_rate : o.plan_rate;
            CHECK(pt.stats[s].mean_rate == headline);
            CHECK(pt.stats[s].mean_integrated == o.integrated_rate);
            CHECK(pt.stats[s].stderr_rate == 0.0);
            CHECK(pt.stats[s].trials == 1);
        }
    }

    SECTION("doubling trials keeps the first half")
    {
        cfg.trials = 4;
        auto a = monte_carlo_point(cfg, SweepAxis::NumAps, 6);
        cfg.trials = 8;
        auto b = monte_carlo_point(cfg, SweepAxis::NumAps, 6);
        for (std::size_t t = 0; t < 4; ++t)
            CHECK(same_trial(a.trials[t], b.trials[t]));
    }

    SECTION("thread count does not change results")
    {
        auto a = monte_carlo_point(cfg, SweepAxis::TotalBandwidth, 8.0e9, 1);
        auto b = monte_carlo_point(cfg, SweepAxis::TotalBandwidth, 8.0e9, 3);
        for (std::size_t t = 0; t < a.trials.size(); ++t)
            CHECK(same_trial(a.trials[t], b.trials[t]));
        for (std::size_t s = 0; s < a.stats.size(); ++s)
            CHECK(a.stats[s].mean_rate == b.stats[s].mean_rate);
    }

    SECTION("axis handling")
    {
        double values[] = {2, 3};
        cfg.trials = 1;
        auto res = monte_carlo(cfg, SweepAxis::NumAps, values);
        REQUIRE(res.points.size() == 2);
        CHECK(res.points[1].trials[0].aps.size() == 3);
        CHECK_THROWS_AS(apply_axis(cfg, SweepAxis::NumAps, 2.5), std::invalid_argument);
        CHECK_THROWS_AS(apply_axis(cfg, SweepAxis::TotalBandwidth, -1.0), std::invalid_argument);
        CHECK(apply_axis(cfg, SweepAxis::TotalBandwidth, 4e9).psd() == 1.0 / 4e9);
    }

    SECTION("standard error shrinks like one over root trials")
    {
        cfg.schemes = {SchemeKind::EqualMrt};
        cfg.trials = 50;
        auto a = monte_carlo_point(cfg, SweepAxis::NumAps, 6);
        cfg.trials = 200;
        auto b = monte_carlo_point(cfg, SweepAxis::NumAps, 6);
        double ratio = a.stats[0].stderr_rate / b.stats[0].stderr_rate;
        CHECK(ratio > 1.4);
        CHECK(ratio < 2.8);
    }
}
