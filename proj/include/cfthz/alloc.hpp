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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfthz
{
    struct Band
    {
        double lo = 0.0; // [Hz]
        double hi = 0.0; // [Hz]

        double span() const { return hi - lo; }
        bool contains(double f) const { return f >= lo && f <= hi; }
    };

    struct Subchannel
    {
        double center = 0.0; // [Hz]
        double width = 0.0;  // [Hz]

        double lo() const { return center - 0.5 * width; }
        double hi() const { return center + 0.5 * width; }
    };

    struct SubchannelPlan
    {
        std::vector<Subchannel> channels;
        double total_budget = 0.0; // [Hz]

        double total_width() const
        {
            double s = 0.0;
            for (const auto &ch : channels)
                s += ch.width;
            return s;
        }
    };

    // Edge-to-edge coherence test. A zero difference always passes, so a flat spectrum
    // stays coherent even for eps_db = 0.
    inline bool coherent(double db_left, double db_right, double eps_db)
    {
        double d = std::abs(db_left - db_right);
        return d < eps_db || d == 0.0;
    }

    // One-dimensional symmetric search for the widest subchannel around `center` whose edge RSS
    // values differ by less than eps_db. Widths are probed on {2*step, 4*step, ...}; the result
    // is the last width before the first violation. Zero RSS at an edge counts as a violation.
    template <class RssFn>
    double coherence_search(RssFn &&rss_fn, double center, double eps_db, Band band, double step,
                            double max_width = std::numeric_limits<double>::infinity())
    {
        if (!(step > 0.0))
            throw std::invalid_argument("coherence_search: step must be positive");
        if (!band.contains(center))
            throw std::invalid_argument("coherence_search: center outside band");
        if (!(rss_fn(center) > 0.0))
            return 0.0;

        const double slack = 1.0e-9 * step;
        double width = 0.0;
        for (std::int64_t k = 1;; ++k)
        {
            double half = static_cast<double>(k) * step;
            if (center - half < band.lo - slack || center + half > band.hi + slack || 2.0 * half > max_width + slack)
                break;
            double l = rss_fn(center - half), r = rss_fn(center + half);
            if (!(l > 0.0 && r > 0.0))
                break;
            if (!coherent(10.0 * std::log10(l), 10.0 * std::log10(r), eps_db))
                break;
            width = 2.0 * half;
        }
        return width;
    }

    namespace detail
    {
        // Greedy overlap resolution on closed intervals [lo, hi]. Intervals are visited in
        // descending priority (ties: lower index); each one is truncated at the edges of every
        // already-placed interval. When a winner sits strictly inside, the larger remaining
        // piece is kept (ties: left). Returns false for intervals that vanished.
        template <class T>
        std::vector<bool> resolve_intervals(std::vector<std::pair<T, T>> &iv, std::span<const double> priority)
        {
            const std::size_t n = iv.size();
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b)
                             { return priority[a] > priority[b]; });

            std::vector<bool> alive(n, false);
            std::vector<std::size_t> placed;
            for (std::size_t idx : order)
            {
                auto [a, b] = iv[idx];
                if (!(a < b))
                    continue;
                bool gone = false;
                for (std::size_t w : placed)
                {
                    auto [wa, wb] = iv[w];
                    if (wb <= a || wa >= b)
                        continue;
                    if (wa <= a && wb >= b)
                    {
                        gone = true;
                        break;
                    }
                    if (wa <= a)
                        a = wb;
                    else if (wb >= b)
                        b = wa;
                    else if (wa - a >= b - wb)
                        b = wa;
                    else
                        a = wb;
                }
                if (gone || !(a < b))
                    continue;
                iv[idx] = {a, b};
                alive[idx] = true;
                placed.push_back(idx);
            }
            return alive;
        }
    } // namespace detail

    // Makes subchannels pairwise disjoint; overlaps go to the subchannel with the larger RSS at
    // its center. Channel order (identity) is preserved, fully covered losers get width 0.
    template <class RssFn>
    std::vector<Subchannel> resolve_overlaps(std::span<const Subchannel> raw, RssFn &&rss_fn)
    {
        std::vector<std::pair<double, double>> iv;
        std::vector<double> prio;
        for (const auto &ch : raw)
        {
            iv.emplace_back(ch.lo(), ch.hi());
            prio.push_back(ch.width > 0.0 ? rss_fn(ch.center) : -1.0);
        }
        auto alive = detail::resolve_intervals(iv, prio);

        std::vector<Subchannel> out(raw.begin(), raw.end());
        for (std::size_t i = 0; i < out.size(); ++i)
        {
            if (!alive[i])
                out[i].width = 0.0;
            else if (iv[i].first != raw[i].lo() || iv[i].second != raw[i].hi())
                out[i] = {0.5 * (iv[i].first + iv[i].second), iv[i].second - iv[i].first};
        }
        return out;
    }

    // Total-bandwidth limit: shrink every width by B_total / sum(width) about its own center.
    // A positive quantum floors each scaled width to a multiple of it.
    inline SubchannelPlan enforce_budget(SubchannelPlan plan, double quantum = 0.0)
    {
        double total = plan.total_width();
        if (total <= plan.total_budget)
            return plan;
        double scale = plan.total_budget / total;
        for (auto &ch : plan.channels)
        {
            double w = ch.width * scale;
            if (quantum > 0.0)
                w = std::floor(w / quantum) * quantum;
            ch.width = w;
        }
        return plan;
    }

    enum class BudgetPolicy
    {
        GreedyByRss,  // fill the budget in descending center-RSS order
        Proportional  // shrink every width by the same factor
    };

    // Greedy variant: channels keep their widths in descending order of center RSS (ties: lower
    // index) until the budget runs out; the channel that crosses it is shrunk symmetrically and
    // the rest get width 0. A positive quantum floors the shrunk width to a multiple of it.
    template <class RssFn>
    SubchannelPlan enforce_budget_greedy(SubchannelPlan plan, RssFn &&rss_fn, double quantum = 0.0)
    {
        if (plan.total_width() <= plan.total_budget)
            return plan;
        std::vector<double> prio;
        for (const auto &ch : plan.channels)
            prio.push_back(rss_fn(ch.center));
        std::vector<std::size_t> order(plan.channels.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b)
                         { return prio[a] > prio[b]; });
        double remaining = plan.total_budget;
        for (std::size_t i : order)
        {
            auto &w = plan.channels[i].width;
            if (w > remaining)
                w = quantum > 0.0 ? std::floor(remaining / quantum) * quantum : remaining;
            remaining = std::max(0.0, remaining - w);
        }
        return plan;
    }

    // sum_i B_i log2(1 + rss(f_i) / noise)
    template <class RssFn>
    double plan_rate(const SubchannelPlan &plan, RssFn &&rss_fn, double noise_psd)
    {
        if (!(noise_psd > 0.0))
            throw std::invalid_argument("plan_rate: noise PSD must be positive");
        double rate = 0.0;
        for (const auto &ch : plan.channels)
            if (ch.width > 0.0)
                rate += ch.width * std::log2(1.0 + rss_fn(ch.center) / noise_psd);
        return rate;
    }

    // Trapezoidal integral of log2(1 + rss(f) / noise) over every subchannel, sample spacing <= step
    template <class RssFn>
    double integrated_rate(const SubchannelPlan &plan, RssFn &&rss_fn, double noise_psd, double step)
    {
        if (!(noise_psd > 0.0))
            throw std::invalid_argument("integrated_rate: noise PSD must be positive");
        if (!(step > 0.0))
            throw std::invalid_argument("integrated_rate: step must be positive");
        double rate = 0.0;
        for (const auto &ch : plan.channels)
        {
            if (!(ch.width > 0.0))
                continue;
            auto n = static_cast<std::int64_t>(std::ceil(ch.width / step - 1.0e-9));
            n = std::max<std::int64_t>(n, 1);
            double h = ch.width / static_cast<double>(n), lo = ch.lo();
            double acc = 0.0;
            for (std::int64_t k = 0; k <= n; ++k)
            {
                double f = k == n ? ch.hi() : lo + static_cast<double>(k) * h;
                double v = std::log2(1.0 + rss_fn(f) / noise_psd);
                acc += (k == 0 || k == n) ? 0.5 * v : v;
            }
            rate += acc * h;
        }
        return rate;
    }

    // RSS tabulated on the uniform grid lo + k*step. Queries that land on a node (to within
    // 1e-6 step) are served from the table, anything else falls through to the exact function.
    class SpectrumGrid
    {
    public:
        using Fn = std::function<double(double)>;

        SpectrumGrid(Band band, double step, Fn fn) : band_(band), step_(step), fn_(std::move(fn))
        {
            check();
            std::vector<double> v(nodes_for(band, step));
            for (std::size_t k = 0; k < v.size(); ++k)
                v[k] = fn_(freq(k));
            set_values(std::move(v));
        }

        // Takes precomputed node values; `fn` must agree with them at the nodes
        SpectrumGrid(Band band, double step, std::vector<double> values, Fn fn)
            : band_(band), step_(step), fn_(std::move(fn))
        {
            check();
            if (values.size() != nodes_for(band, step))
                throw std::invalid_argument("SpectrumGrid: node count does not match band and step");
            set_values(std::move(values));
        }

        static std::size_t nodes_for(Band band, double step)
        {
            return static_cast<std::size_t>(std::floor(band.span() / step + 1.0e-9)) + 1;
        }

        std::size_t size() const { return rss_.size(); }
        double step() const { return step_; }
        const Band &band() const { return band_; }
        double freq(std::size_t k) const { return band_.lo + static_cast<double>(k) * step_; }
        double rss(std::size_t k) const { return rss_[k]; }
        double db(std::size_t k) const { return db_[k]; }
        std::span<const double> values() const { return rss_; }

        std::size_t nearest_node(double f) const
        {
            double x = std::round((f - band_.lo) / step_);
            if (x <= 0.0)
                return 0;
            return std::min(static_cast<std::size_t>(x), size() - 1);
        }

        double operator()(double f) const
        {
            double x = (f - band_.lo) / step_;
            double r = std::round(x);
            if (std::abs(x - r) < 1.0e-6 && r >= 0.0 && r < static_cast<double>(size()))
                return rss_[static_cast<std::size_t>(r)];
            return fn_(f);
        }

    private:
        void check() const
        {
            if (!(step_ > 0.0))
                throw std::invalid_argument("SpectrumGrid: step must be positive");
            if (!(band_.hi > band_.lo))
                throw std::invalid_argument("SpectrumGrid: empty band");
        }

        void set_values(std::vector<double> v)
        {
            rss_ = std::move(v);
            db_.resize(rss_.size());
            for (std::size_t k = 0; k < rss_.size(); ++k)
                db_[k] = rss_[k] > 0.0 ? 10.0 * std::log10(rss_[k]) : -std::numeric_limits<double>::infinity();
        }

        Band band_;
        double step_;
        Fn fn_;
        std::vector<double> rss_, db_;
    };

    // Node-space coherence search: half-width in steps around node c, at most max_half
    inline std::int64_t coherence_half_steps(const SpectrumGrid &grid, std::int64_t c, double eps_db,
                                             std::int64_t max_half)
    {
        if (!(grid.rss(static_cast<std::size_t>(c)) > 0.0))
            return 0;
        const auto last = static_cast<std::int64_t>(grid.size()) - 1;
        std::int64_t k = 0;
        while (k < max_half && c - (k + 1) >= 0 && c + (k + 1) <= last)
        {
            double l = grid.db(static_cast<std::size_t>(c - k - 1));
            double r = grid.db(static_cast<std::size_t>(c + k + 1));
            if (std::isinf(l) || std::isinf(r) || !coherent(l, r, eps_db))
                break;
            ++k;
        }
        return k;
    }

    // Constants of one allocation instance
    struct AllocProblem
    {
        Band band;
        double eps_db = 0.5;         // coherence tolerance [dB]
        double b_total = 16.0e9;     // [Hz]
        double noise_psd = 1.0e-20;  // [W/Hz]
        BudgetPolicy budget = BudgetPolicy::GreedyByRss;
    };

    struct BuiltPlan
    {
        SubchannelPlan plan;
        std::vector<double> center_rss; // [W/Hz] per channel
        double objective = 0.0;         // plan_rate [bit/s]
    };

    // Turns a vector of candidate centers into a feasible plan: snap to grid, coherence
    // search (capped at b_total), overlap resolution, re-search inside truncated intervals,
    // then the budget policy. All edges stay on grid nodes, and every width kept is one the
    // coherence search accepted on its way out, so shrinking never breaks coherence.
    inline BuiltPlan build_plan(std::span<const double> centers, const SpectrumGrid &grid, const AllocProblem &prob)
    {
        const std::size_t n = centers.size();
        const double step = grid.step();
        const auto max_half = static_cast<std::int64_t>(std::floor(prob.b_total / (2.0 * step) + 1.0e-9));

        std::vector<std::int64_t> c(n), half(n);
        std::vector<std::pair<std::int64_t, std::int64_t>> iv(n);
        std::vector<double> prio(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            c[i] = static_cast<std::int64_t>(grid.nearest_node(centers[i]));
            half[i] = coherence_half_steps(grid, c[i], prob.eps_db, max_half);
            iv[i] = {c[i] - half[i], c[i] + half[i]};
            prio[i] = half[i] > 0 ? grid.rss(static_cast<std::size_t>(c[i])) : -1.0;
        }

        auto alive = detail::resolve_intervals(iv, prio);
        for (std::size_t i = 0; i < n; ++i)
        {
            if (!alive[i])
            {
                half[i] = 0;
                continue;
            }
            auto [a, b] = iv[i];
            if (a == c[i] - half[i] && b == c[i] + half[i])
                continue;
            c[i] = a + (b - a) / 2;
            half[i] = coherence_half_steps(grid, c[i], prob.eps_db, std::min(c[i] - a, b - c[i]));
        }

        if (prob.budget == BudgetPolicy::Proportional)
        {
            std::int64_t total = std::accumulate(half.begin(), half.end(), std::int64_t{0});
            if (static_cast<double>(2 * total) * step > prob.b_total)
            {
                double scale = prob.b_total / (static_cast<double>(2 * total) * step);
                for (auto &h : half)
                    h = static_cast<std::int64_t>(std::floor(static_cast<double>(h) * scale));
            }
        }
        else
        {
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b)
                             { return grid.rss(static_cast<std::size_t>(c[a])) > grid.rss(static_cast<std::size_t>(c[b])); });
            std::int64_t remaining = max_half;
            for (std::size_t i : order)
            {
                half[i] = std::min(half[i], remaining);
                remaining -= half[i];
            }
        }

        BuiltPlan out;
        out.plan.total_budget = prob.b_total;
        out.plan.channels.resize(n);
        out.center_rss.resize(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            out.plan.channels[i] = {grid.freq(static_cast<std::size_t>(c[i])), 2.0 * static_cast<double>(half[i]) * step};
            out.center_rss[i] = grid.rss(static_cast<std::size_t>(c[i]));
            if (half[i] > 0)
                out.objective += out.plan.channels[i].width * std::log2(1.0 + out.center_rss[i] / prob.noise_psd);
        }
        return out;
    }

    // Checks disjointness, band containment, the total budget and edge coherence.
    // Returns one message per violation.
    template <class RssFn>
    std::vector<std::string> validate_plan(const SubchannelPlan &plan, Band band, double eps_db, RssFn &&rss_fn,
                                           double tol = 1.0e-3)
    {
        std::vector<std::string> bad;
        const auto &ch = plan.channels;
        for (std::size_t i = 0; i < ch.size(); ++i)
        {
            const std::string tag = "channel " + std::to_string(i) + ": ";
            if (!(ch[i].width >= 0.0))
                bad.push_back(tag + "negative width");
            if (!(ch[i].width > 0.0))
                continue;
            if (ch[i].lo() < band.lo - tol || ch[i].hi() > band.hi + tol)
                bad.push_back(tag + "outside band");
            double l = rss_fn(ch[i].lo()), r = rss_fn(ch[i].hi());
            if (l > 0.0 && r > 0.0 && !coherent(10.0 * std::log10(l), 10.0 * std::log10(r), eps_db))
                bad.push_back(tag + "edge RSS difference exceeds eps");
            for (std::size_t j = i + 1; j < ch.size(); ++j)
                if (ch[j].width > 0.0 && std::min(ch[i].hi(), ch[j].hi()) - std::max(ch[i].lo(), ch[j].lo()) > tol)
                    bad.push_back(tag + "overlaps channel " + std::to_string(j));
        }
        if (plan.total_width() > plan.total_budget * (1.0 + 1.0e-12) + tol)
            bad.push_back("total width exceeds budget");
        return bad;
    }

    // ---------------------------------------------------------------------------------------
    // Cross-entropy subchannel allocation

    struct CEConfig
    {
        int n_sub = 40;            // I, number of subchannels
        int samples = 100;         // m
        int elites = 10;           // m_elite
        double smooth_mean = 0.8;  // alpha
        double smooth_var = 0.7;   // beta
        double smooth_power = 5.0; // q
        int max_iter = 30;         // t_max
        double step = 10.0e6;      // bandwidth-search grid [Hz]
        BudgetPolicy budget = BudgetPolicy::GreedyByRss;

        std::string is_valid() const
        {
            if (n_sub < 1)
                return "n_sub must be >= 1";
            if (samples < 1)
                return "samples must be >= 1";
            if (elites < 1 || elites > samples)
                return "elites must be in [1, samples]";
            if (!(smooth_mean > 0.0 && smooth_mean <= 1.0))
                return "smooth_mean must be in (0, 1]";
            if (!(smooth_var > 0.0 && smooth_var <= 1.0))
                return "smooth_var must be in (0, 1]";
            if (!(smooth_power > 0.0))
                return "smooth_power must be positive";
            if (max_iter < 0)
                return "max_iter must be >= 0";
            if (!(step > 0.0))
                return "step must be positive";
            return {};
        }
    };

    struct CEState
    {
        std::vector<double> means; // [Hz]
        std::vector<double> vars;  // [Hz^2]
        int iter = 0;
        SubchannelPlan incumbent;
        double incumbent_objective = -std::numeric_limits<double>::infinity();
        std::vector<double> trace; // incumbent objective after each iteration
    };

    // beta_t = beta - beta (1 - 1/(t+1))^q
    inline double smoothing_beta(double beta, double q, int t)
    {
        return beta - beta * std::pow(1.0 - 1.0 / (static_cast<double>(t) + 1.0), q);
    }

    inline CEState ce_init(const CEConfig &cfg, Band band)
    {
        if (auto err = cfg.is_valid(); !err.empty())
            throw std::invalid_argument("ce_init: " + err);
        if (!(band.hi > band.lo))
            throw std::invalid_argument("ce_init: f_upper must exceed f_co");
        const double I = cfg.n_sub, span = band.span();
        CEState s;
        s.means.resize(static_cast<std::size_t>(cfg.n_sub));
        s.vars.assign(static_cast<std::size_t>(cfg.n_sub), 16.0 * span * span / (I * I));
        for (int i = 1; i <= cfg.n_sub; ++i)
            s.means[static_cast<std::size_t>(i - 1)] = band.lo + (i - 0.5) * span / I;
        return s;
    }

    // Draws `m` joint samples, row-major (row s = one candidate center per subchannel).
    // Out-of-band draws are retried up to 50 times, then clamped; values are snapped to grid nodes.
    template <class Rng>
    std::vector<double> ce_sample(const CEState &state, const SpectrumGrid &grid, Band band, std::size_t m, Rng &rng)
    {
        const std::size_t I = state.means.size();
        std::vector<double> samples(m * I);
        for (std::size_t s = 0; s < m; ++s)
            for (std::size_t i = 0; i < I; ++i)
            {
                std::normal_distribution<double> dist(state.means[i], std::sqrt(state.vars[i]));
                double x = dist(rng);
                for (int r = 0; r < 50 && !band.contains(x); ++r)
                    x = dist(rng);
                x = std::clamp(x, band.lo, band.hi);
                samples[s * I + i] = grid.freq(grid.nearest_node(x));
            }
        return samples;
    }

    // Smoothed maximum-likelihood refit of the per-subchannel Gaussians to the elite rows
    // (the `elites` best objectives; ties keep sample order). Advances the iteration counter.
    inline void ce_update(CEState &state, std::span<const double> samples, std::span<const double> objectives,
                          const CEConfig &cfg)
    {
        const std::size_t I = state.means.size(), m = objectives.size();
        const auto me = static_cast<std::size_t>(cfg.elites);
        if (samples.size() != m * I || me > m || me == 0)
            throw std::invalid_argument("ce_update: sample matrix does not match the configuration");

        std::vector<std::size_t> order(m);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b)
                         { return objectives[a] > objectives[b]; });

        const double beta_t = smoothing_beta(cfg.smooth_var, cfg.smooth_power, state.iter);
        const double floor_var = cfg.step * cfg.step;
        for (std::size_t i = 0; i < I; ++i)
        {
            double mu = 0.0;
            for (std::size_t e = 0; e < me; ++e)
                mu += samples[order[e] * I + i];
            mu /= static_cast<double>(me);
            double var = 0.0;
            for (std::size_t e = 0; e < me; ++e)
            {
                double d = samples[order[e] * I + i] - mu;
                var += d * d;
            }
            var /= static_cast<double>(me);

            state.means[i] = cfg.smooth_mean * mu + (1.0 - cfg.smooth_mean) * state.means[i];
            state.vars[i] = std::max(beta_t * var + (1.0 - beta_t) * state.vars[i], floor_var);
        }
        ++state.iter;
    }

    // One CE iteration: sample, build and score plans, track the incumbent, refit.
    template <class Rng>
    void ce_iterate(CEState &state, const SpectrumGrid &grid, const AllocProblem &prob, const CEConfig &cfg, Rng &rng)
    {
        if (state.iter >= cfg.max_iter)
            throw std::logic_error("ce_iterate: iteration budget exhausted");
        const std::size_t I = state.means.size(), m = static_cast<std::size_t>(cfg.samples);
        auto samples = ce_sample(state, grid, prob.band, m, rng);

        std::vector<double> objectives(m);
        for (std::size_t s = 0; s < m; ++s)
        {
            auto built = build_plan(std::span<const double>(samples).subspan(s * I, I), grid, prob);
            objectives[s] = built.objective;
            if (objectives[s] > state.incumbent_objective)
            {
                state.incumbent_objective = built.objective;
                state.incumbent = std::move(built.plan);
            }
        }
        ce_update(state, samples, objectives, cfg);
        state.trace.push_back(state.incumbent_objective);
    }

    struct CEResult
    {
        BuiltPlan final_plan;             // built from the final means
        SubchannelPlan incumbent;         // best sampled plan
        double incumbent_objective = 0.0;
        std::vector<double> trace;        // best-ever objective per iteration
        CEState state;
    };

    template <class Rng>
    CEResult ce_optimize(const SpectrumGrid &grid, const AllocProblem &prob, const CEConfig &cfg, Rng &rng)
    {
        if (std::abs(grid.step() - cfg.step) > 1.0e-9 * cfg.step)
            throw std::invalid_argument("ce_optimize: grid step differs from CE step");
        CEResult res;
        res.state = ce_init(cfg, prob.band);
        while (res.state.iter < cfg.max_iter)
            ce_iterate(res.state, grid, prob, cfg, rng);

        res.final_plan = build_plan(res.state.means, grid, prob);
        res.trace = res.state.trace;
        if (res.state.iter == 0)
        {
            res.incumbent = res.final_plan.plan;
            res.incumbent_objective = res.final_plan.objective;
        }
        else
        {
            res.incumbent = res.state.incumbent;
            res.incumbent_objective = res.state.incumbent_objective;
        }
        return res;
    }

    // Convenience overload that tabulates rss_fn on the CE grid first
    template <class RssFn, class Rng>
    CEResult ce_optimize(RssFn rss_fn, const AllocProblem &prob, const CEConfig &cfg, Rng &rng)
    {
        SpectrumGrid grid(prob.band, cfg.step, SpectrumGrid::Fn(std::move(rss_fn)));
        return ce_optimize(grid, prob, cfg, rng);
    }

} // namespace cfthz
