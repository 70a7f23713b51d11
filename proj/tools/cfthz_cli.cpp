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

#include "cfthz/cfthz.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace
{
    using namespace cfthz;

    struct Common
    {
        std::string config;
        std::optional<std::uint64_t> seed;
        std::optional<int> trials;
        unsigned threads = 1;
    };

    ScenarioConfig resolve(const Common &c)
    {
        ScenarioConfig cfg = c.config.empty() ? ScenarioConfig{} : load_config(c.config);
        if (c.seed)
            cfg.seed = *c.seed;
        if (c.trials)
            cfg.trials = *c.trials;
        cfg.validate();
        return cfg;
    }

    std::ofstream open_out(const std::string &path)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write " + path);
        return out;
    }

    std::string utc_now()
    {
        auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[32];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }

    void write_manifest(const std::string &path, const ScenarioConfig &cfg, const std::vector<std::string> &outputs,
                        const nlohmann::json &extra = {})
    {
        nlohmann::json m;
        m["config_digest"] = hex64(config_digest(cfg));
        m["seed"] = cfg.seed;
        m["tool_version"] = cfthz::version;
        m["timestamp"] = utc_now();
        m["outputs"] = outputs;
        m["config"] = config_to_json(cfg);
        if (!extra.is_null())
            m.update(extra);
        open_out(path) << m.dump(2) << '\n';
    }

    SweepAxis parse_axis(const std::string &s)
    {
        if (s == "n_aps" || s == "N" || s == "n")
            return SweepAxis::NumAps;
        if (s == "b_total_hz" || s == "b_total" || s == "B_total" || s == "bandwidth")
            return SweepAxis::TotalBandwidth;
        throw std::invalid_argument("unknown axis '" + s + "' (expected n_aps or b_total_hz)");
    }

    int cmd_simulate(const Common &c, const std::string &axis_name, const std::vector<double> &values,
                     const std::string &out_path)
    {
        auto cfg = resolve(c);
        auto axis = parse_axis(axis_name);

        auto csv = open_out(out_path);
        csv << sweep_csv_header(axis);
        std::vector<double> failed;
        for (double v : values)
        {
            try
            {
                write_sweep_rows(csv, monte_carlo_point(cfg, axis, v, c.threads));
                csv.flush();
            }
            catch (const std::exception &e)
            {
                std::cerr << "axis value " << fmt_num(v) << " failed: " << e.what() << '\n';
                failed.push_back(v);
            }
        }
        csv.close();

        nlohmann::json extra;
        extra["axis"] = std::string(to_string(axis));
        extra["values"] = values;
        extra["failed_values"] = failed;
        write_manifest(out_path + ".manifest.json", cfg, {out_path}, extra);

        if (!failed.empty())
        {
            std::cerr << failed.size() << " of " << values.size() << " axis values failed:";
            for (double v : failed)
                std::cerr << ' ' << fmt_num(v);
            std::cerr << '\n';
            return 1;
        }
        return 0;
    }

    int cmd_gain(const Common &c, const std::vector<double> &theta_deg, double f_min, double f_max, int f_count,
                 const std::string &out_path)
    {
        auto cfg = resolve(c);
        if (f_count < 1)
            throw std::invalid_argument("--f-count must be >= 1");
        if (f_count > 1 && !(f_max > f_min))
            throw std::invalid_argument("--f-max-hz must exceed --f-min-hz");

        std::vector<GainRow> rows;
        std::size_t skipped = 0;
        for (double deg : theta_deg)
        {
            double th = deg * std::numbers::pi / 180.0;
            for (int k = 0; k < f_count; ++k)
            {
                double f = f_count == 1 ? f_min : f_min + (f_max - f_min) * k / (f_count - 1);
                if (f < cfg.antenna.f_co)
                {
                    ++skipped;
                    continue;
                }
                rows.push_back({th, f, antenna_gain(f, th, cfg.antenna, cfg.consts)});
            }
        }
        if (skipped > 0)
            std::cerr << "warning: skipped " << skipped << " below-cutoff frequencies\n";
        auto out = open_out(out_path);
        write_gain_csv(out, rows);
        return 0;
    }

    // Scenario rows: "distance_m,angle_rad" (or angle_deg if the header says so); '#' comments
    std::vector<AccessPoint> read_scenario(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot read scenario file " + path);
        std::vector<AccessPoint> aps;
        bool degrees = false, header_seen = false;
        std::string line;
        for (int row = 1; std::getline(in, line); ++row)
        {
            auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#')
                continue;
            if (!header_seen && !(std::isdigit(static_cast<unsigned char>(line[first])) || line[first] == '.' || line[first] == '+'))
            {
                header_seen = true;
                degrees = line.find("angle_deg") != std::string::npos;
                continue;
            }
            header_seen = true;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ss(line);
            double d = 0.0, a = 0.0;
            std::string rest;
            if (!(ss >> d >> a) || (ss >> rest))
                throw std::runtime_error(path + ": row " + std::to_string(row) + ": expected two numbers");
            if (degrees)
                a *= std::numbers::pi / 180.0;
            if (!(d > 0.0) || !(a > 0.0 && a < std::numbers::pi / 2.0))
                throw std::runtime_error(path + ": row " + std::to_string(row) +
                                         ": need distance > 0 and 0 < angle < pi/2");
            aps.push_back({static_cast<int>(aps.size()), d, a});
        }
        if (aps.empty())
            throw std::runtime_error(path + ": no access points");
        return aps;
    }

    int cmd_allocate(const Common &c, const std::string &scenario, const std::string &scheme_name,
                     const std::string &out_prefix)
    {
        auto cfg = resolve(c);
        auto aps = read_scenario(scenario);
        cfg.n_aps = static_cast<int>(aps.size());
        cfg.n_sel = std::min(cfg.n_sel, cfg.n_aps);
        cfg.validate();
        auto scheme = parse_scheme(scheme_name);
        if (!scheme)
            throw std::invalid_argument("unknown scheme '" + scheme_name + "'");

        LinkTable table(aps, cfg.link_budget(), cfg.band(), cfg.ce.step);
        auto ce_rng = CounterRng(cfg.seed).derive(std::uint64_t{1});
        SchemeOutcome o;
        if (*scheme == SchemeKind::EqualMrt)
            o = equal_allocation_baseline(table, cfg);
        else if (*scheme == SchemeKind::ColocatedMrt)
            o = colocated_at(aps.front(), cfg, ce_rng);
        else
            o = run_trial(table, *scheme, cfg, ce_rng);

        // Combined RSS the plan was optimized against
        std::vector<AccessPoint> rss_aps = aps;
        if (*scheme == SchemeKind::ColocatedMrt)
            for (auto &ap : rss_aps)
                ap = {ap.id, aps.front().distance, aps.front().angle};
        auto mask = make_mask(*scheme, rss_aps, cfg, table.budget());
        auto rss = [&](double f)
        { return combined_rss(mask, rss_aps, f, table.budget()); };

        nlohmann::json j;
        j["scheme"] = std::string(to_string(o.scheme));
        j["seed"] = cfg.seed;
        j["plan_rate_bps"] = o.plan_rate;
        j["integrated_rate_bps"] = o.integrated_rate;
        j["active_aps"] = o.active_aps;
        j["dead"] = o.dead;
        j["final_plan"] = plan_to_json(o.plan, rss, cfg.noise_psd);
        j["incumbent"] = plan_to_json(o.incumbent, rss, cfg.noise_psd);
        j["incumbent_objective_bps"] = o.incumbent_rate;
        j["trace_bps"] = o.trace;

        const std::string plan_path = out_prefix + ".plan.json", trace_path = out_prefix + ".trace.csv";
        open_out(plan_path) << j.dump(2) << '\n';
        auto tr = open_out(trace_path);
        write_trace_csv(tr, o.trace);
        write_manifest(out_prefix + ".manifest.json", cfg, {plan_path, trace_path});
        return 0;
    }

    int cmd_trial(const Common &c, std::uint64_t index, const std::string &out_path)
    {
        auto cfg = resolve(c);
        // Same stream as trial `index` of an n_aps sweep at the configured N
        auto tr = run_full_trial(cfg, trial_stream(cfg.seed, cfg.n_aps, index));
        auto j = trial_to_json(tr);
        j["seed"] = cfg.seed;
        j["trial_index"] = index;
        if (out_path.empty() || out_path == "-")
            std::cout << j.dump(2) << '\n';
        else
            open_out(out_path) << j.dump(2) << '\n';
        return 0;
    }

    void add_common(CLI::App *sub, Common &c)
    {
        sub->add_option("--config", c.config, "JSON configuration file (defaults when omitted)");
        sub->add_option("--seed", c.seed, "Override the configured seed");
        sub->add_option("--trials", c.trials, "Override the configured trial count");
        sub->add_option("--threads", c.threads, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
    }

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Cell-free THz downlinks with leaky-wave antennas: antenna selection and CE subchannel allocation"};
    app.set_version_flag("--version", std::string(cfthz::version));
    app.require_subcommand(1);
    Common common;

    auto *sim = app.add_subcommand("simulate", "Monte Carlo sweep over N or B_total, CSV out");
    add_common(sim, common);
    std::string axis = "n_aps", sim_out;
    std::vector<double> values;
    sim->add_option("--axis", axis, "n_aps or b_total_hz");
    sim->add_option("--values", values, "Comma-separated axis values (b_total in Hz)")->required()->delimiter(',');
    sim->add_option("--out", sim_out, "Output CSV path")->required();

    auto *gain = app.add_subcommand("gain", "Leaky-wave antenna gain table, CSV out");
    add_common(gain, common);
    std::vector<double> theta_deg{30.0, 45.0, 60.0, 80.0};
    double f_min = 100.0e9, f_max = 300.0e9;
    int f_count = 1001;
    std::string gain_out;
    gain->add_option("--theta-deg", theta_deg, "Comma-separated angles in degrees")->delimiter(',');
    gain->add_option("--f-min-hz", f_min, "Lowest frequency");
    gain->add_option("--f-max-hz", f_max, "Highest frequency");
    gain->add_option("--f-count", f_count, "Number of frequencies (inclusive grid)");
    gain->add_option("--out", gain_out, "Output CSV path")->required();

    auto *alloc = app.add_subcommand("allocate", "CE subchannel allocation for a fixed scenario");
    add_common(alloc, common);
    std::string scenario, scheme = "mrt", alloc_out;
    alloc->add_option("--scenario", scenario, "Scenario file with distance_m,angle_rad rows")->required();
    alloc->add_option("--scheme", scheme, "mrt | best_nsel | best_single | nearest | equal_mrt | colocated_mrt");
    alloc->add_option("--out", alloc_out, "Output prefix (<out>.plan.json, <out>.trace.csv)")->required();

    auto *trial = app.add_subcommand("trial", "One Monte Carlo trial with every configured scheme, JSON out");
    add_common(trial, common);
    std::uint64_t trial_index = 0;
    std::string trial_out;
    trial->add_option("--trial-index", trial_index, "Trial index within the seed's stream");
    trial->add_option("--out", trial_out, "Output JSON path (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*sim)
            return cmd_simulate(common, axis, values, sim_out);
        if (*gain)
            return cmd_gain(common, theta_deg, f_min, f_max, f_count, gain_out);
        if (*alloc)
            return cmd_allocate(common, scenario, scheme, alloc_out);
        if (*trial)
            return cmd_trial(common, trial_index, trial_out);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
