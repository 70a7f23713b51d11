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

#include "digest.hpp"
#include "sim.hpp"

#include "json.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

// Scenario configuration as a flat JSON document with dotted keys, e.g.
//
//   { "n_aps": 20, "antenna.f_co_hz": 200e9, "ce.samples": 100 }
//
// Nested objects are accepted and flattened ("antenna": {"f_co_hz": ...}). Keys that are
// absent take the reference defaults. Power levels are given in dB units and converted to
// linear at load.

namespace cfthz
{
    class ConfigError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    namespace detail
    {
        inline void flatten_into(const nlohmann::json &j, const std::string &prefix, nlohmann::json &out)
        {
            for (auto it = j.begin(); it != j.end(); ++it)
            {
                std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
                if (it->is_object())
                    flatten_into(*it, key, out);
                else
                    out[key] = *it;
            }
        }

        template <class T>
        T get_key(const nlohmann::json &flat, const std::string &key)
        {
            try
            {
                if constexpr (std::is_integral_v<T>)
                {
                    const auto &v = flat.at(key);
                    if (v.is_number_float())
                    {
                        double d = v.get<double>();
                        if (d != std::floor(d))
                            throw ConfigError(key + ": expected an integer");
                        return static_cast<T>(d);
                    }
                    return v.get<T>();
                }
                else
                    return flat.at(key).get<T>();
            }
            catch (const nlohmann::json::exception &)
            {
                throw ConfigError(key + ": wrong value type");
            }
        }
    } // namespace detail

    // Flattened document holding every key with its effective value
    inline nlohmann::json config_to_json(const ScenarioConfig &c)
    {
        nlohmann::json j;
        j["n_aps"] = c.n_aps;
        j["n_sel"] = c.n_sel;
        j["radius_m"] = c.radius;
        j["d_min_m"] = c.d_min;
        j["angle_guard_rad"] = c.angle_guard;
        j["f_upper_hz"] = c.f_upper;
        j["b_total_hz"] = c.b_total;
        j["p_total_w"] = c.p_total;
        j["noise_psd_dbm_hz"] = w_hz_to_dbm_hz(c.noise_psd);
        j["gamma_th_dbm_hz"] = c.gamma_th > 0.0 ? nlohmann::json(w_hz_to_dbm_hz(c.gamma_th)) : nlohmann::json(nullptr);
        j["eps_db"] = c.eps_db;
        j["trials"] = c.trials;
        j["seed"] = c.seed;
        auto &sch = j["schemes"] = nlohmann::json::array();
        for (auto s : c.schemes)
            sch.push_back(std::string(to_string(s)));
        j["antenna.f_co_hz"] = c.antenna.f_co;
        if (c.antenna.plate_sep)
            j["antenna.plate_sep_m"] = *c.antenna.plate_sep;
        j["antenna.atten_per_m"] = c.antenna.atten;
        j["antenna.aperture_m"] = c.antenna.aperture;
        j["antenna.efficiency"] = c.antenna.efficiency;
        j["antenna.gain_exponent"] = c.antenna.gain_exponent;
        j["physics.c_m_per_s"] = c.consts.c;
        j["ce.n_sub"] = c.ce.n_sub;
        j["ce.samples"] = c.ce.samples;
        j["ce.elites"] = c.ce.elites;
        j["ce.smooth_mean"] = c.ce.smooth_mean;
        j["ce.smooth_var"] = c.ce.smooth_var;
        j["ce.smooth_power"] = c.ce.smooth_power;
        j["ce.max_iter"] = c.ce.max_iter;
        j["ce.step_hz"] = c.ce.step;
        j["ce.budget_policy"] = c.ce.budget == BudgetPolicy::Proportional ? "proportional" : "greedy";
        return j;
    }

    // Builds a validated configuration from a (possibly nested) JSON object
    inline ScenarioConfig config_from_json(const nlohmann::json &doc)
    {
        if (!doc.is_object())
            throw ConfigError("configuration root must be an object");
        nlohmann::json flat = nlohmann::json::object();
        detail::flatten_into(doc, "", flat);

        const nlohmann::json known = config_to_json(ScenarioConfig{});
        for (auto it = flat.begin(); it != flat.end(); ++it)
            if (!known.contains(it.key()) && it.key() != "antenna.plate_sep_m")
                throw ConfigError(it.key() + ": unknown key");

        ScenarioConfig c;
        auto has = [&](const char *k)
        { return flat.contains(k); };
        using detail::get_key;

        if (has("physics.c_m_per_s"))
            c.consts.c = get_key<double>(flat, "physics.c_m_per_s");
        if (has("n_aps"))
            c.n_aps = get_key<int>(flat, "n_aps");
        if (has("n_sel"))
            c.n_sel = get_key<int>(flat, "n_sel");
        if (has("radius_m"))
            c.radius = get_key<double>(flat, "radius_m");
        if (has("d_min_m"))
            c.d_min = get_key<double>(flat, "d_min_m");
        if (has("angle_guard_rad"))
            c.angle_guard = get_key<double>(flat, "angle_guard_rad");
        if (has("f_upper_hz"))
            c.f_upper = get_key<double>(flat, "f_upper_hz");
        if (has("b_total_hz"))
            c.b_total = get_key<double>(flat, "b_total_hz");
        if (has("p_total_w"))
            c.p_total = get_key<double>(flat, "p_total_w");
        if (has("noise_psd_dbm_hz"))
            c.noise_psd = dbm_hz_to_w_hz(get_key<double>(flat, "noise_psd_dbm_hz"));
        if (has("gamma_th_dbm_hz"))
            c.gamma_th = flat.at("gamma_th_dbm_hz").is_null() ? 0.0 : dbm_hz_to_w_hz(get_key<double>(flat, "gamma_th_dbm_hz"));
        if (has("eps_db"))
            c.eps_db = get_key<double>(flat, "eps_db");
        if (has("trials"))
            c.trials = get_key<int>(flat, "trials");
        if (has("seed"))
            c.seed = get_key<std::uint64_t>(flat, "seed");
        if (has("schemes"))
        {
            const auto &arr = flat.at("schemes");
            if (!arr.is_array())
                throw ConfigError("schemes: expected an array of scheme names");
            c.schemes.clear();
            for (const auto &v : arr)
            {
                auto s = v.is_string() ? parse_scheme(v.get<std::string>()) : std::nullopt;
                if (!s)
                    throw ConfigError("schemes: unknown scheme " + v.dump());
                c.schemes.push_back(*s);
            }
        }

        if (has("antenna.plate_sep_m"))
        {
            c.antenna.plate_sep = get_key<double>(flat, "antenna.plate_sep_m");
            if (!(*c.antenna.plate_sep > 0.0))
                throw ConfigError("antenna.plate_sep_m: must be positive");
            if (!has("antenna.f_co_hz"))
                c.antenna.f_co = cutoff_from_plates(*c.antenna.plate_sep, c.consts);
        }
        if (has("antenna.f_co_hz"))
            c.antenna.f_co = get_key<double>(flat, "antenna.f_co_hz");
        if (has("antenna.atten_per_m"))
            c.antenna.atten = get_key<double>(flat, "antenna.atten_per_m");
        if (has("antenna.aperture_m"))
            c.antenna.aperture = get_key<double>(flat, "antenna.aperture_m");
        if (has("antenna.efficiency"))
            c.antenna.efficiency = get_key<double>(flat, "antenna.efficiency");
        if (has("antenna.gain_exponent"))
            c.antenna.gain_exponent = get_key<int>(flat, "antenna.gain_exponent");

        if (has("ce.n_sub"))
            c.ce.n_sub = get_key<int>(flat, "ce.n_sub");
        if (has("ce.samples"))
            c.ce.samples = get_key<int>(flat, "ce.samples");
        if (has("ce.elites"))
            c.ce.elites = get_key<int>(flat, "ce.elites");
        if (has("ce.smooth_mean"))
            c.ce.smooth_mean = get_key<double>(flat, "ce.smooth_mean");
        if (has("ce.smooth_var"))
            c.ce.smooth_var = get_key<double>(flat, "ce.smooth_var");
        if (has("ce.smooth_power"))
            c.ce.smooth_power = get_key<double>(flat, "ce.smooth_power");
        if (has("ce.max_iter"))
            c.ce.max_iter = get_key<int>(flat, "ce.max_iter");
        if (has("ce.step_hz"))
            c.ce.step = get_key<double>(flat, "ce.step_hz");
        if (has("ce.budget_policy"))
        {
            auto v = get_key<std::string>(flat, "ce.budget_policy");
            if (v == "greedy")
                c.ce.budget = BudgetPolicy::GreedyByRss;
            else if (v == "proportional")
                c.ce.budget = BudgetPolicy::Proportional;
            else
                throw ConfigError("ce.budget_policy: expected \"greedy\" or \"proportional\"");
        }

        if (auto err = c.is_valid(); !err.empty())
        {
            // Map internal names back to document keys
            auto colon = err.find(':');
            std::string head = err.substr(0, colon), rest = err.substr(colon);
            if (head == "antenna" || head == "ce")
            {
                auto sp = rest.find(' ', 2);
                std::string field = rest.substr(2, sp - 2);
                static const std::pair<const char *, const char *> names[] = {
                    {"f_co", "antenna.f_co_hz"}, {"aperture", "antenna.aperture_m"}, {"atten", "antenna.atten_per_m"},
                    {"efficiency", "antenna.efficiency"}, {"gain_exponent", "antenna.gain_exponent"},
                    {"plate_sep", "antenna.plate_sep_m"}, {"n_sub", "ce.n_sub"}, {"samples", "ce.samples"},
                    {"elites", "ce.elites"}, {"smooth_mean", "ce.smooth_mean"}, {"smooth_var", "ce.smooth_var"},
                    {"smooth_power", "ce.smooth_power"}, {"max_iter", "ce.max_iter"}, {"step", "ce.step_hz"}};
                for (auto [from, to] : names)
                    if (field == from)
                        err = std::string(to) + ":" + rest.substr(2 + field.size());
            }
            throw ConfigError(err);
        }
        return c;
    }

    inline ScenarioConfig load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot read configuration file " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        std::string text = ss.str();
        if (text.find_first_not_of(" \t\r\n") == std::string::npos)
            return ScenarioConfig{};
        nlohmann::json doc;
        try
        {
            doc = nlohmann::json::parse(text);
        }
        catch (const nlohmann::json::parse_error &e)
        {
            throw ConfigError(path + ": " + e.what());
        }
        return config_from_json(doc);
    }

    // Digest of the effective configuration; independent of key order in the source document
    inline std::uint64_t config_digest(const ScenarioConfig &c)
    {
        return fnv1a64(config_to_json(c).dump());
    }

    inline std::string hex64(std::uint64_t v)
    {
        static const char *digits = "0123456789abcdef";
        std::string s(16, '0');
        for (int i = 15; i >= 0; --i, v >>= 4)
            s[static_cast<std::size_t>(i)] = digits[v & 0xF];
        return s;
    }

} // namespace cfthz
