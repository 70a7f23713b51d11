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

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

// Leaky-wave antenna physics and free-space THz link budgets.
// Every function here is pure: no state, safe to call from any thread.

namespace cfthz
{
    struct PhysConstants
    {
        double c = 3.0e8; // speed of light [m/s]
    };

    // Parallel-plate (TE1) leaky-wave antenna
    struct AntennaConfig
    {
        double f_co = 100.0e9;                // Cutoff frequency [Hz]
        std::optional<double> plate_sep;      // Inter-plate distance [m], optional
        double atten = 130.0;                 // Attenuation coefficient [1/m]
        double aperture = 0.09;               // Aperture length [m]
        double efficiency = 1.0;              // Radiation efficiency factor (0, 1]
        int gain_exponent = 1;                // 1: |G|, 2: |G|^2

        // Returns an empty string when valid, otherwise a description of the first violation
        std::string is_valid(const PhysConstants &consts = {}) const
        {
            if (!(f_co > 0.0))
                return "f_co must be positive";
            if (!(aperture > 0.0))
                return "aperture must be positive";
            if (!(atten >= 0.0))
                return "atten must be non-negative";
            if (!(efficiency > 0.0 && efficiency <= 1.0))
                return "efficiency must be in (0, 1]";
            if (gain_exponent != 1 && gain_exponent != 2)
                return "gain_exponent must be 1 or 2";
            if (plate_sep)
            {
                if (!(*plate_sep > 0.0))
                    return "plate_sep must be positive";
                double expected = consts.c / (2.0 * *plate_sep);
                if (std::abs(expected - f_co) > 1.0e-9 * expected)
                    return "f_co is inconsistent with plate_sep (f_co = c / (2 plate_sep))";
            }
            return {};
        }
    };

    inline double cutoff_from_plates(double plate_sep, const PhysConstants &consts = {})
    {
        if (!(plate_sep > 0.0))
            throw std::domain_error("cutoff_from_plates: plate separation must be positive");
        return consts.c / (2.0 * plate_sep);
    }

    // Frequency of maximum radiation towards angle theta (measured from the waveguide axis)
    inline double peak_frequency(double theta, double f_co)
    {
        if (!(theta > 0.0 && theta <= std::numbers::pi / 2.0))
            throw std::domain_error("peak_frequency: theta must be in (0, pi/2]");
        return f_co / std::sin(theta);
    }

    inline double wavenumber(double f, const PhysConstants &consts = {})
    {
        if (!(f > 0.0))
            throw std::domain_error("wavenumber: frequency must be positive");
        return 2.0 * std::numbers::pi * f / consts.c;
    }

    // Phase constant of the TE1 mode, zero at cutoff
    inline double phase_constant(double f, double f_co, const PhysConstants &consts = {})
    {
        if (!(f >= f_co))
            throw std::domain_error("phase_constant: frequency below cutoff");
        double r = f_co / f;
        return wavenumber(f, consts) * std::sqrt(1.0 - r * r);
    }

    // Unnormalized complex sinc, sin(z)/z
    inline std::complex<double> sinc(std::complex<double> z)
    {
        if (std::abs(z) < 1.0e-4)
        {
            auto z2 = z * z;
            return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
        }
        return std::sin(z) / z;
    }

    // Complex aperture argument (-j*atten - k0*cos(theta) + beta) * L/2
    inline std::complex<double> aperture_argument(double f, double theta, const AntennaConfig &cfg,
                                                  const PhysConstants &consts = {})
    {
        double re = phase_constant(f, cfg.f_co, consts) - wavenumber(f, consts) * std::cos(theta);
        return std::complex<double>(re, -cfg.atten) * (0.5 * cfg.aperture);
    }

    // Effective leaky-wave antenna gain |xi * L * sinc(z)|^gain_exponent
    inline double antenna_gain(double f, double theta, const AntennaConfig &cfg, const PhysConstants &consts = {})
    {
        if (!(f >= cfg.f_co))
            throw std::domain_error("antenna_gain: frequency below cutoff");
        if (!(theta > 0.0 && theta <= std::numbers::pi / 2.0))
            throw std::domain_error("antenna_gain: theta must be in (0, pi/2]");
        double g = std::abs(cfg.efficiency * cfg.aperture * sinc(aperture_argument(f, theta, cfg, consts)));
        return cfg.gain_exponent == 2 ? g * g : g;
    }

    // Free-space path gain (c / (4 pi f d))^2
    inline double path_gain(double f, double d, const PhysConstants &consts = {})
    {
        if (!(f > 0.0))
            throw std::domain_error("path_gain: frequency must be positive");
        if (!(d > 0.0))
            throw std::domain_error("path_gain: distance must be positive");
        double a = consts.c / (4.0 * std::numbers::pi * f * d);
        return a * a;
    }

    // PSD conversions, dBm/Hz <-> W/Hz
    inline double dbm_hz_to_w_hz(double dbm_hz) { return std::pow(10.0, (dbm_hz - 30.0) / 10.0); }
    inline double w_hz_to_dbm_hz(double w_hz) { return 10.0 * std::log10(w_hz) + 30.0; }
    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

} // namespace cfthz
