// Copyright 2026 The odbsim Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/**
 * @file config.hpp
 *
 * Experiment configuration: a flat `key = value` text file with units in
 * the key names. Lines starting with '#' are comments. Unknown keys are
 * errors so that a typo never silently falls back to a default.
 */

#include <filesystem>
#include <string>

namespace odb {

struct ExperimentConfig {
    double mass_u = 40.0;
    double d_um = 43.8;
    double omega_h_mhz = 2.64; // cyclic, converted to rad/s on use
    double omega_l_mhz = 2.20;
    double omega_m_mhz = 2.42;
    double t_fc_us = 4.0;
    double sigma = 6.0;
    double theta_pi = 0.25;      // beamsplitter angle / pi for `hom`
    double swap_theta_pi = 0.5;  // same for `swap-gkp`
    int grid_points = 128;
    double grid_span = 0.0;      // 0 selects sqrt(pi N / 2)
    double dt_ns = 2.0;
    bool hopping_during_fc = true;
    double gkp_delta = 0.3;
    double gkp_epsilon = 0.3;
    int gkp_s_max = 6;
    std::string output_dir = "odb_out";
    bool physical_phase_gate = false;
    int snapshot_stride = 250;   // dt steps between population samples
    double detune_dt_ns = 5.0;
    int detune_grid_points = 64;
    double boundary_tol = 1e-3;
    int static_step_multiplier = 8;

    [[nodiscard]] double omega_h() const;
    [[nodiscard]] double omega_l() const;
    [[nodiscard]] double omega_m() const;
    [[nodiscard]] double mass_kg() const;
    [[nodiscard]] double distance_m() const;
    [[nodiscard]] double t_fc() const { return t_fc_us * 1e-6; }
    [[nodiscard]] double dt() const { return dt_ns * 1e-9; }
    [[nodiscard]] double span() const;

    /// Throws ConfigError unless omega_l < omega_m < omega_h and all sizes
    /// and durations are sensible.
    void validate() const;
    /// Canonical `key = value` text; parse_config(to_text()) round-trips.
    [[nodiscard]] std::string to_text() const;
};

ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::filesystem::path &path);

} // namespace odb
