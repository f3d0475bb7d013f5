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
 * @file experiments.hpp
 *
 * End-to-end runs of the on-demand beamsplitter: HOM interference of two
 * single phonons, SWAP of two GKP codewords, detuned-pair leakage, the
 * adiabaticity table and pulse export.
 *
 * Mode 0 is the ion at the high memory frequency omega_h, mode 1 the ion
 * at omega_l. Fock pairs are written (n0, n1).
 */

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "odb/config.hpp"
#include "odb/pulses.hpp"
#include "odb/symplectic.hpp"
#include "odb/tdse.hpp"

namespace odb {

struct OdbDesign {
    double omega_h = 0.0;
    double omega_l = 0.0;
    double omega_m = 0.0;
    double coulomb = 0.0;      // e^2 / (4 pi eps0 d^3 m), rad^2/s^2
    double kappa_gate = 0.0;   // hopping rate at omega_m, rad/s
    double kappa_static = 0.0; // coupling between the memory modes, rad/s
    double theta_target = 0.0;
    double theta = 0.0; // after rounding T_B to whole steps
    double t_fc = 0.0;
    double t_b = 0.0;
    double t_3 = 0.0;
    double dt = 0.0;
    BProfile fc_high; // omega_h -> omega_m
    BProfile fc_low;  // omega_l -> omega_m
    double theta_hm = 0.0;
    double theta_lm = 0.0;

    [[nodiscard]] OdbParameters params() const;
    [[nodiscard]] HamiltonianSpec hamiltonian(bool include_hopping = true) const;
    [[nodiscard]] Grid1D grid_high(const ExperimentConfig &cfg) const;
    [[nodiscard]] Grid1D grid_low(const ExperimentConfig &cfg) const;
};

/// Pulses, phases and timing for beamsplitter angle `theta`. Throws
/// UnrealizablePulseError or ConfigError for ramps that fail validation.
OdbDesign design_odb(const ExperimentConfig &cfg, double theta);

/// FC, hold (omitted when T_B = 0) and iFC segments.
Schedule build_odb_schedule(const OdbDesign &design, bool hopping_during_fc);

/// exp(+i H_static t) on both modes, up to a global sign.
Wavefunction2D to_interaction_frame(const Wavefunction2D &psi,
                                    double omega0, double omega1, double t);

// ---------------------------------------------------------------- HOM

/// Lab-frame Fock amplitudes (rows n0, cols n1, up to n_max) of the ideal
/// beamsplitter output for input |n0_in, n1_in>.
Eigen::MatrixXcd odb_target_amplitudes(const OdbDesign &design, int n0_in,
                                       int n1_in, int n_max);

struct HomRun {
    Wavefunction2D final_state;
    std::vector<Snapshot> snapshots{};
    double infidelity = 0.0; // 1 - |<target|psi>|^2
    double pop_11 = 0.0;     // memory basis, end of run
    double pop_20 = 0.0;
    double pop_02 = 0.0;
    double mem_11_after_fc = 0.0; // memory-basis |1,1> at t = T_FC
    double gate_11_initial = 0.0; // gate-basis |1,1> at t = 0
    double cross_validation_infidelity = 0.0; // Fock space, n <= 4
    double norm_drift = 0.0;
    long long steps = 0;
};

HomRun simulate_hom(const ExperimentConfig &cfg, bool hopping_during_fc,
                    bool record_snapshots);

struct HomReport {
    OdbDesign design;
    HomRun main;
    HomRun baseline; // hopping switched off during FC and iFC
    HomPhases phases;
    double phase_consistency = 0.0; // |arg target - formula|, rad
    double wall_seconds = 0.0;
};

HomReport run_hom(const ExperimentConfig &cfg);

// ---------------------------------------------------------------- SWAP

struct PhysicalPhaseGate {
    double tau_high = 0.0; // hold at omega_m, s
    double tau_low = 0.0;
    double residual_high = 0.0; // phase miss after rounding, rad
    double residual_low = 0.0;
    double duration = 0.0; // total gate time, s
};

/// Hold times that make FC(omega_j -> omega_m), hold, iFC realise the
/// compensation phase of each mode (modes run one after the other).
PhysicalPhaseGate solve_physical_phase_gate(const OdbDesign &design,
                                            const SwapPhases &phases);

/// Appends the physical phase gate segments to `schedule`.
void append_physical_phase_gate(Schedule &schedule, const OdbDesign &design,
                                const PhysicalPhaseGate &gate);

struct MarginalSet {
    std::string stage; // fc_in, fc_out, ifc_in, ifc_out, phase_out, target
    std::vector<double> mode0;
    std::vector<double> mode1;
};

struct SwapReport {
    OdbDesign design;
    SwapPhases phases;
    double compensation_phase = 0.0; // lab-frame Fock phase, each mode
    bool physical_phase_gate = false;
    PhysicalPhaseGate physical{};
    double infidelity = 0.0;        // 1 - |<target|psi>|
    double infidelity_squared = 0.0; // 1 - |<target|psi>|^2
    double l1_compensated[2] = {0.0, 0.0};
    double l1_uncompensated[2] = {0.0, 0.0};
    std::vector<MarginalSet> marginals{};
    Grid1D grid0{2, 1.0, 1.0};
    Grid1D grid1{2, 1.0, 1.0};
    double norm_drift = 0.0;
    long long steps = 0;
    double wall_seconds = 0.0;
};

SwapReport run_swap_gkp(const ExperimentConfig &cfg);

// ---------------------------------------------------------------- detuning

struct TransferCheck {
    std::string label;
    double omega_a = 0.0;
    double omega_b = 0.0;
    double kappa = 0.0;
    double duration = 0.0;
    double max_transfer = 0.0;
    double final_transfer = 0.0;
    double rabi_bound = 0.0; // kappa^2 / (kappa^2 + delta^2)
};

/// |0,1> under the static pair Hamiltonian; largest |1,0> population.
TransferCheck measure_transfer(const std::string &label, double omega_a,
                               double omega_b, double kappa, double duration,
                               double dt, int grid_points);

struct DetuningReport {
    std::vector<TransferCheck> pairs; // (h,l), (h,m), (m,l)
    TransferCheck resonant;           // (m,m) for pi / kappa
    double wall_seconds = 0.0;
};

DetuningReport run_detuning_check(const ExperimentConfig &cfg);

// ---------------------------------------------------------------- tables

struct AdiabaticityRow {
    std::string ramp; // "down" (omega_h -> omega_m) or "up"
    double g = 0.0;
    double metric[3] = {0.0, 0.0, 0.0}; // n = 1, 10, 100
    double small_g_bound[3] = {0.0, 0.0, 0.0};
    double cycles = 0.0;
};

struct AdiabaticityReport {
    std::vector<AdiabaticityRow> rows;
    double fc_rate_khz_per_us = 0.0;
    double reference_rate_khz_per_us = 57.0;
};

AdiabaticityReport run_adiabaticity_table(const ExperimentConfig &cfg);

/// (omega_h - omega_m) / T_FC in cyclic kHz per microsecond.
double fc_rate(const ExperimentConfig &cfg);

// ---------------------------------------------------------------- convergence

/// Tolerance of the reported infidelity: 5e-4 for "hom", 1e-2 for "swap".
double experiment_tolerance(const std::string &experiment);

/// Reruns `experiment` ("hom" or "swap") at dt/2 and at twice the grid.
ConvergenceReport run_convergence(const ExperimentConfig &cfg,
                                  const std::string &experiment);

// ---------------------------------------------------------------- output

/// Writes pulse.csv (omega_h -> omega_m) and pulse_up.csv (omega_l ->
/// omega_m).
void export_pulses(const ExperimentConfig &cfg,
                   const std::filesystem::path &dir);

nlohmann::json to_json(const ExperimentConfig &cfg);
nlohmann::json to_json(const Schedule &schedule);
nlohmann::json to_json(const HomReport &r, const ExperimentConfig &cfg);
nlohmann::json to_json(const SwapReport &r, const ExperimentConfig &cfg);
nlohmann::json to_json(const DetuningReport &r);
nlohmann::json to_json(const AdiabaticityReport &r);
nlohmann::json to_json(const ConvergenceReport &r);

/// report.json, populations.csv and pulse CSVs.
void write_outputs(const HomReport &r, const ExperimentConfig &cfg,
                   const std::filesystem::path &dir);
/// report.json, marginals_<stage>_mode<j>.csv and pulse CSVs.
void write_outputs(const SwapReport &r, const ExperimentConfig &cfg,
                   const std::filesystem::path &dir);
void write_json(const std::filesystem::path &path, const nlohmann::json &j);

} // namespace odb
