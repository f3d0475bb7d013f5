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

// odb: command-line front end for the on-demand beamsplitter simulations.
//
//   odb hom          [--config f] [--out dir] [--assert] ...
//   odb swap-gkp     [--physical-phase-gate] ...
//   odb detune-check | adiabaticity | pulse-export
//   odb convergence  --experiment hom|swap
//
// Exit status: 0 success, 1 a threshold failed under --assert, 2 error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "odb/config.hpp"
#include "odb/errors.hpp"
#include "odb/experiments.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::string out_dir;
    double dt_ns = 0.0;
    int grid_points = 0;
    bool no_hopping_during_fc = false;
    bool physical_phase_gate = false;
    bool assert_thresholds = false;
};

odb::ExperimentConfig resolve(const Overrides &o) {
    odb::ExperimentConfig cfg = o.config_path.empty()
                                    ? odb::ExperimentConfig{}
                                    : odb::load_config(o.config_path);
    if (!o.out_dir.empty()) {
        cfg.output_dir = o.out_dir;
    }
    if (o.dt_ns > 0.0) {
        cfg.dt_ns = o.dt_ns;
    }
    if (o.grid_points > 0) {
        cfg.grid_points = o.grid_points;
    }
    if (o.no_hopping_during_fc) {
        cfg.hopping_during_fc = false;
    }
    if (o.physical_phase_gate) {
        cfg.physical_phase_gate = true;
    }
    cfg.validate();
    return cfg;
}

/// Prints one check line; returns whether it held.
bool check(const char *name, bool ok, double value, const char *limit) {
    std::printf("%-34s %-4s %.6g (%s)\n", name, ok ? "ok" : "FAIL", value,
                limit);
    return ok;
}

int run_hom(const Overrides &o) {
    const odb::ExperimentConfig cfg = resolve(o);
    const odb::HomReport r = odb::run_hom(cfg);
    odb::write_outputs(r, cfg, cfg.output_dir);
    bool ok = true;
    ok &= check("pop(2,0)", std::abs(r.main.pop_20 - 0.5) <= 0.01,
                r.main.pop_20, "0.5 +- 0.01");
    ok &= check("pop(0,2)", std::abs(r.main.pop_02 - 0.5) <= 0.01,
                r.main.pop_02, "0.5 +- 0.01");
    ok &= check("pop(1,1)", r.main.pop_11 <= 0.01, r.main.pop_11, "<= 0.01");
    ok &= check("infidelity", r.main.infidelity <= 5e-4, r.main.infidelity,
                "<= 5e-4");
    ok &= check("memory |1,1> after FC",
                std::abs(r.main.mem_11_after_fc - 0.994) <= 0.002,
                r.main.mem_11_after_fc, "0.994 +- 0.002");
    ok &= check("gate |1,1> at t=0",
                std::abs(r.main.gate_11_initial - 0.994) <= 0.002,
                r.main.gate_11_initial, "0.994 +- 0.002");
    ok &= check("cross-validation (no FC hopping)",
                r.baseline.cross_validation_infidelity <= 1e-4,
                r.baseline.cross_validation_infidelity, "<= 1e-4");
    std::printf("baseline infidelity (no FC hopping) %.6g\n",
                r.baseline.infidelity);
    std::printf("outputs in %s\n", cfg.output_dir.c_str());
    return (o.assert_thresholds && !ok) ? 1 : 0;
}

int run_swap(const Overrides &o) {
    const odb::ExperimentConfig cfg = resolve(o);
    const odb::SwapReport r = odb::run_swap_gkp(cfg);
    odb::write_outputs(r, cfg, cfg.output_dir);
    bool ok = check("infidelity 1-|<.|.>|", r.infidelity <= 1e-2,
                    r.infidelity, "<= 1e-2");
    for (int j = 0; j < 2; ++j) {
        const std::string a = "L1 mode" + std::to_string(j);
        const std::string b = a + " uncompensated";
        ok &= check(a.c_str(), r.l1_compensated[j] <= 0.05,
                    r.l1_compensated[j], "<= 0.05");
        ok &= check(b.c_str(), r.l1_uncompensated[j] > r.l1_compensated[j],
                    r.l1_uncompensated[j], "> compensated");
    }
    std::printf("outputs in %s\n", cfg.output_dir.c_str());
    return (o.assert_thresholds && !ok) ? 1 : 0;
}

int run_detune(const Overrides &o) {
    const odb::ExperimentConfig cfg = resolve(o);
    const odb::DetuningReport r = odb::run_detuning_check(cfg);
    std::filesystem::create_directories(cfg.output_dir);
    odb::write_json(std::filesystem::path(cfg.output_dir) / "report.json",
                    odb::to_json(r));
    bool ok = true;
    for (const odb::TransferCheck &c : r.pairs) {
        const double ratio = c.max_transfer / c.rabi_bound;
        const std::string name = "pair " + c.label + " max transfer";
        ok &= check(name.c_str(), ratio >= 0.5 && ratio <= 2.0,
                    c.max_transfer, "within 2x of Rabi bound");
    }
    ok &= check("pair h-l <= 1e-5", r.pairs.front().max_transfer <= 1e-5,
                r.pairs.front().max_transfer, "<= 1e-5");
    ok &= check("resonant m-m transfer", r.resonant.final_transfer >= 0.999,
                r.resonant.final_transfer, ">= 0.999");
    return (o.assert_thresholds && !ok) ? 1 : 0;
}

int run_adiabaticity(const Overrides &o) {
    const odb::ExperimentConfig cfg = resolve(o);
    const odb::AdiabaticityReport r = odb::run_adiabaticity_table(cfg);
    std::filesystem::create_directories(cfg.output_dir);
    odb::write_json(std::filesystem::path(cfg.output_dir) / "report.json",
                    odb::to_json(r));
    std::printf("%-5s %-10s %-12s %-12s %-12s %-8s\n", "ramp", "g",
                "metric(1)", "metric(10)", "metric(100)", "cycles");
    for (const odb::AdiabaticityRow &row : r.rows) {
        std::printf("%-5s %-10.5g %-12.5g %-12.5g %-12.5g %-8.4g\n",
                    row.ramp.c_str(), row.g, row.metric[0], row.metric[1],
                    row.metric[2], row.cycles);
    }
    std::printf("FC rate %.4g kHz/us (reference %.4g)\n",
                r.fc_rate_khz_per_us, r.reference_rate_khz_per_us);
    bool ok = true;
    ok &= check("down metric(1)",
                std::abs(r.rows[0].metric[0] / 6e-4 - 1.0) <= 0.1,
                r.rows[0].metric[0], "6e-4 +- 10%");
    ok &= check("up metric(1)",
                std::abs(r.rows[1].metric[0] / 7e-4 - 1.0) <= 0.1,
                r.rows[1].metric[0], "7e-4 +- 10%");
    ok &= check("up cycles", std::abs(r.rows[1].cycles / 9.0 - 1.0) <= 0.05,
                r.rows[1].cycles, "9 +- 5%");
    return (o.assert_thresholds && !ok) ? 1 : 0;
}

int run_pulses(const Overrides &o) {
    const odb::ExperimentConfig cfg = resolve(o);
    odb::export_pulses(cfg, cfg.output_dir);
    std::printf("wrote pulse.csv and pulse_up.csv to %s\n",
                cfg.output_dir.c_str());
    return 0;
}

int run_convergence(const Overrides &o, const std::string &experiment) {
    const odb::ExperimentConfig cfg = resolve(o);
    const odb::ConvergenceReport r = odb::run_convergence(cfg, experiment);
    std::filesystem::create_directories(cfg.output_dir);
    nlohmann::json j = odb::to_json(r);
    j["experiment"] = experiment;
    odb::write_json(std::filesystem::path(cfg.output_dir) /
                        "convergence.json",
                    j);
    std::printf("base %.6g  dt/2 %.6g  2N %.6g\n", r.base, r.half_dt,
                r.double_grid);
    const bool ok =
        check("dt/2 change", r.change_dt <= r.limit, r.change_dt, "<= 10% tol") &
        check("2N change", r.change_grid <= r.limit, r.change_grid,
              "<= 10% tol");
    return (o.assert_thresholds && !ok) ? 1 : 0;
}

void add_common(CLI::App *cmd, Overrides &o) {
    cmd->add_option("--config", o.config_path, "key = value config file")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--dt-ns", o.dt_ns, "time step in ns");
    cmd->add_option("--grid-points", o.grid_points, "grid points per mode");
    cmd->add_flag("--no-hopping-during-fc", o.no_hopping_during_fc,
                  "switch the hopping term off during the ramps");
    cmd->add_flag("--physical-phase-gate", o.physical_phase_gate,
                  "compensate with FC/hold/iFC instead of the exact gate");
    cmd->add_flag("--assert", o.assert_thresholds,
                  "exit with status 1 if a threshold fails");
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"On-demand beamsplitter simulations for trapped-ion local "
                 "phonon modes"};
    app.require_subcommand(1);
    Overrides o;
    std::string experiment = "hom";

    auto *hom = app.add_subcommand("hom", "HOM interference of |1,1>");
    auto *swap = app.add_subcommand("swap-gkp", "SWAP of two GKP codewords");
    auto *detune =
        app.add_subcommand("detune-check", "leakage between detuned modes");
    auto *adiab =
        app.add_subcommand("adiabaticity", "adiabaticity table and FC rate");
    auto *pulses = app.add_subcommand("pulse-export", "write b(t), w(t) CSVs");
    auto *conv = app.add_subcommand("convergence", "dt and grid refinement");
    for (CLI::App *c : {hom, swap, detune, adiab, pulses, conv}) {
        add_common(c, o);
    }
    conv->add_option("--experiment", experiment, "hom or swap")
        ->check(CLI::IsMember({"hom", "swap"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*hom) {
            return run_hom(o);
        }
        if (*swap) {
            return run_swap(o);
        }
        if (*detune) {
            return run_detune(o);
        }
        if (*adiab) {
            return run_adiabaticity(o);
        }
        if (*pulses) {
            return run_pulses(o);
        }
        return run_convergence(o, experiment);
    } catch (const std::exception &e) {
        std::cerr << "odb: " << e.what() << '\n';
        return 2;
    }
}
