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

#include "odb/experiments.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "odb/constants.hpp"
#include "odb/errors.hpp"
#include "odb/lr_engine.hpp"
#include "odb/states.hpp"

namespace odb {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

BProfile checked_profile(double omega_i, double omega_f,
                         const ExperimentConfig &cfg) {
    BProfile p = make_b_profile(omega_i, omega_f, cfg.t_fc(), cfg.sigma);
    const ProfileValidation v = validate_profile(p, cfg.boundary_tol);
    if (v.min_omega_squared < 0.0) {
        throw UnrealizablePulseError(
            "design_odb: ramp needs negative stiffness",
            v.min_omega_squared_time);
    }
    if (!v.pass) {
        throw ConfigError("design_odb: ramp misses its boundary conditions "
                          "(raise sigma or boundary_tol)");
    }
    return p;
}

Wavefunction2D state_from_amplitudes(const Eigen::MatrixXcd &c,
                                     const Grid1D &g0, const Grid1D &g1) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(g0.size(), g1.size());
    for (Eigen::Index a = 0; a < c.rows(); ++a) {
        for (Eigen::Index b = 0; b < c.cols(); ++b) {
            if (c(a, b) == Complex(0.0)) {
                continue;
            }
            const Wavefunction1D f0 = fock_state(static_cast<int>(a), g0);
            const Wavefunction1D f1 = fock_state(static_cast<int>(b), g1);
            const Eigen::Map<const Eigen::VectorXcd> v0(f0.amplitudes.data(),
                                                        g0.size());
            const Eigen::Map<const Eigen::VectorXcd> v1(f1.amplitudes.data(),
                                                        g1.size());
            m += c(a, b) * v0 * v1.transpose();
        }
    }
    return Wavefunction2D::from_matrix(g0, g1, m);
}

/// Vacuum phase of the whole gate in the interaction frame.
double vacuum_phase(const OdbDesign &d) {
    return d.theta_hm + d.theta_lm - d.omega_m * d.t_b +
           0.5 * (d.omega_h + d.omega_l) * d.t_3;
}

Segment hold_segment(double duration, double w0, double w1, bool hopping,
                     std::string label) {
    Segment s;
    s.duration = duration;
    s.modes[0] = FrequencyProgram::hold(w0);
    s.modes[1] = FrequencyProgram::hold(w1);
    s.hopping = hopping;
    s.label = std::move(label);
    return s;
}

} // namespace

OdbParameters OdbDesign::params() const {
    OdbParameters p;
    p.theta_hm = theta_hm;
    p.theta_lm = theta_lm;
    p.omega_m = omega_m;
    p.omega_h = omega_h;
    p.omega_l = omega_l;
    p.t_b = t_b;
    p.t_3 = t_3;
    return p;
}

HamiltonianSpec OdbDesign::hamiltonian(bool include_hopping) const {
    return {omega_h, omega_l, kappa_static, include_hopping};
}

Grid1D OdbDesign::grid_high(const ExperimentConfig &cfg) const {
    return {cfg.grid_points, cfg.span(), omega_h};
}

Grid1D OdbDesign::grid_low(const ExperimentConfig &cfg) const {
    return {cfg.grid_points, cfg.span(), omega_l};
}

OdbDesign design_odb(const ExperimentConfig &cfg, double theta) {
    cfg.validate();
    if (theta < 0.0) {
        throw ConfigError("design_odb: theta must be >= 0");
    }
    const double wh = cfg.omega_h();
    const double wl = cfg.omega_l();
    const double wm = cfg.omega_m();
    const double c = coulomb_coupling(cfg.distance_m(), cfg.mass_kg());
    BProfile high = checked_profile(wh, wm, cfg);
    BProfile low = checked_profile(wl, wm, cfg);
    const double kappa_gate = c / wm;
    const double dt = cfg.dt();
    const double steps = std::round(2.0 * theta / kappa_gate / dt);
    const double t_b = steps * dt;
    const double th_hm = theta_phase(high);
    const double th_lm = theta_phase(low);
    return OdbDesign{wh,
                     wl,
                     wm,
                     c,
                     kappa_gate,
                     c / std::sqrt(wh * wl),
                     theta,
                     0.5 * kappa_gate * t_b,
                     cfg.t_fc(),
                     t_b,
                     2.0 * cfg.t_fc() + t_b,
                     dt,
                     std::move(high),
                     std::move(low),
                     th_hm,
                     th_lm};
}

Schedule build_odb_schedule(const OdbDesign &d, bool hopping_during_fc) {
    Schedule s;
    Segment fc;
    fc.duration = d.t_fc;
    fc.modes[0] = FrequencyProgram::ramp(d.fc_high);
    fc.modes[1] = FrequencyProgram::ramp(d.fc_low);
    fc.hopping = hopping_during_fc;
    fc.label = "fc";
    s.segments.push_back(fc);
    if (d.t_b > 0.0) {
        s.segments.push_back(
            hold_segment(d.t_b, d.omega_m, d.omega_m, true, "hold"));
    }
    Segment ifc;
    ifc.duration = d.t_fc;
    ifc.modes[0] = FrequencyProgram::ramp(d.fc_high.reversed());
    ifc.modes[1] = FrequencyProgram::ramp(d.fc_low.reversed());
    ifc.hopping = hopping_during_fc;
    ifc.label = "ifc";
    s.segments.push_back(ifc);
    s.validate();
    return s;
}

Wavefunction2D to_interaction_frame(const Wavefunction2D &psi,
                                    double omega0, double omega1, double t) {
    // exp(+i w t (n + 1/2)) is a Fock phase of -w t; wrapping the angle
    // only flips the global sign.
    return apply_fock_phase(psi, omega0, omega1,
                            angle_difference(-omega0 * t, 0.0),
                            angle_difference(-omega1 * t, 0.0));
}

Eigen::MatrixXcd odb_target_amplitudes(const OdbDesign &d, int n0_in,
                                       int n1_in, int n_max) {
    Eigen::MatrixXcd c =
        apply_to_fock_product(odb_matrix(d.theta, d.params()), n0_in, n1_in,
                              n_max);
    // Interaction frame to lab frame: exp(-i H_static T3); the zero-point
    // parts combine with the vacuum phase.
    const double base = vacuum_phase(d) - 0.5 * (d.omega_h + d.omega_l) * d.t_3;
    for (Eigen::Index a = 0; a < c.rows(); ++a) {
        for (Eigen::Index b = 0; b < c.cols(); ++b) {
            const double ph = base - (d.omega_h * static_cast<double>(a) +
                                      d.omega_l * static_cast<double>(b)) *
                                         d.t_3;
            c(a, b) *= std::polar(1.0, ph);
        }
    }
    return c;
}

// ---------------------------------------------------------------- HOM

HomRun simulate_hom(const ExperimentConfig &cfg, bool hopping_during_fc,
                    bool record_snapshots) {
    const OdbDesign d = design_odb(cfg, constants::pi * cfg.theta_pi);
    const Grid1D gh = d.grid_high(cfg);
    const Grid1D gl = d.grid_low(cfg);
    const Wavefunction2D psi0 =
        product_state(fock_state(1, gh), fock_state(1, gl));

    HomRun run{.final_state = psi0};
    run.gate_11_initial = fock_populations(psi0, d.omega_m, d.omega_m, 1)(1, 1);

    const Schedule schedule = build_odb_schedule(d, hopping_during_fc);
    PropagationOptions opt;
    opt.dt = d.dt;
    opt.snapshot_stride = record_snapshots ? cfg.snapshot_stride : 0;
    opt.static_step_multiplier = cfg.static_step_multiplier;
    opt.fock_pairs = {{1, 1}, {2, 0}, {0, 2}};
    opt.gate_frequency = d.omega_m;
    opt.on_segment_end = [&](std::size_t i, double, const Wavefunction2D &s) {
        if (i == 0) {
            run.mem_11_after_fc =
                fock_populations(s, d.omega_h, d.omega_l, 1)(1, 1);
        }
    };
    PropagationResult r = propagate(psi0, schedule, d.hamiltonian(), opt);

    const Eigen::MatrixXcd target_c = odb_target_amplitudes(d, 1, 1, 2);
    const Wavefunction2D target = state_from_amplitudes(target_c, gh, gl);
    run.infidelity = 1.0 - fidelity(r.state, target).squared;

    const Eigen::MatrixXd pops =
        fock_populations(r.state, d.omega_h, d.omega_l, 2);
    run.pop_11 = pops(1, 1);
    run.pop_20 = pops(2, 0);
    run.pop_02 = pops(0, 2);

    const Eigen::MatrixXcd cn = fock_amplitudes(r.state, d.omega_h,
                                                d.omega_l, 4);
    const Eigen::MatrixXcd ct = odb_target_amplitudes(d, 1, 1, 4);
    const Complex ov = (ct.conjugate().cwiseProduct(cn)).sum();
    run.cross_validation_infidelity = 1.0 - std::norm(ov) / ct.squaredNorm();

    run.final_state = std::move(r.state);
    run.snapshots = std::move(r.snapshots);
    run.norm_drift = r.norm_drift;
    run.steps = r.steps;
    return run;
}

HomReport run_hom(const ExperimentConfig &cfg) {
    const auto t0 = Clock::now();
    OdbDesign d = design_odb(cfg, constants::pi * cfg.theta_pi);
    HomRun main = simulate_hom(cfg, cfg.hopping_during_fc, true);
    HomRun base = simulate_hom(cfg, false, false);
    const HomPhases phases = hom_target_phases(d.params());

    // Interaction-frame amplitudes against the closed-form phases; pair
    // (n0, n1) = (0, 2) carries phi_20.
    Eigen::MatrixXcd ci =
        apply_to_fock_product(odb_matrix(d.theta, d.params()), 1, 1, 2);
    ci *= std::polar(1.0, vacuum_phase(d));
    const double half_pi = 0.5 * constants::pi;
    const double e20 =
        std::abs(angle_difference(std::arg(ci(0, 2)), phases.phi_20 - half_pi));
    const double e02 =
        std::abs(angle_difference(std::arg(ci(2, 0)), phases.phi_02 - half_pi));

    HomReport rep{.design = std::move(d),
                  .main = std::move(main),
                  .baseline = std::move(base),
                  .phases = phases,
                  .phase_consistency = std::max(e20, e02)};
    rep.wall_seconds = seconds_since(t0);
    return rep;
}

// ---------------------------------------------------------------- SWAP

PhysicalPhaseGate solve_physical_phase_gate(const OdbDesign &d,
                                            const SwapPhases &phases) {
    PhysicalPhaseGate g;
    const auto solve = [&](double omega_j, double theta_jm, double phi,
                           double &tau, double &residual) {
        // Interaction-frame phase of FC, hold tau, iFC:
        // 2 Theta_jm - omega_m tau + omega_j (2 T_FC + tau).
        const double need = phi - 2.0 * theta_jm - 2.0 * omega_j * d.t_fc;
        const double detuning = omega_j - d.omega_m;
        const double raw = detuning > 0.0 ? wrap_two_pi(need) / detuning
                                          : wrap_two_pi(-need) / -detuning;
        tau = std::round(raw / d.dt) * d.dt;
        residual = angle_difference(detuning * tau, need);
    };
    solve(d.omega_h, d.theta_hm, phases.phi0, g.tau_high, g.residual_high);
    solve(d.omega_l, d.theta_lm, phases.phi1, g.tau_low, g.residual_low);
    g.duration = 4.0 * d.t_fc + g.tau_high + g.tau_low;
    return g;
}

void append_physical_phase_gate(Schedule &s, const OdbDesign &d,
                                const PhysicalPhaseGate &g) {
    const auto add = [&](int mode, const BProfile &fc, double tau,
                         const std::string &tag) {
        const double idle = mode == 0 ? d.omega_l : d.omega_h;
        Segment up;
        up.duration = d.t_fc;
        up.modes[mode] = FrequencyProgram::ramp(fc);
        up.modes[1 - mode] = FrequencyProgram::hold(idle);
        up.label = "pg_fc_" + tag;
        s.segments.push_back(up);
        if (tau > 0.0) {
            Segment hold = hold_segment(tau, d.omega_m, d.omega_m, true,
                                        "pg_hold_" + tag);
            hold.modes[1 - mode] = FrequencyProgram::hold(idle);
            s.segments.push_back(hold);
        }
        Segment down;
        down.duration = d.t_fc;
        down.modes[mode] = FrequencyProgram::ramp(fc.reversed());
        down.modes[1 - mode] = FrequencyProgram::hold(idle);
        down.label = "pg_ifc_" + tag;
        s.segments.push_back(down);
    };
    add(0, d.fc_high, g.tau_high, "high");
    add(1, d.fc_low, g.tau_low, "low");
    s.validate();
}

SwapReport run_swap_gkp(const ExperimentConfig &cfg) {
    const auto t0 = Clock::now();
    const OdbDesign d = design_odb(cfg, constants::pi * cfg.swap_theta_pi);
    const Grid1D gh = d.grid_high(cfg);
    const Grid1D gl = d.grid_low(cfg);
    GkpParams zero{cfg.gkp_delta, cfg.gkp_epsilon, cfg.gkp_s_max, 0};
    GkpParams one = zero;
    one.logical = 1;
    const Wavefunction2D psi0 =
        product_state(gkp_state(zero, gh), gkp_state(one, gl));
    const Wavefunction2D target =
        product_state(gkp_state(one, gh), gkp_state(zero, gl));

    SwapReport rep{.design = d, .phases = swap_phases(d.params())};
    rep.grid0 = gh;
    rep.grid1 = gl;
    rep.physical_phase_gate = cfg.physical_phase_gate;
    rep.compensation_phase = angle_difference(
        d.theta_hm + d.theta_lm - d.omega_m * d.t_b - 0.5 * constants::pi,
        0.0);

    Schedule schedule = build_odb_schedule(d, cfg.hopping_during_fc);
    if (cfg.physical_phase_gate) {
        rep.physical = solve_physical_phase_gate(d, rep.phases);
        append_physical_phase_gate(schedule, d, rep.physical);
    }

    const auto record = [&](const std::string &stage,
                            const Wavefunction2D &s) {
        rep.marginals.push_back({stage, marginal(s, 0), marginal(s, 1)});
    };
    record("fc_in", psi0);
    std::optional<Wavefunction2D> after_ifc;
    PropagationOptions opt;
    opt.dt = d.dt;
    opt.static_step_multiplier = cfg.static_step_multiplier;
    opt.on_segment_end = [&](std::size_t i, double,
                             const Wavefunction2D &s) {
        const std::string &label = schedule.segments[i].label;
        if (label == "fc") {
            record("fc_out", s);
            if (d.t_b == 0.0) {
                record("ifc_in", s);
            }
        } else if (label == "hold") {
            record("ifc_in", s);
        } else if (label == "ifc") {
            record("ifc_out", s);
            after_ifc = s;
        }
    };
    PropagationResult r = propagate(psi0, schedule, d.hamiltonian(), opt);
    rep.norm_drift = r.norm_drift;
    rep.steps = r.steps;

    Wavefunction2D final_state =
        cfg.physical_phase_gate
            ? to_interaction_frame(r.state, d.omega_h, d.omega_l,
                                   schedule.total_duration())
            : apply_fock_phase(r.state, d.omega_h, d.omega_l,
                               rep.compensation_phase,
                               rep.compensation_phase);
    record("phase_out", final_state);
    record("target", target);

    const Fidelity f = fidelity(final_state, target);
    rep.infidelity = 1.0 - f.magnitude;
    rep.infidelity_squared = 1.0 - f.squared;
    for (int j = 0; j < 2; ++j) {
        const std::vector<double> want = marginal(target, j);
        const double dx = j == 0 ? gh.dx() : gl.dx();
        rep.l1_compensated[j] = l1_distance(marginal(final_state, j), want, dx);
        rep.l1_uncompensated[j] = l1_distance(marginal(*after_ifc, j), want, dx);
    }
    rep.wall_seconds = seconds_since(t0);
    return rep;
}

// ---------------------------------------------------------------- detuning

TransferCheck measure_transfer(const std::string &label, double omega_a,
                               double omega_b, double kappa, double duration,
                               double dt, int grid_points) {
    const Grid1D ga = Grid1D::balanced(grid_points, omega_a);
    const Grid1D gb = Grid1D::balanced(grid_points, omega_b);
    const Wavefunction2D psi =
        product_state(fock_state(0, ga), fock_state(1, gb));
    Schedule s;
    s.segments.push_back(hold_segment(duration, omega_a, omega_b, true,
                                      "static"));
    const HamiltonianSpec spec{omega_a, omega_b, kappa, true};

    // Sample the exchange oscillation at least 20 times per period; steps
    // are merged in blocks that never straddle two samples.
    const double rate = std::hypot(omega_a - omega_b, kappa);
    PropagationOptions opt;
    opt.dt = dt;
    opt.snapshot_stride =
        rate > 0.0 ? std::max(1, static_cast<int>(std::floor(
                                     constants::two_pi / rate / 20.0 / dt)))
                   : 1000;
    opt.static_step_multiplier = std::min(8, opt.snapshot_stride);
    opt.fock_pairs = {{1, 0}};
    opt.gate_frequency = omega_a;
    const PropagationResult r = propagate(psi, s, spec, opt);

    TransferCheck c;
    c.label = label;
    c.omega_a = omega_a;
    c.omega_b = omega_b;
    c.kappa = kappa;
    c.duration = duration;
    for (const Snapshot &snap : r.snapshots) {
        c.max_transfer = std::max(c.max_transfer, snap.pop_memory[0]);
    }
    c.final_transfer = r.snapshots.back().pop_memory[0];
    const double delta = omega_a - omega_b;
    const double k2 = kappa * kappa;
    c.rabi_bound = k2 > 0.0 ? k2 / (k2 + delta * delta) : 0.0;
    return c;
}

DetuningReport run_detuning_check(const ExperimentConfig &cfg) {
    const auto t0 = Clock::now();
    cfg.validate();
    const double wh = cfg.omega_h();
    const double wl = cfg.omega_l();
    const double wm = cfg.omega_m();
    const double c = coulomb_coupling(cfg.distance_m(), cfg.mass_kg());
    const double kappa_gate = c / wm;
    const double dt = cfg.detune_dt_ns * 1e-9;
    const double t_b =
        std::round(2.0 * constants::pi * cfg.theta_pi / kappa_gate / dt) * dt;
    const int n = cfg.detune_grid_points;

    DetuningReport rep;
    rep.pairs.push_back(measure_transfer("h-l", wh, wl, c / std::sqrt(wh * wl),
                                         t_b, dt, n));
    rep.pairs.push_back(measure_transfer("h-m", wh, wm, c / std::sqrt(wh * wm),
                                         t_b, dt, n));
    rep.pairs.push_back(measure_transfer("m-l", wm, wl, c / std::sqrt(wm * wl),
                                         t_b, dt, n));
    const double t_swap = std::round(constants::pi / kappa_gate / dt) * dt;
    rep.resonant = measure_transfer("m-m", wm, wm, kappa_gate, t_swap, dt, n);
    rep.wall_seconds = seconds_since(t0);
    return rep;
}

// ---------------------------------------------------------------- tables

AdiabaticityReport run_adiabaticity_table(const ExperimentConfig &cfg) {
    cfg.validate();
    AdiabaticityReport rep;
    const double ns[3] = {1.0, 10.0, 100.0};
    const auto row = [&](const char *name, double wi) {
        const BProfile p =
            make_b_profile(wi, cfg.omega_m(), cfg.t_fc(), cfg.sigma);
        AdiabaticityRow r;
        r.ramp = name;
        r.g = p.shape().g;
        for (int k = 0; k < 3; ++k) {
            r.metric[k] = adiabaticity_metric(p, ns[k]);
            r.small_g_bound[k] = adiabaticity_small_g_bound(p, ns[k]);
        }
        r.cycles = cycle_count(p);
        rep.rows.push_back(r);
    };
    row("down", cfg.omega_h());
    row("up", cfg.omega_l());
    rep.fc_rate_khz_per_us = fc_rate(cfg);
    return rep;
}

double fc_rate(const ExperimentConfig &cfg) {
    if (!(cfg.t_fc_us > 0.0)) {
        throw DomainError("fc_rate: T_FC must be > 0");
    }
    return (cfg.omega_h_mhz - cfg.omega_m_mhz) * 1e3 / cfg.t_fc_us;
}

// ---------------------------------------------------------------- convergence

double experiment_tolerance(const std::string &experiment) {
    if (experiment == "hom") {
        return 5e-4;
    }
    if (experiment == "swap") {
        return 1e-2;
    }
    throw ConfigError("unknown experiment '" + experiment + "'");
}

ConvergenceReport run_convergence(const ExperimentConfig &cfg,
                                  const std::string &experiment) {
    const double tol = experiment_tolerance(experiment);
    const auto run = [&](double dt, int points) {
        ExperimentConfig c = cfg;
        c.dt_ns = dt * 1e9;
        c.grid_points = points;
        if (cfg.grid_span > 0.0) {
            // Keep dx fixed relative to the span when the grid doubles.
            c.grid_span = cfg.grid_span * std::sqrt(
                              static_cast<double>(points) / cfg.grid_points);
        }
        if (experiment == "hom") {
            return simulate_hom(c, c.hopping_during_fc, false).infidelity;
        }
        return run_swap_gkp(c).infidelity;
    };
    return convergence_check(run, cfg.dt(), cfg.grid_points, tol);
}

// ---------------------------------------------------------------- output

void export_pulses(const ExperimentConfig &cfg,
                   const std::filesystem::path &dir) {
    cfg.validate();
    std::filesystem::create_directories(dir);
    const auto write = [&](const char *name, double wi) {
        std::ofstream os(dir / name);
        if (!os) {
            throw DomainError(std::string("export_pulses: cannot write ") +
                              name);
        }
        write_profile_csv(os, make_b_profile(wi, cfg.omega_m(), cfg.t_fc(),
                                             cfg.sigma));
    };
    write("pulse.csv", cfg.omega_h());
    write("pulse_up.csv", cfg.omega_l());
}

nlohmann::json to_json(const ExperimentConfig &cfg) {
    nlohmann::json j;
    j["text"] = cfg.to_text();
    j["omega_h"] = cfg.omega_h();
    j["omega_l"] = cfg.omega_l();
    j["omega_m"] = cfg.omega_m();
    j["grid_span"] = cfg.span();
    return j;
}

nlohmann::json to_json(const Schedule &schedule) {
    nlohmann::json arr = nlohmann::json::array();
    double t = 0.0;
    for (const Segment &s : schedule.segments) {
        nlohmann::json seg;
        seg["label"] = s.label;
        seg["start"] = t;
        seg["duration"] = s.duration;
        seg["hopping"] = s.hopping;
        for (int m = 0; m < 2; ++m) {
            seg["mode" + std::to_string(m)] = {
                {"kind", s.modes[m].is_static() ? "hold" : "ramp"},
                {"omega_start", s.modes[m].start_omega()},
                {"omega_end", s.modes[m].end_omega()}};
        }
        arr.push_back(seg);
        t += s.duration;
    }
    return arr;
}

namespace {

nlohmann::json design_json(const OdbDesign &d) {
    return {{"omega_h", d.omega_h},
            {"omega_l", d.omega_l},
            {"omega_m", d.omega_m},
            {"coulomb", d.coulomb},
            {"kappa_gate", d.kappa_gate},
            {"kappa_gate_hz", d.kappa_gate / constants::two_pi},
            {"kappa_static", d.kappa_static},
            {"theta_target", d.theta_target},
            {"theta", d.theta},
            {"t_fc", d.t_fc},
            {"t_b", d.t_b},
            {"t_3", d.t_3},
            {"dt", d.dt},
            {"g_high", d.fc_high.shape().g},
            {"g_low", d.fc_low.shape().g},
            {"theta_hm", d.theta_hm},
            {"theta_lm", d.theta_lm}};
}

nlohmann::json hom_run_json(const HomRun &r) {
    return {{"infidelity", r.infidelity},
            {"pop_11", r.pop_11},
            {"pop_20", r.pop_20},
            {"pop_02", r.pop_02},
            {"mem_11_after_fc", r.mem_11_after_fc},
            {"gate_11_initial", r.gate_11_initial},
            {"cross_validation_infidelity", r.cross_validation_infidelity},
            {"norm_drift", r.norm_drift},
            {"steps", r.steps}};
}

nlohmann::json transfer_json(const TransferCheck &c) {
    return {{"label", c.label},         {"omega_a", c.omega_a},
            {"omega_b", c.omega_b},     {"kappa", c.kappa},
            {"duration", c.duration},   {"max_transfer", c.max_transfer},
            {"final_transfer", c.final_transfer},
            {"rabi_bound", c.rabi_bound}};
}

nlohmann::json provenance() {
    return {{"tool", "odb"}, {"version", "1.0.0"}, {"units", "SI, rad/s"}};
}

} // namespace

nlohmann::json to_json(const HomReport &r, const ExperimentConfig &cfg) {
    nlohmann::json j;
    j["experiment"] = "hom";
    j["provenance"] = provenance();
    j["config"] = to_json(cfg);
    j["design"] = design_json(r.design);
    j["schedule"] = to_json(build_odb_schedule(r.design, cfg.hopping_during_fc));
    j["main"] = hom_run_json(r.main);
    j["baseline_no_hopping_during_fc"] = hom_run_json(r.baseline);
    j["infidelity_delta_from_fc_hopping"] =
        r.main.infidelity - r.baseline.infidelity;
    j["fidelity"] = {{"squared", 1.0 - r.main.infidelity},
                     {"magnitude", std::sqrt(1.0 - r.main.infidelity)}};
    j["target_phases"] = {{"phi_20", r.phases.phi_20},
                          {"phi_02", r.phases.phi_02},
                          {"consistency", r.phase_consistency}};
    j["wall_seconds"] = r.wall_seconds;
    return j;
}

nlohmann::json to_json(const SwapReport &r, const ExperimentConfig &cfg) {
    nlohmann::json j;
    j["experiment"] = "swap-gkp";
    j["provenance"] = provenance();
    j["config"] = to_json(cfg);
    j["design"] = design_json(r.design);
    Schedule s = build_odb_schedule(r.design, cfg.hopping_during_fc);
    if (r.physical_phase_gate) {
        append_physical_phase_gate(s, r.design, r.physical);
    }
    j["schedule"] = to_json(s);
    j["swap_phases"] = {{"phi0", r.phases.phi0}, {"phi1", r.phases.phi1}};
    j["compensation_phase"] = r.compensation_phase;
    j["physical_phase_gate"] = r.physical_phase_gate;
    if (r.physical_phase_gate) {
        j["physical"] = {{"tau_high", r.physical.tau_high},
                         {"tau_low", r.physical.tau_low},
                         {"residual_high", r.physical.residual_high},
                         {"residual_low", r.physical.residual_low},
                         {"duration", r.physical.duration}};
    }
    j["infidelity"] = r.infidelity;
    j["infidelity_squared"] = r.infidelity_squared;
    j["fidelity"] = {{"squared", 1.0 - r.infidelity_squared},
                     {"magnitude", 1.0 - r.infidelity}};
    j["l1_compensated"] = {r.l1_compensated[0], r.l1_compensated[1]};
    j["l1_uncompensated"] = {r.l1_uncompensated[0], r.l1_uncompensated[1]};
    j["norm_drift"] = r.norm_drift;
    j["steps"] = r.steps;
    j["wall_seconds"] = r.wall_seconds;
    return j;
}

nlohmann::json to_json(const DetuningReport &r) {
    nlohmann::json j;
    j["experiment"] = "detune-check";
    j["provenance"] = provenance();
    nlohmann::json pairs = nlohmann::json::array();
    for (const TransferCheck &c : r.pairs) {
        pairs.push_back(transfer_json(c));
    }
    j["pairs"] = pairs;
    j["resonant"] = transfer_json(r.resonant);
    j["wall_seconds"] = r.wall_seconds;
    return j;
}

nlohmann::json to_json(const AdiabaticityReport &r) {
    nlohmann::json j;
    j["experiment"] = "adiabaticity";
    j["provenance"] = provenance();
    nlohmann::json rows = nlohmann::json::array();
    for (const AdiabaticityRow &row : r.rows) {
        rows.push_back({{"ramp", row.ramp},
                        {"g", row.g},
                        {"n", {1, 10, 100}},
                        {"metric", row.metric},
                        {"small_g_bound", row.small_g_bound},
                        {"cycles", row.cycles}});
    }
    j["rows"] = rows;
    j["fc_rate_khz_per_us"] = r.fc_rate_khz_per_us;
    j["reference_rate_khz_per_us"] = r.reference_rate_khz_per_us;
    return j;
}

nlohmann::json to_json(const ConvergenceReport &r) {
    return {{"base", r.base},
            {"half_dt", r.half_dt},
            {"double_grid", r.double_grid},
            {"change_dt", r.change_dt},
            {"change_grid", r.change_grid},
            {"limit", r.limit},
            {"pass", r.pass}};
}

void write_json(const std::filesystem::path &path, const nlohmann::json &j) {
    std::ofstream os(path);
    if (!os) {
        throw DomainError("write_json: cannot open " + path.string());
    }
    os << std::setw(2) << j << '\n';
}

void write_outputs(const HomReport &r, const ExperimentConfig &cfg,
                   const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir);
    write_json(dir / "report.json", to_json(r, cfg));
    write_snapshots_csv(dir / "populations.csv", {{1, 1}, {2, 0}, {0, 2}},
                        r.main.snapshots);
    write_state(dir / "state_final.bin", r.main.final_state);
    export_pulses(cfg, dir);
}

void write_outputs(const SwapReport &r, const ExperimentConfig &cfg,
                   const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir);
    write_json(dir / "report.json", to_json(r, cfg));
    for (const MarginalSet &m : r.marginals) {
        write_marginal_csv(dir / ("marginals_" + m.stage + "_mode0.csv"),
                           r.grid0, m.mode0);
        write_marginal_csv(dir / ("marginals_" + m.stage + "_mode1.csv"),
                           r.grid1, m.mode1);
    }
    export_pulses(cfg, dir);
}

} // namespace odb
