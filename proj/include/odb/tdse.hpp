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
 * @file tdse.hpp
 *
 * Two-mode propagation on the product position grid. Coordinates of mode
 * j are scaled by its static frequency omega_j, and
 *
 *     H = sum_j [omega_j p_j^2 / 2 + (omega_j(t)^2 / omega_j) x_j^2 / 2]
 *         + (kappa / 2)(x_0 x_1 + p_0 p_1),
 *
 * so the hopping term reads (kappa / 2)(a_0^dag a_1 + h.c.).
 *
 * The default integrator applies exp(-i H(t_mid) dt) exactly through a
 * shear factorization of the classical flow. A plain Strang splitting is
 * kept for comparison.
 */

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "odb/pulses.hpp"
#include "odb/states.hpp"

namespace odb {

/// Frequency of one mode over a segment: a constant or a ramp.
class FrequencyProgram {
  public:
    static FrequencyProgram hold(double omega);
    static FrequencyProgram ramp(BProfile profile);

    /// omega(t)^2 at segment-local time t. Throws UnrealizablePulseError if
    /// the ramp asks for a negative stiffness.
    [[nodiscard]] double omega_squared(double t) const;
    [[nodiscard]] double start_omega() const;
    [[nodiscard]] double end_omega() const;
    [[nodiscard]] bool is_static() const noexcept {
        return !profile_.has_value();
    }
    [[nodiscard]] const std::optional<BProfile> &profile() const noexcept {
        return profile_;
    }
    /// Largest omega over `samples` points of a ramp of length `duration`.
    [[nodiscard]] double max_omega(double duration, int samples = 400) const;

  private:
    FrequencyProgram(double omega, std::optional<BProfile> profile)
        : omega_(omega), profile_(std::move(profile)) {}
    double omega_;
    std::optional<BProfile> profile_;
};

struct Segment {
    double duration = 0.0; // s
    FrequencyProgram modes[2] = {FrequencyProgram::hold(1.0),
                                 FrequencyProgram::hold(1.0)};
    bool hopping = true;
    std::string label;
};

struct Schedule {
    std::vector<Segment> segments;

    [[nodiscard]] double total_duration() const;
    /// Throws ConfigError on non-positive durations, ramp length mismatch or
    /// frequency jumps between segments.
    void validate() const;
};

struct HamiltonianSpec {
    double omega0 = 0.0; // static frequency of mode 0, rad/s
    double omega1 = 0.0;
    double kappa = 0.0;  // rad/s
    bool include_hopping = true;

    void validate() const;
    /// K with H = z'Kz/2, z = (x0, x1, p0, p1).
    [[nodiscard]] Eigen::Matrix4d quadratic_form(double omega0_sq,
                                                 double omega1_sq,
                                                 bool hopping) const;
};

/// V/hbar over the product grid (mode-0-major) for instantaneous squared
/// frequencies.
std::vector<double> build_potential(const HamiltonianSpec &spec,
                                    const Grid1D &g0, const Grid1D &g1,
                                    double omega0_sq, double omega1_sq,
                                    bool hopping);
/// T/hbar over the momentum product grid in FFT ordering.
std::vector<double> build_kinetic(const HamiltonianSpec &spec,
                                  const Grid1D &g0, const Grid1D &g1,
                                  bool hopping);

/// <H> for the given instantaneous squared frequencies.
double energy_expectation(const Wavefunction2D &psi,
                          const HamiltonianSpec &spec, double omega0_sq,
                          double omega1_sq, bool hopping);

enum class Integrator { ExactQuadratic, Strang };

struct Snapshot {
    double t = 0.0;
    double norm = 0.0;
    std::vector<double> pop_memory; // one entry per Fock pair
    std::vector<double> pop_gate;
};

struct PropagationOptions {
    double dt = 2e-9;
    int snapshot_stride = 0; // in dt steps; 0 disables snapshots
    Integrator integrator = Integrator::ExactQuadratic;
    /// Static segments advance this many dt per step (ExactQuadratic only).
    int static_step_multiplier = 8;
    double norm_budget = 1e-8;
    std::vector<std::pair<int, int>> fock_pairs;
    double gate_frequency = 0.0; // reference of the gate basis, rad/s
    std::function<void(std::size_t, double, const Wavefunction2D &)>
        on_segment_end;
};

struct PropagationResult {
    Wavefunction2D state;
    std::vector<Snapshot> snapshots;
    long long steps = 0;
    double norm_drift = 0.0;
};

/// Throws ConfigError if dt exceeds a fiftieth of the shortest period or
/// any ramp gets fewer than 100 steps, and ConvergenceError when the norm
/// leaves the budget.
PropagationResult propagate(const Wavefunction2D &psi,
                            const Schedule &schedule,
                            const HamiltonianSpec &spec,
                            const PropagationOptions &options);

/// CSV with columns t[s], norm, pop_mem(n0,n1)..., pop_gate(n0,n1)...
void write_snapshots_csv(const std::filesystem::path &path,
                         const std::vector<std::pair<int, int>> &pairs,
                         const std::vector<Snapshot> &snapshots);

struct ConvergenceReport {
    double base = 0.0;
    double half_dt = 0.0;
    double double_grid = 0.0;
    double change_dt = 0.0;
    double change_grid = 0.0;
    double limit = 0.0; // 10% of the tolerance
    bool pass = false;
};

/// Reruns `run(dt, grid_points)` at dt/2 and at twice the grid size and
/// compares the returned metric.
ConvergenceReport
convergence_check(const std::function<double(double, int)> &run, double dt,
                  int grid_points, double tolerance);

} // namespace odb
