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
 * @file states.hpp
 *
 * One- and two-mode wavefunctions sampled on uniform position grids.
 *
 * Amplitudes are continuum values psi(x_i), so the squared norm is the
 * rectangle rule sum |psi|^2 dx (exact for band-limited periodic data).
 * Two-mode amplitudes are stored mode-0-major: index i0 * n1 + i1.
 *
 * The grid's scale frequency fixes the dimensionless coordinate. Fock
 * states of a different oscillator frequency are obtained by rescaling,
 * x_ref = sqrt(omega_ref / omega_grid) x.
 */

#include <complex>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "odb/grid.hpp"

namespace odb {

using Complex = std::complex<double>;

struct Wavefunction1D {
    Grid1D grid;
    std::vector<Complex> amplitudes;

    Wavefunction1D(Grid1D g, std::vector<Complex> a);
    explicit Wavefunction1D(Grid1D g);

    [[nodiscard]] double norm_squared() const;
    /// Returns the norm before normalising.
    double normalize();
};

struct Wavefunction2D {
    Grid1D grid0;
    Grid1D grid1;
    std::vector<Complex> amplitudes;

    Wavefunction2D(Grid1D g0, Grid1D g1, std::vector<Complex> a);
    Wavefunction2D(Grid1D g0, Grid1D g1);

    [[nodiscard]] const Grid1D &grid(int mode) const {
        return mode == 0 ? grid0 : grid1;
    }
    [[nodiscard]] Complex &at(int i0, int i1) {
        return amplitudes[static_cast<std::size_t>(i0) * grid1.size() + i1];
    }
    [[nodiscard]] const Complex &at(int i0, int i1) const {
        return amplitudes[static_cast<std::size_t>(i0) * grid1.size() + i1];
    }
    [[nodiscard]] double cell() const { return grid0.dx() * grid1.dx(); }
    [[nodiscard]] double norm_squared() const;
    double normalize();

    /// Row-major view: rows index mode 0.
    [[nodiscard]] Eigen::MatrixXcd as_matrix() const;
    static Wavefunction2D from_matrix(Grid1D g0, Grid1D g1,
                                      const Eigen::MatrixXcd &m);
};

Wavefunction2D product_state(const Wavefunction1D &mode0,
                             const Wavefunction1D &mode1);

/// Normalised oscillator eigenfunctions h_0..h_{n_max} at `xs`, one per row.
Eigen::MatrixXd hermite_functions(int n_max, std::span<const double> xs);

/// |n> of the oscillator at the grid's own scale frequency.
Wavefunction1D fock_state(int n, const Grid1D &grid);

/// |n; omega_ref> sampled in the coordinate of `grid`.
Wavefunction1D fock_state_at(int n, const Grid1D &grid, double omega_ref);

struct GkpParams {
    double delta = 0.3;
    double epsilon = 0.3;
    int s_max = 6;
    int logical = 0;

    void validate() const;
};

/// Finite-energy GKP codeword in the grid coordinate. Throws
/// ResolutionError when more than 1e-8 of the mass falls off the grid.
Wavefunction1D gkp_state(const GkpParams &params, const Grid1D &grid);

/// Same physical state on the grid of another reference frequency, by
/// band-limited interpolation. Throws ResolutionError if more than 1e-8
/// of the norm is lost.
Wavefunction1D rescale_reference(const Wavefunction1D &psi,
                                 double new_frequency);
Wavefunction2D rescale_reference(const Wavefunction2D &psi,
                                 double new_frequency0,
                                 double new_frequency1);

/// <n; omega_ref|psi> for n = 0..n_max.
Eigen::VectorXcd fock_amplitudes(const Wavefunction1D &psi, double omega_ref,
                                 int n_max);
/// <n0, n1; omega_ref0, omega_ref1|psi>; rows index n0.
Eigen::MatrixXcd fock_amplitudes(const Wavefunction2D &psi,
                                 double omega_ref0, double omega_ref1,
                                 int n_max);

Eigen::VectorXd fock_populations(const Wavefunction1D &psi, double omega_ref,
                                 int n_max);
Eigen::MatrixXd fock_populations(const Wavefunction2D &psi, double omega_ref0,
                                 double omega_ref1, int n_max);

enum class PhaseGateMethod {
    Rotation,  // exact phase-space rotation on the grid
    Expansion, // Fock expansion to n_cut, phase, resum
};

struct FockPhaseOptions {
    PhaseGateMethod method = PhaseGateMethod::Rotation;
    int n_cut = 48;
    double residual_tol = 1e-10;
};

/// Multiplies |n; omega_ref> by exp(-i phi (n + 1/2)).
Wavefunction1D apply_fock_phase(const Wavefunction1D &psi, double omega_ref,
                                double phi, const FockPhaseOptions &opt = {});
Wavefunction2D apply_fock_phase(const Wavefunction2D &psi,
                                double omega_ref0, double omega_ref1,
                                double phi0, double phi1,
                                const FockPhaseOptions &opt = {});

/// <(p^2 + x^2)/2> in the grid coordinate.
double oscillator_energy(const Wavefunction1D &psi);

struct Fidelity {
    Complex overlap;      // <target|psi>
    double squared = 0.0; // |<target|psi>|^2
    double magnitude = 0.0;
};

Complex inner_product(const Wavefunction1D &a, const Wavefunction1D &b);
Complex inner_product(const Wavefunction2D &a, const Wavefunction2D &b);
Fidelity fidelity(const Wavefunction1D &psi, const Wavefunction1D &target);
Fidelity fidelity(const Wavefunction2D &psi, const Wavefunction2D &target);

/// Position density of one mode; sum(density) * dx == norm.
std::vector<double> marginal(const Wavefunction2D &psi, int mode);
std::vector<double> density(const Wavefunction1D &psi);

/// Integral of |a - b| over a grid with spacing dx.
double l1_distance(std::span<const double> a, std::span<const double> b,
                   double dx);

/// Binary dump: float64 LE header (n0, n1, L, omega0, omega1) followed by
/// interleaved re/im float64 amplitudes, mode-0-major.
void write_state(const std::filesystem::path &path,
                 const Wavefunction2D &psi);
Wavefunction2D read_state(const std::filesystem::path &path);

/// CSV with header `x,density`.
void write_marginal_csv(const std::filesystem::path &path, const Grid1D &grid,
                        std::span<const double> density);

} // namespace odb
