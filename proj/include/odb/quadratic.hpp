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
 * @file quadratic.hpp
 *
 * Exact propagation of quadratic Hamiltonians on a 1- or 2-mode position
 * grid. A flow S = exp(J K t) on z = (x, p) is factored into
 *
 *     S = [[I, 0], [-A1, I]] [[I, B], [0, I]] [[I, 0], [-A2, I]],
 *
 * i.e. e^{-i x'A1x/2} e^{-i p'Bp/2} e^{-i x'A2x/2}: two position-diagonal
 * multiplications around one momentum-diagonal multiplication.
 */

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "odb/grid.hpp"

namespace odb {

/// exp(J K t) for H = z'Kz/2, z = (x_0..x_{m-1}, p_0..p_{m-1}).
Eigen::MatrixXd quadratic_flow(const Eigen::MatrixXd &k, double t);

struct ShearFactors {
    Eigen::MatrixXd a_first; // position phase applied first (A2)
    Eigen::MatrixXd b;       // momentum phase
    Eigen::MatrixXd a_last;  // position phase applied last (A1)
};

/// Throws NumericError when the momentum block of `s` is singular.
ShearFactors shear_factorization(const Eigen::MatrixXd &s);

/// In-place FFT workspace over the product grid of 1 or 2 modes, with
/// cached phase tables for repeated quadratic multiplications.
class SpectralEngine {
  public:
    explicit SpectralEngine(std::vector<Grid1D> grids);
    ~SpectralEngine();
    SpectralEngine(const SpectralEngine &) = delete;
    SpectralEngine &operator=(const SpectralEngine &) = delete;
    SpectralEngine(SpectralEngine &&) noexcept;
    SpectralEngine &operator=(SpectralEngine &&) noexcept;

    [[nodiscard]] int modes() const noexcept;
    [[nodiscard]] std::size_t size() const noexcept;
    [[nodiscard]] const std::vector<Grid1D> &grids() const noexcept;

    [[nodiscard]] std::span<std::complex<double>> data() noexcept;
    [[nodiscard]] std::span<const std::complex<double>> data() const noexcept;

    void load(std::span<const std::complex<double>> amplitudes);

    /// Unnormalised forward transform to momentum space.
    void forward();
    /// Inverse transform; the 1/N factor is folded into momentum phases,
    /// so call this only after multiply_momentum_phase.
    void backward();

    /// psi(x) *= exp(-i x'Ax/2).
    void multiply_position_phase(const Eigen::MatrixXd &a);
    /// psi(p) *= exp(-i p'Bp/2) / N; the buffer must hold the forward
    /// transform.
    void multiply_momentum_phase(const Eigen::MatrixXd &b);

    /// Applies the metaplectic operator with flow factors `f`.
    void apply_shears(const ShearFactors &f);

    /// exp(-i H t) for the quadratic form `k`, split into sub-steps whose
    /// flows stay close to the identity.
    void apply_quadratic(const Eigen::MatrixXd &k, double t,
                         double max_angle = 0.05);

    /// Mass within `fraction` of the grid edge in position space and in
    /// momentum space (the larger of the two), relative to total norm.
    [[nodiscard]] double edge_mass(double fraction) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace odb
