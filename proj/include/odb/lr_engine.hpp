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
 * @file lr_engine.hpp
 *
 * Lewis–Riesenfeld analytics for one time-dependent harmonic oscillator:
 * the dynamical phase Θ, Bogoliubov coefficients (η, ζ), the 2x2 transfer
 * matrix of a frequency conversion on (a, a†), the basis-change squeeze,
 * and a forward Ermakov integrator used as an independent check on the
 * closed-form b(t).
 */

#include <complex>
#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "odb/pulses.hpp"

namespace odb {

struct BogoliubovPair {
    std::complex<double> eta{1.0, 0.0};
    std::complex<double> zeta{0.0, 0.0};

    /// | |eta|^2 - |zeta|^2 - 1 |
    [[nodiscard]] double constraint_residual() const {
        return std::abs(std::norm(eta) - std::norm(zeta) - 1.0);
    }
};

/// 2x2 matrix acting on (a, a†).
class SingleModeTransform {
  public:
    SingleModeTransform() : m_(Eigen::Matrix2cd::Identity()) {}
    explicit SingleModeTransform(const Eigen::Matrix2cd &m) : m_(m) {}

    [[nodiscard]] const Eigen::Matrix2cd &matrix() const noexcept {
        return m_;
    }
    [[nodiscard]] std::complex<double> operator()(int r, int c) const {
        return m_(r, c);
    }

    /// Largest violation of the conjugate-pair layout and of
    /// |m00|^2 - |m01|^2 = 1.
    [[nodiscard]] double bogoliubov_residual() const;

    friend SingleModeTransform operator*(const SingleModeTransform &a,
                                         const SingleModeTransform &b) {
        return SingleModeTransform(a.m_ * b.m_);
    }

  private:
    Eigen::Matrix2cd m_;
};

inline constexpr double kThetaTolerance = 1e-9;

/// Θ(t_end) = -∫_0^t_end omega_i / b^2 dt by adaptive Simpson quadrature.
double theta_phase(const BProfile &profile, double t_end,
                   double abs_tol = kThetaTolerance);
/// Θ over the full ramp.
double theta_phase(const BProfile &profile);

/// -∫_{t0}^{t1} omega_i / b^2 dt.
double theta_integral(const BProfile &profile, double t0, double t1,
                      double abs_tol = kThetaTolerance);

/// Adaptive Simpson quadrature with Richardson correction. Throws
/// NumericError when the recursion limit is hit before the tolerance.
double adaptive_simpson(const std::function<double(double)> &f, double a,
                        double b, double abs_tol, int max_depth = 48);

BogoliubovPair bogoliubov_at(const BProfile &profile, double t);

/// Transfer matrix [[η* e^{iΘ}, -ζ e^{-iΘ}], [-ζ* e^{iΘ}, η e^{-iΘ}]] of the
/// conversion, evaluated at the end of the ramp.
SingleModeTransform fc_matrix(const BProfile &profile);

struct SqueezeParams {
    double r = 0.0;
    double cosh_r = 1.0;
    double sinh_r = 0.0;
};

/// r = log sqrt(omega_f / omega_i).
SqueezeParams squeeze_params(double omega_i, double omega_f);

struct ErmakovTrajectory {
    std::vector<double> t;
    std::vector<double> b;
    std::vector<double> bdot;
    double halving_difference = 0.0; // max |b_dt - b_dt/2| on shared nodes
};

inline constexpr double kErmakovHalvingTolerance = 1e-8;

/// Integrates bddot + omega(t)^2 b = omega_i^2 / b^3 from b(0)=1, bdot(0)=0
/// with classical RK4. The run is repeated at dt/2 and a ConvergenceError
/// is thrown if the two disagree by more than `halving_tol`.
ErmakovTrajectory
ermakov_forward_solve(const std::function<double(double)> &omega_fn,
                      double omega_i, double duration, double dt,
                      double halving_tol = kErmakovHalvingTolerance);

/// Default step (2 pi / omega_max) / 1600.
double default_ermakov_step(double omega_max);

/// Pulse CSV columns plus eta_re, eta_im, zeta_re, zeta_im.
void write_bogoliubov_csv(std::ostream &os, const BProfile &profile,
                          int samples = kDefaultValidationSamples);

} // namespace odb
