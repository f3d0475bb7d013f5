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
 * @file pulses.hpp
 *
 * Error-function ramps b(t) for frequency conversion, the trap frequency
 * ω(t) they induce through the Ermakov equation, and the adiabaticity
 * diagnostics evaluated at the ramp midpoint.
 */

#include <iosfwd>

namespace odb {

enum class RampDirection { Up, Down };

/// Shape of one erf ramp. `g` is the dimensionless amplitude, `sigma` the
/// erf width in units of the ramp duration.
struct RampShape {
    double g = 0.0;
    double sigma = 6.0;
    double duration = 0.0; // seconds
    RampDirection direction = RampDirection::Up;

    /// Throws DomainError unless duration > 0, sigma > 0 and 0 <= g < 2.
    void validate() const;
};

/// b and its first two time derivatives at one instant.
struct RampSample {
    double b = 1.0;
    double bdot = 0.0;
    double bddot = 0.0;
};

/// Normalised ramp s(t) = (1 + erf[(t/T - 1/2) sigma]) / 2 and derivatives.
RampSample eval_unit_ramp(const RampShape &shape, double t);

/// b(t) with closed-form derivatives. Up ramps fall from 1 to 1 - g, down
/// ramps rise from 1 to 1 + g (up to the erf tails).
RampSample eval_ramp_derivatives(const RampShape &shape, double t);
double eval_ramp(const RampShape &shape, double t);

/// A scaling function b(t) for one frequency conversion omega_i -> omega_f.
class BProfile {
  public:
    BProfile(RampShape shape, double omega_i, double omega_f);

    [[nodiscard]] const RampShape &shape() const noexcept { return shape_; }
    [[nodiscard]] double omega_i() const noexcept { return omega_i_; }
    [[nodiscard]] double omega_f() const noexcept { return omega_f_; }
    [[nodiscard]] double duration() const noexcept { return shape_.duration; }
    [[nodiscard]] RampDirection direction() const noexcept {
        return shape_.direction;
    }

    [[nodiscard]] RampSample at(double t) const {
        return eval_ramp_derivatives(shape_, t);
    }
    [[nodiscard]] double b(double t) const { return at(t).b; }

    /// (omega_i^2 / b^3 - bddot) / b. Can be negative for violent ramps.
    [[nodiscard]] double omega_squared(double t) const;

    /// sqrt of omega_squared; throws UnrealizablePulseError if negative.
    [[nodiscard]] double omega(double t) const;

    /// The conversion back, omega_f -> omega_i, with the same duration and
    /// width.
    [[nodiscard]] BProfile reversed() const;

  private:
    RampShape shape_;
    double omega_i_;
    double omega_f_;
};

/// Ramp taking omega_i to omega_f, with g chosen so b(T) = sqrt(omega_i/omega_f).
/// Throws DomainError for omega_i == omega_f (use a hold instead).
BProfile make_b_profile(double omega_i, double omega_f, double duration,
                        double sigma);

/// Zero-amplitude ramp: b == 1 and omega(t) == omega.
BProfile make_flat_profile(double omega, double duration, double sigma = 6.0);

double omega_of_t(const BProfile &profile, double t);

struct ProfileValidation {
    double b_start_residual = 0.0;    // |b(0) - 1|
    double bdot_start_residual = 0.0; // |bdot(0)| T
    double b_end_residual = 0.0;      // |b(T) - sqrt(omega_i/omega_f)|
    double bdot_end_residual = 0.0;   // |bdot(T)| T
    double min_omega_squared = 0.0;   // over the samples
    double min_omega_squared_time = 0.0;
    bool pass = false;
};

inline constexpr double kDefaultBoundaryTolerance = 1e-3;
inline constexpr int kDefaultValidationSamples = 1000;

ProfileValidation
validate_profile(const BProfile &profile,
                 double boundary_tol = kDefaultBoundaryTolerance,
                 int samples = kDefaultValidationSamples);

/// n |omega_dot| / (8 omega^2) at the ramp midpoint, using the midpoint
/// derivative -2 omega_i bdot / b^3 (bddot vanishes there).
double adiabaticity_metric(const BProfile &profile, double n);

/// Small-g form |g| sigma n / (4 sqrt(pi) omega(T/2) T).
double adiabaticity_small_g_bound(const BProfile &profile, double n);

/// Number of oscillation periods omega(T/2) T / 2pi during the ramp.
double cycle_count(const BProfile &profile);

/// CSV with header `t[s],b,bdot,bddot,omega[rad/s]`, `samples` rows
/// uniformly covering [0, T].
void write_profile_csv(std::ostream &os, const BProfile &profile,
                       int samples = kDefaultValidationSamples);

} // namespace odb
