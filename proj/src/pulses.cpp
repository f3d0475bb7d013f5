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

#include "odb/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "odb/constants.hpp"
#include "odb/errors.hpp"

namespace odb {

namespace {

double checked_time(const RampShape &shape, double t) {
    const double slack = 1e-12 * shape.duration;
    if (!(t >= -slack && t <= shape.duration + slack)) {
        std::ostringstream msg;
        msg << "ramp time " << t << " s outside [0, " << shape.duration
            << "]";
        throw DomainError(msg.str());
    }
    return std::clamp(t, 0.0, shape.duration);
}

} // namespace

void RampShape::validate() const {
    if (!(duration > 0.0)) {
        throw DomainError("ramp duration must be positive");
    }
    if (!(sigma > 0.0)) {
        throw DomainError("ramp width sigma must be positive");
    }
    if (!(g >= 0.0 && g < 2.0)) {
        throw DomainError("ramp amplitude g must lie in [0, 2)");
    }
}

RampSample eval_unit_ramp(const RampShape &shape, double t) {
    shape.validate();
    t = checked_time(shape, t);
    const double T = shape.duration;
    const double u = (t / T - 0.5) * shape.sigma;
    const double gauss = std::exp(-u * u);
    const double k = shape.sigma / (T * std::sqrt(constants::pi));
    return {0.5 * (1.0 + std::erf(u)), k * gauss,
            -2.0 * u * (shape.sigma / T) * k * gauss};
}

RampSample eval_ramp_derivatives(const RampShape &shape, double t) {
    const RampSample s = eval_unit_ramp(shape, t);
    const double sign = shape.direction == RampDirection::Up ? -1.0 : 1.0;
    const double a = sign * shape.g;
    return {1.0 + a * s.b, a * s.bdot, a * s.bddot};
}

double eval_ramp(const RampShape &shape, double t) {
    return eval_ramp_derivatives(shape, t).b;
}

BProfile::BProfile(RampShape shape, double omega_i, double omega_f)
    : shape_(shape), omega_i_(omega_i), omega_f_(omega_f) {
    shape_.validate();
    if (!(omega_i > 0.0 && omega_f > 0.0)) {
        throw DomainError("ramp frequencies must be positive");
    }
}

double BProfile::omega_squared(double t) const {
    const RampSample s = at(t);
    return (omega_i_ * omega_i_ / (s.b * s.b * s.b) - s.bddot) / s.b;
}

double BProfile::omega(double t) const {
    const double w2 = omega_squared(t);
    if (w2 < 0.0) {
        std::ostringstream msg;
        msg << "induced omega^2 = " << w2 << " < 0 at t = " << t << " s";
        throw UnrealizablePulseError(msg.str(), t);
    }
    return std::sqrt(w2);
}

BProfile BProfile::reversed() const {
    if (omega_i_ == omega_f_) {
        return *this;
    }
    return make_b_profile(omega_f_, omega_i_, shape_.duration, shape_.sigma);
}

BProfile make_b_profile(double omega_i, double omega_f, double duration,
                        double sigma) {
    if (!(omega_i > 0.0 && omega_f > 0.0)) {
        throw DomainError("ramp frequencies must be positive");
    }
    if (omega_i == omega_f) {
        throw DomainError(
            "degenerate ramp: omega_i == omega_f, use a hold segment");
    }
    const double ratio = std::sqrt(omega_i / omega_f);
    RampShape shape;
    shape.sigma = sigma;
    shape.duration = duration;
    if (omega_i < omega_f) {
        shape.direction = RampDirection::Up;
        shape.g = 1.0 - ratio;
    } else {
        shape.direction = RampDirection::Down;
        shape.g = ratio - 1.0;
    }
    return BProfile(shape, omega_i, omega_f);
}

BProfile make_flat_profile(double omega, double duration, double sigma) {
    return BProfile(RampShape{0.0, sigma, duration, RampDirection::Up}, omega,
                    omega);
}

double omega_of_t(const BProfile &profile, double t) {
    return profile.omega(t);
}

ProfileValidation validate_profile(const BProfile &profile,
                                   double boundary_tol, int samples) {
    samples = std::max(samples, 2);
    const double T = profile.duration();
    const RampSample first = profile.at(0.0);
    const RampSample last = profile.at(T);

    ProfileValidation v;
    v.b_start_residual = std::abs(first.b - 1.0);
    v.bdot_start_residual = std::abs(first.bdot) * T;
    v.b_end_residual =
        std::abs(last.b - std::sqrt(profile.omega_i() / profile.omega_f()));
    v.bdot_end_residual = std::abs(last.bdot) * T;
    v.min_omega_squared = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        const double t = T * k / (samples - 1);
        const double w2 = profile.omega_squared(t);
        if (w2 < v.min_omega_squared) {
            v.min_omega_squared = w2;
            v.min_omega_squared_time = t;
        }
    }
    v.pass = v.b_start_residual <= boundary_tol &&
             v.bdot_start_residual <= boundary_tol &&
             v.b_end_residual <= boundary_tol &&
             v.bdot_end_residual <= boundary_tol && v.min_omega_squared >= 0.0;
    return v;
}

double adiabaticity_metric(const BProfile &profile, double n) {
    if (n < 0.0) {
        throw DomainError("Fock index must be non-negative");
    }
    const RampSample mid = profile.at(0.5 * profile.duration());
    const double omega_dot =
        -2.0 * profile.omega_i() * mid.bdot / (mid.b * mid.b * mid.b);
    // bddot(T/2) = 0 so omega(T/2) = omega_i / b^2 exactly.
    const double omega = profile.omega_i() / (mid.b * mid.b);
    return n * std::abs(omega_dot) / (8.0 * omega * omega);
}

double adiabaticity_small_g_bound(const BProfile &profile, double n) {
    const RampShape &s = profile.shape();
    const double omega_mid = profile.omega(0.5 * s.duration);
    return std::abs(s.g) * s.sigma * n /
           (4.0 * std::sqrt(constants::pi) * omega_mid * s.duration);
}

double cycle_count(const BProfile &profile) {
    const double T = profile.duration();
    return profile.omega(0.5 * T) * T / constants::two_pi;
}

void write_profile_csv(std::ostream &os, const BProfile &profile,
                       int samples) {
    samples = std::max(samples, 2);
    const double T = profile.duration();
    const auto old_precision = os.precision(17);
    os << "t[s],b,bdot,bddot,omega[rad/s]\n";
    for (int k = 0; k < samples; ++k) {
        const double t = T * k / (samples - 1);
        const RampSample s = profile.at(t);
        os << t << ',' << s.b << ',' << s.bdot << ',' << s.bddot << ','
           << profile.omega(t) << '\n';
    }
    os.precision(old_precision);
}

} // namespace odb
