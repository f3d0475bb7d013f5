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

#include "odb/lr_engine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "odb/constants.hpp"
#include "odb/errors.hpp"

namespace odb {

double SingleModeTransform::bogoliubov_residual() const {
    double r = std::abs(m_(1, 1) - std::conj(m_(0, 0)));
    r = std::max(r, std::abs(m_(1, 0) - std::conj(m_(0, 1))));
    r = std::max(r,
                 std::abs(std::norm(m_(0, 0)) - std::norm(m_(0, 1)) - 1.0));
    return r;
}

namespace {

struct SimpsonPanel {
    double a, m, b;
    double fa, fm, fb;
    double whole;
};

double simpson_recurse(const std::function<double(double)> &f,
                       const SimpsonPanel &p, double tol, int depth) {
    const double lm = 0.5 * (p.a + p.m);
    const double rm = 0.5 * (p.m + p.b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (p.m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
    const double right = (p.b - p.m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
    const double delta = left + right - p.whole;
    if (std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    if (depth <= 0) {
        throw NumericError("adaptive Simpson: recursion limit reached");
    }
    return simpson_recurse(f, {p.a, lm, p.m, p.fa, flm, p.fm, left},
                           0.5 * tol, depth - 1) +
           simpson_recurse(f, {p.m, rm, p.b, p.fm, frm, p.fb, right},
                           0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)> &f, double a,
                        double b, double abs_tol, int max_depth) {
    if (a == b) {
        return 0.0;
    }
    // A handful of seed panels keeps narrow features from hiding between
    // the first three nodes.
    constexpr int seeds = 16;
    const double h = (b - a) / seeds;
    double total = 0.0;
    for (int k = 0; k < seeds; ++k) {
        const double x0 = a + k * h;
        const double x1 = (k == seeds - 1) ? b : x0 + h;
        const double xm = 0.5 * (x0 + x1);
        const double f0 = f(x0);
        const double fm = f(xm);
        const double f1 = f(x1);
        const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += simpson_recurse(f, {x0, xm, x1, f0, fm, f1, whole},
                                 abs_tol / seeds, max_depth);
    }
    return total;
}

double theta_integral(const BProfile &profile, double t0, double t1,
                      double abs_tol) {
    const double wi = profile.omega_i();
    const auto integrand = [&](double t) {
        const double b = profile.b(t);
        return -wi / (b * b);
    };
    return adaptive_simpson(integrand, t0, t1, abs_tol);
}

double theta_phase(const BProfile &profile, double t_end, double abs_tol) {
    return theta_integral(profile, 0.0, t_end, abs_tol);
}

double theta_phase(const BProfile &profile) {
    return theta_phase(profile, profile.duration());
}

BogoliubovPair bogoliubov_at(const BProfile &profile, double t) {
    const RampSample s = profile.at(t);
    const double wi = profile.omega_i();
    const double wf = profile.omega_f();
    const double pre = 0.5 * std::sqrt(wi / wf);
    const double im = -s.bdot / wi;
    return {pre * std::complex<double>(1.0 / s.b + wf / wi * s.b, im),
            pre * std::complex<double>(1.0 / s.b - wf / wi * s.b, im)};
}

SingleModeTransform fc_matrix(const BProfile &profile) {
    const double theta = theta_phase(profile);
    const BogoliubovPair bz = bogoliubov_at(profile, profile.duration());
    const std::complex<double> ph = std::polar(1.0, theta);
    const std::complex<double> phc = std::conj(ph);
    Eigen::Matrix2cd m;
    m << std::conj(bz.eta) * ph, -bz.zeta * phc, -std::conj(bz.zeta) * ph,
        bz.eta * phc;
    return SingleModeTransform(m);
}

SqueezeParams squeeze_params(double omega_i, double omega_f) {
    if (!(omega_i > 0.0 && omega_f > 0.0)) {
        throw DomainError("squeeze_params: frequencies must be positive");
    }
    const double r = 0.5 * std::log(omega_f / omega_i);
    return {r, std::cosh(r), std::sinh(r)};
}

namespace {

ErmakovTrajectory rk4_ermakov(const std::function<double(double)> &omega_fn,
                              double omega_i, double duration, long steps) {
    const double h = duration / static_cast<double>(steps);
    const double wi2 = omega_i * omega_i;
    const auto accel = [&](double t, double b) {
        const double w = omega_fn(t);
        return wi2 / (b * b * b) - w * w * b;
    };

    ErmakovTrajectory out;
    out.t.reserve(steps + 1);
    out.b.reserve(steps + 1);
    out.bdot.reserve(steps + 1);
    double b = 1.0;
    double v = 0.0;
    out.t.push_back(0.0);
    out.b.push_back(b);
    out.bdot.push_back(v);
    for (long k = 0; k < steps; ++k) {
        const double t = h * static_cast<double>(k);
        const double k1b = v;
        const double k1v = accel(t, b);
        const double k2b = v + 0.5 * h * k1v;
        const double k2v = accel(t + 0.5 * h, b + 0.5 * h * k1b);
        const double k3b = v + 0.5 * h * k2v;
        const double k3v = accel(t + 0.5 * h, b + 0.5 * h * k2b);
        const double k4b = v + h * k3v;
        const double k4v = accel(t + h, b + h * k3b);
        b += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if (!(b > 0.0) || !std::isfinite(b)) {
            throw ConvergenceError(
                "Ermakov step too large: b left the positive axis");
        }
        out.t.push_back(h * static_cast<double>(k + 1));
        out.b.push_back(b);
        out.bdot.push_back(v);
    }
    return out;
}

} // namespace

double default_ermakov_step(double omega_max) {
    return constants::two_pi / omega_max / 1600.0;
}

ErmakovTrajectory
ermakov_forward_solve(const std::function<double(double)> &omega_fn,
                      double omega_i, double duration, double dt,
                      double halving_tol) {
    if (!(duration > 0.0 && dt > 0.0 && omega_i > 0.0)) {
        throw DomainError("ermakov_forward_solve: non-positive argument");
    }
    const long steps =
        std::max(1L, static_cast<long>(std::ceil(duration / dt - 1e-9)));
    ErmakovTrajectory coarse = rk4_ermakov(omega_fn, omega_i, duration, steps);
    const ErmakovTrajectory fine =
        rk4_ermakov(omega_fn, omega_i, duration, 2 * steps);
    double diff = 0.0;
    for (long k = 0; k <= steps; ++k) {
        diff = std::max(diff, std::abs(coarse.b[k] - fine.b[2 * k]));
    }
    coarse.halving_difference = diff;
    if (diff > halving_tol) {
        std::ostringstream msg;
        msg << "Ermakov step too large: halving changed b by " << diff
            << " > " << halving_tol;
        throw ConvergenceError(msg.str());
    }
    return coarse;
}

void write_bogoliubov_csv(std::ostream &os, const BProfile &profile,
                          int samples) {
    samples = std::max(samples, 2);
    const double T = profile.duration();
    const auto old_precision = os.precision(17);
    os << "t[s],b,bdot,bddot,omega[rad/s],eta_re,eta_im,zeta_re,zeta_im\n";
    for (int k = 0; k < samples; ++k) {
        const double t = T * k / (samples - 1);
        const RampSample s = profile.at(t);
        const BogoliubovPair bz = bogoliubov_at(profile, t);
        os << t << ',' << s.b << ',' << s.bdot << ',' << s.bddot << ','
           << profile.omega(t) << ',' << bz.eta.real() << ','
           << bz.eta.imag() << ',' << bz.zeta.real() << ','
           << bz.zeta.imag() << '\n';
    }
    os.precision(old_precision);
}

} // namespace odb
