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

#include "odb/tdse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "odb/constants.hpp"
#include "odb/errors.hpp"
#include "odb/quadratic.hpp"

namespace odb {

namespace {

using RowMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr int kMinRampSteps = 100;
constexpr double kStepsPerPeriod = 50.0;

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

long long step_count(double duration, double dt) {
    return std::max(1LL, static_cast<long long>(
                             std::ceil(duration / dt - 1e-9)));
}

Eigen::MatrixXcd fock_rows(const Grid1D &g, double omega_ref, int n_max) {
    const double s = std::sqrt(omega_ref / g.scale_frequency());
    std::vector<double> xs(g.size());
    for (int i = 0; i < g.size(); ++i) {
        xs[i] = s * g.x(i);
    }
    return (hermite_functions(n_max, xs) * std::sqrt(s)).cast<Complex>();
}

} // namespace

FrequencyProgram FrequencyProgram::hold(double omega) {
    if (!(omega > 0.0)) {
        throw DomainError("FrequencyProgram: omega must be > 0");
    }
    return {omega, std::nullopt};
}

FrequencyProgram FrequencyProgram::ramp(BProfile profile) {
    const double w = profile.omega_i();
    return {w, std::move(profile)};
}

double FrequencyProgram::omega_squared(double t) const {
    if (!profile_) {
        return omega_ * omega_;
    }
    const double w2 = profile_->omega_squared(t);
    if (w2 < 0.0) {
        throw UnrealizablePulseError(
            "FrequencyProgram: ramp requires negative stiffness", t);
    }
    return w2;
}

double FrequencyProgram::start_omega() const {
    return profile_ ? profile_->omega_i() : omega_;
}

double FrequencyProgram::end_omega() const {
    return profile_ ? profile_->omega_f() : omega_;
}

double FrequencyProgram::max_omega(double duration, int samples) const {
    if (!profile_) {
        return omega_;
    }
    double w = std::max(profile_->omega_i(), profile_->omega_f());
    for (int i = 0; i <= samples; ++i) {
        const double t = duration * i / samples;
        w = std::max(w, std::sqrt(std::max(0.0, omega_squared(t))));
    }
    return w;
}

double Schedule::total_duration() const {
    double t = 0.0;
    for (const Segment &s : segments) {
        t += s.duration;
    }
    return t;
}

void Schedule::validate() const {
    if (segments.empty()) {
        throw ConfigError("Schedule: no segments");
    }
    for (std::size_t k = 0; k < segments.size(); ++k) {
        const Segment &s = segments[k];
        if (!(s.duration > 0.0)) {
            throw ConfigError("Schedule: segment '" + s.label +
                              "' has non-positive duration");
        }
        for (const FrequencyProgram &p : s.modes) {
            if (p.profile() &&
                !close_rel(p.profile()->duration(), s.duration, 1e-9)) {
                throw ConfigError("Schedule: ramp length differs from segment '" +
                                  s.label + "'");
            }
        }
        if (k == 0) {
            continue;
        }
        for (int m = 0; m < 2; ++m) {
            const double a = segments[k - 1].modes[m].end_omega();
            const double b = s.modes[m].start_omega();
            if (!close_rel(a, b, 1e-9)) {
                throw ConfigError("Schedule: frequency jump into segment '" +
                                  s.label + "'");
            }
        }
    }
}

void HamiltonianSpec::validate() const {
    if (!(omega0 > 0.0) || !(omega1 > 0.0)) {
        throw DomainError("HamiltonianSpec: frequencies must be > 0");
    }
    if (kappa < 0.0) {
        throw DomainError("HamiltonianSpec: kappa must be >= 0");
    }
}

Eigen::Matrix4d HamiltonianSpec::quadratic_form(double omega0_sq,
                                                double omega1_sq,
                                                bool hopping) const {
    const double c = (hopping && include_hopping) ? 0.5 * kappa : 0.0;
    Eigen::Matrix4d k = Eigen::Matrix4d::Zero();
    k(0, 0) = omega0_sq / omega0;
    k(1, 1) = omega1_sq / omega1;
    k(0, 1) = k(1, 0) = c;
    k(2, 2) = omega0;
    k(3, 3) = omega1;
    k(2, 3) = k(3, 2) = c;
    return k;
}

std::vector<double> build_potential(const HamiltonianSpec &spec,
                                    const Grid1D &g0, const Grid1D &g1,
                                    double omega0_sq, double omega1_sq,
                                    bool hopping) {
    const Eigen::Matrix4d k = spec.quadratic_form(omega0_sq, omega1_sq,
                                                  hopping);
    std::vector<double> v(static_cast<std::size_t>(g0.size()) * g1.size());
    for (int i = 0; i < g0.size(); ++i) {
        const double x0 = g0.x(i);
        for (int j = 0; j < g1.size(); ++j) {
            const double x1 = g1.x(j);
            v[static_cast<std::size_t>(i) * g1.size() + j] =
                0.5 * (k(0, 0) * x0 * x0 + k(1, 1) * x1 * x1) +
                k(0, 1) * x0 * x1;
        }
    }
    return v;
}

std::vector<double> build_kinetic(const HamiltonianSpec &spec,
                                  const Grid1D &g0, const Grid1D &g1,
                                  bool hopping) {
    const Eigen::Matrix4d k = spec.quadratic_form(1.0, 1.0, hopping);
    std::vector<double> t(static_cast<std::size_t>(g0.size()) * g1.size());
    for (int i = 0; i < g0.size(); ++i) {
        const double p0 = g0.p(i);
        for (int j = 0; j < g1.size(); ++j) {
            const double p1 = g1.p(j);
            t[static_cast<std::size_t>(i) * g1.size() + j] =
                0.5 * (k(2, 2) * p0 * p0 + k(3, 3) * p1 * p1) +
                k(2, 3) * p0 * p1;
        }
    }
    return t;
}

double energy_expectation(const Wavefunction2D &psi,
                          const HamiltonianSpec &spec, double omega0_sq,
                          double omega1_sq, bool hopping) {
    const std::vector<double> v = build_potential(
        spec, psi.grid0, psi.grid1, omega0_sq, omega1_sq, hopping);
    const std::vector<double> t =
        build_kinetic(spec, psi.grid0, psi.grid1, hopping);
    double ev = 0.0;
    double nx = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double w = std::norm(psi.amplitudes[i]);
        ev += w * v[i];
        nx += w;
    }
    SpectralEngine engine({psi.grid0, psi.grid1});
    engine.load(psi.amplitudes);
    engine.forward();
    const auto d = engine.data();
    double et = 0.0;
    double np = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double w = std::norm(d[i]);
        et += w * t[i];
        np += w;
    }
    return ev / nx + et / np;
}

PropagationResult propagate(const Wavefunction2D &psi,
                            const Schedule &schedule,
                            const HamiltonianSpec &spec,
                            const PropagationOptions &opt) {
    schedule.validate();
    spec.validate();
    if (!close_rel(psi.grid0.scale_frequency(), spec.omega0, 1e-12) ||
        !close_rel(psi.grid1.scale_frequency(), spec.omega1, 1e-12)) {
        throw DomainError(
            "propagate: grid scale frequencies must equal the static ones");
    }
    if (!(opt.dt > 0.0) || opt.static_step_multiplier < 1) {
        throw ConfigError("propagate: dt and step multiplier must be > 0");
    }

    double omega_max = std::max(spec.omega0, spec.omega1);
    for (const Segment &s : schedule.segments) {
        for (const FrequencyProgram &p : s.modes) {
            omega_max = std::max(omega_max, p.max_omega(s.duration));
        }
        const bool ramp = !s.modes[0].is_static() || !s.modes[1].is_static();
        if (ramp && step_count(s.duration, opt.dt) < kMinRampSteps) {
            throw ConfigError("propagate: segment '" + s.label +
                              "' needs at least 100 steps");
        }
    }
    if (opt.dt > constants::two_pi / omega_max / kStepsPerPeriod) {
        throw ConfigError("propagate: dt does not resolve the fastest "
                          "oscillation (need 50 steps per period)");
    }

    const Grid1D &g0 = psi.grid0;
    const Grid1D &g1 = psi.grid1;
    SpectralEngine engine({g0, g1});
    engine.load(psi.amplitudes);
    const double norm0 = psi.norm_squared();
    const double cell = psi.cell();

    int n_max = 0;
    for (const auto &[a, b] : opt.fock_pairs) {
        if (a < 0 || b < 0) {
            throw DomainError("propagate: Fock pairs must be non-negative");
        }
        n_max = std::max({n_max, a, b});
    }
    const double gate = opt.gate_frequency > 0.0
                            ? opt.gate_frequency
                            : std::sqrt(spec.omega0 * spec.omega1);
    const Eigen::MatrixXcd mem0 = fock_rows(g0, spec.omega0, n_max);
    const Eigen::MatrixXcd mem1 = fock_rows(g1, spec.omega1, n_max);
    const Eigen::MatrixXcd gate0 = fock_rows(g0, gate, n_max);
    const Eigen::MatrixXcd gate1 = fock_rows(g1, gate, n_max);

    PropagationResult result{psi, {}, 0, 0.0};
    Eigen::Matrix2d pending = Eigen::Matrix2d::Zero();
    bool has_pending = false;

    const auto flush = [&] {
        if (has_pending) {
            engine.multiply_position_phase(pending);
            pending.setZero();
            has_pending = false;
        }
    };
    const auto shear_step = [&](const ShearFactors &f) {
        pending += f.a_first;
        engine.multiply_position_phase(pending);
        engine.forward();
        engine.multiply_momentum_phase(f.b);
        engine.backward();
        pending = f.a_last;
        has_pending = true;
    };
    const auto strang_step = [&](const Eigen::Matrix4d &k, double h) {
        const Eigen::Matrix2d kx = k.topLeftCorner<2, 2>();
        const Eigen::Matrix2d kp = k.bottomRightCorner<2, 2>();
        engine.forward();
        engine.multiply_momentum_phase(kp * (0.5 * h));
        engine.backward();
        engine.multiply_position_phase(kx * h);
        engine.forward();
        engine.multiply_momentum_phase(kp * (0.5 * h));
        engine.backward();
    };
    const auto check_norm = [&]() {
        double s = 0.0;
        for (const Complex &a : engine.data()) {
            s += std::norm(a);
        }
        const double norm = s * cell;
        const double drift = std::abs(norm - norm0);
        result.norm_drift = std::max(result.norm_drift, drift);
        if (drift > opt.norm_budget) {
            throw ConvergenceError("propagate: norm drift " +
                                   std::to_string(drift) +
                                   " exceeds the budget");
        }
        return norm;
    };
    const auto snapshot = [&](double t) {
        flush();
        Snapshot snap;
        snap.t = t;
        snap.norm = check_norm();
        if (!opt.fock_pairs.empty()) {
            const Eigen::Map<const RowMatrix> m(engine.data().data(),
                                                g0.size(), g1.size());
            const Eigen::MatrixXcd cm = mem0 * m * mem1.transpose() * cell;
            const Eigen::MatrixXcd cg =
                gate0 * m * gate1.transpose() * cell;
            for (const auto &[a, b] : opt.fock_pairs) {
                snap.pop_memory.push_back(std::norm(cm(a, b)));
                snap.pop_gate.push_back(std::norm(cg(a, b)));
            }
        }
        result.snapshots.push_back(std::move(snap));
    };

    const bool snapshots = opt.snapshot_stride > 0;
    long long next_snapshot = opt.snapshot_stride;
    const auto after_steps = [&](double t) {
        if (snapshots && result.steps >= next_snapshot) {
            snapshot(t);
            while (next_snapshot <= result.steps) {
                next_snapshot += opt.snapshot_stride;
            }
        }
    };

    if (snapshots) {
        snapshot(0.0);
    }
    double t0 = 0.0;
    for (std::size_t si = 0; si < schedule.segments.size(); ++si) {
        const Segment &seg = schedule.segments[si];
        const long long n = step_count(seg.duration, opt.dt);
        const double h = seg.duration / static_cast<double>(n);
        const bool is_static =
            seg.modes[0].is_static() && seg.modes[1].is_static();
        const auto form_at = [&](double t) {
            return spec.quadratic_form(seg.modes[0].omega_squared(t),
                                       seg.modes[1].omega_squared(t),
                                       seg.hopping);
        };

        if (opt.integrator == Integrator::ExactQuadratic && is_static) {
            const Eigen::Matrix4d k = form_at(0.0);
            const long long m = opt.static_step_multiplier;
            const ShearFactors big =
                shear_factorization(quadratic_flow(k, m * h));
            const ShearFactors small =
                shear_factorization(quadratic_flow(k, h));
            long long done = 0;
            while (done < n) {
                const bool use_big = n - done >= m;
                shear_step(use_big ? big : small);
                const long long adv = use_big ? m : 1;
                done += adv;
                result.steps += adv;
                after_steps(t0 + done * h);
            }
        } else {
            for (long long k = 0; k < n; ++k) {
                const Eigen::Matrix4d form = form_at((k + 0.5) * h);
                if (opt.integrator == Integrator::ExactQuadratic) {
                    shear_step(shear_factorization(quadratic_flow(form, h)));
                } else {
                    strang_step(form, h);
                }
                ++result.steps;
                after_steps(t0 + (k + 1) * h);
            }
        }
        t0 += seg.duration;
        flush();
        check_norm();
        if (opt.on_segment_end) {
            const auto d = engine.data();
            opt.on_segment_end(si, t0,
                               Wavefunction2D(g0, g1, {d.begin(), d.end()}));
        }
    }
    flush();
    if (snapshots && (result.snapshots.empty() ||
                      result.snapshots.back().t < t0)) {
        snapshot(t0);
    }
    check_norm();
    const auto d = engine.data();
    result.state = Wavefunction2D(g0, g1, {d.begin(), d.end()});
    return result;
}

void write_snapshots_csv(const std::filesystem::path &path,
                         const std::vector<std::pair<int, int>> &pairs,
                         const std::vector<Snapshot> &snapshots) {
    std::ofstream os(path);
    if (!os) {
        throw DomainError("write_snapshots_csv: cannot open " + path.string());
    }
    // Pair labels contain commas, so they are quoted.
    os << "t[s],norm";
    for (const char *basis : {"pop_mem", "pop_gate"}) {
        for (const auto &[a, b] : pairs) {
            os << ",\"" << basis << '(' << a << ',' << b << ")\"";
        }
    }
    os << '\n' << std::setprecision(17);
    for (const Snapshot &s : snapshots) {
        os << s.t << ',' << s.norm;
        for (double v : s.pop_memory) {
            os << ',' << v;
        }
        for (double v : s.pop_gate) {
            os << ',' << v;
        }
        os << '\n';
    }
}

ConvergenceReport
convergence_check(const std::function<double(double, int)> &run, double dt,
                  int grid_points, double tolerance) {
    ConvergenceReport r;
    r.base = run(dt, grid_points);
    r.half_dt = run(0.5 * dt, grid_points);
    r.double_grid = run(dt, 2 * grid_points);
    r.change_dt = std::abs(r.half_dt - r.base);
    r.change_grid = std::abs(r.double_grid - r.base);
    r.limit = 0.1 * tolerance;
    r.pass = r.change_dt <= r.limit && r.change_grid <= r.limit;
    return r;
}

} // namespace odb
