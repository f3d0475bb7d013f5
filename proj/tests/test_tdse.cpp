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
/**
 * @file test_tdse.cpp
 * Tests for the two-mode grid propagator and its Hamiltonian builders.
 */
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <catch_amalgamated.hpp>

#include "odb/constants.hpp"
#include "odb/errors.hpp"
#include "odb/lr_engine.hpp"
#include "odb/pulses.hpp"
#include "odb/states.hpp"
#include "odb/tdse.hpp"

using namespace odb;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = constants::pi;
const double kOmegaH = constants::mhz_to_rad_s(2.64);
const double kOmegaL = constants::mhz_to_rad_s(2.20);
const double kOmegaM = constants::mhz_to_rad_s(2.42);
constexpr double kKappa = 2718.54; // rad/s
constexpr double kTfc = 4e-6;

Segment hold(double duration, double w0, double w1, bool hopping = true) {
    return {duration, {FrequencyProgram::hold(w0), FrequencyProgram::hold(w1)},
            hopping, "hold"};
}

Wavefunction1D fock_superposition(const Grid1D &g, int n_max) {
    Wavefunction1D s(g);
    for (int n = 0; n <= n_max; ++n) {
        const Wavefunction1D f = fock_state(n, g);
        const Complex c = std::polar(1.0, 0.37 * n);
        for (int i = 0; i < g.size(); ++i) {
            s.amplitudes[i] += c * f.amplitudes[i];
        }
    }
    s.normalize();
    return s;
}

} // namespace

TEST_CASE("Hamiltonian field builders", "[tdse]") {
    const Grid1D g0(32, 6.0, kOmegaH);
    const Grid1D g1(32, 6.0, kOmegaL);
    const HamiltonianSpec spec{kOmegaH, kOmegaL, kKappa, true};

    SECTION("potential with and without hopping") {
        const double w0 = kOmegaM * kOmegaM, w1 = 0.9 * kOmegaM * kOmegaM;
        const auto v = build_potential(spec, g0, g1, w0, w1, true);
        const auto v_off = build_potential(spec, g0, g1, w0, w1, false);
        for (int i = 0; i < 32; ++i) {
            for (int j = 0; j < 32; ++j) {
                const double x0 = g0.x(i), x1 = g1.x(j);
                const double wells = 0.5 * w0 / kOmegaH * x0 * x0 +
                                     0.5 * w1 / kOmegaL * x1 * x1;
                CHECK_THAT(v[i * 32 + j],
                           WithinAbs(wells + 0.5 * kKappa * x0 * x1, 1e-6));
                CHECK_THAT(v_off[i * 32 + j], WithinAbs(wells, 1e-6));
            }
        }
    }
    SECTION("static wells without modulation") {
        const HamiltonianSpec bare{kOmegaH, kOmegaL, 0.0, true};
        const auto v = build_potential(bare, g0, g1, kOmegaH * kOmegaH,
                                       kOmegaL * kOmegaL, true);
        CHECK_THAT(v[3 * 32 + 7],
                   WithinRel(0.5 * kOmegaH * g0.x(3) * g0.x(3) +
                                 0.5 * kOmegaL * g1.x(7) * g1.x(7),
                             1e-14));
    }
    SECTION("mid-ramp stiffness lies between the endpoints") {
        const BProfile down = make_b_profile(kOmegaH, kOmegaM, kTfc, 6.0);
        const double mid = down.omega_squared(kTfc / 2);
        CHECK(mid < kOmegaH * kOmegaH);
        CHECK(mid > kOmegaM * kOmegaM);
    }
    SECTION("kinetic field in FFT order") {
        const auto t = build_kinetic(spec, g0, g1, true);
        for (int i = 0; i < 32; ++i) {
            for (int j = 0; j < 32; ++j) {
                const double p0 = g0.p(i), p1 = g1.p(j);
                CHECK_THAT(t[i * 32 + j],
                           WithinAbs(0.5 * kOmegaH * p0 * p0 +
                                         0.5 * kOmegaL * p1 * p1 +
                                         0.5 * kKappa * p0 * p1,
                                     1e-6));
            }
        }
        CHECK(g0.p(16) < 0.0);
    }
    SECTION("label swap symmetry at equal frequencies") {
        const Grid1D g(32, 6.0, kOmegaM);
        const HamiltonianSpec eq{kOmegaM, kOmegaM, kKappa, true};
        const auto t = build_kinetic(eq, g, g, true);
        const auto v = build_potential(eq, g, g, kOmegaM * kOmegaM,
                                       kOmegaM * kOmegaM, true);
        for (int i = 0; i < 32; ++i) {
            for (int j = 0; j < 32; ++j) {
                CHECK(t[i * 32 + j] == t[j * 32 + i]);
                CHECK(v[i * 32 + j] == v[j * 32 + i]);
            }
        }
    }
    SECTION("vacuum energy is two zero points") {
        const Grid1D g = Grid1D::balanced(64, kOmegaM);
        const HamiltonianSpec bare{kOmegaM, kOmegaM, 0.0, true};
        const Wavefunction2D vac =
            product_state(fock_state(0, g), fock_state(0, g));
        CHECK_THAT(energy_expectation(vac, bare, kOmegaM * kOmegaM,
                                      kOmegaM * kOmegaM, true),
                   WithinRel(kOmegaM, 1e-10));
    }
    SECTION("invalid specs") {
        CHECK_THROWS_AS((HamiltonianSpec{0.0, kOmegaL, kKappa, true}.validate()),
                        DomainError);
        CHECK_THROWS_AS((HamiltonianSpec{kOmegaH, kOmegaL, -1.0, true}.validate()),
                        DomainError);
    }
}

TEST_CASE("Schedule validation", "[tdse]") {
    const BProfile down = make_b_profile(kOmegaH, kOmegaM, kTfc, 6.0);
    const BProfile up = make_b_profile(kOmegaL, kOmegaM, kTfc, 6.0);
    Schedule ok;
    ok.segments.push_back({kTfc,
                           {FrequencyProgram::ramp(down), FrequencyProgram::ramp(up)},
                           true, "fc"});
    ok.segments.push_back(hold(1e-6, kOmegaM, kOmegaM));
    CHECK_NOTHROW(ok.validate());
    CHECK_THAT(ok.total_duration(), WithinRel(5e-6, 1e-15));

    SECTION("empty") { CHECK_THROWS_AS(Schedule{}.validate(), ConfigError); }
    SECTION("non-positive duration") {
        Schedule s = ok;
        s.segments[1].duration = 0.0;
        CHECK_THROWS_AS(s.validate(), ConfigError);
    }
    SECTION("ramp length mismatch") {
        Schedule s = ok;
        s.segments[0].duration = 3e-6;
        CHECK_THROWS_AS(s.validate(), ConfigError);
    }
    SECTION("frequency jump") {
        Schedule s = ok;
        s.segments[1] = hold(1e-6, kOmegaH, kOmegaM);
        CHECK_THROWS_AS(s.validate(), ConfigError);
    }
}

TEST_CASE("propagate: static eigenstates", "[tdse]") {
    const Grid1D gh = Grid1D::balanced(64, kOmegaH);
    const Grid1D gl = Grid1D::balanced(64, kOmegaL);
    const HamiltonianSpec spec{kOmegaH, kOmegaL, 0.0, true};
    const Wavefunction2D psi0 = product_state(fock_state(1, gh), fock_state(1, gl));
    Schedule s;
    const double t = 10e-6;
    s.segments.push_back(hold(t, kOmegaH, kOmegaL));

    for (Integrator integ : {Integrator::ExactQuadratic, Integrator::Strang}) {
        PropagationOptions opt;
        opt.integrator = integ;
        opt.fock_pairs = {{1, 1}};
        opt.snapshot_stride = 500;
        const PropagationResult r = propagate(psi0, s, spec, opt);
        const Complex expect = std::polar(1.0, -1.5 * (kOmegaH + kOmegaL) * t);
        const Complex ov = inner_product(psi0, r.state);
        if (integ == Integrator::ExactQuadratic) {
            CHECK(std::abs(ov - expect) <= 1e-9);
        } else {
            // One Strang step rotates phase space by alpha with
            // cos(alpha) = 1 - (omega h)^2 / 2, and its eigenstates are
            // squeezed by O((omega h)^2) relative to the true ones.
            const double h = opt.dt;
            const double ah = std::acos(1.0 - 0.5 * std::pow(kOmegaH * h, 2));
            const double al = std::acos(1.0 - 0.5 * std::pow(kOmegaL * h, 2));
            const double steps = std::round(t / h);
            const Complex strang = std::polar(1.0, -1.5 * (ah + al) * steps);
            CHECK(std::abs(ov) >= 1.0 - 1e-7);
            CHECK(std::abs(std::arg(ov / strang)) <= 1e-6);
            CHECK(std::abs(std::arg(ov / expect)) > 1e-3);
        }
        CHECK(r.norm_drift <= 1e-8);
        REQUIRE(r.snapshots.size() >= 2);
        const double pop_tol =
            integ == Integrator::ExactQuadratic ? 1e-9 : 1e-7;
        for (const Snapshot &snap : r.snapshots) {
            CHECK_THAT(snap.pop_memory[0], WithinAbs(1.0, pop_tol));
        }
        CHECK_THAT(r.snapshots.front().t, WithinAbs(0.0, 1e-20));
        CHECK_THAT(r.snapshots.back().t, WithinRel(t, 1e-12));
    }
}

TEST_CASE("propagate: resonant exchange follows the Rabi oracle", "[tdse]") {
    const Grid1D g = Grid1D::balanced(64, kOmegaM);
    const HamiltonianSpec spec{kOmegaM, kOmegaM, kKappa, true};
    const double t_b = kPi / (2.0 * kKappa);
    Schedule s;
    s.segments.push_back(hold(2.0 * t_b, kOmegaM, kOmegaM));

    PropagationOptions opt;
    opt.fock_pairs = {{0, 1}, {1, 1}, {2, 0}, {0, 2}};
    opt.snapshot_stride = 2000;
    opt.gate_frequency = kOmegaM;

    SECTION("single phonon") {
        const Wavefunction2D psi0 = product_state(fock_state(0, g), fock_state(1, g));
        const PropagationResult r = propagate(psi0, s, spec, opt);
        REQUIRE(r.snapshots.size() > 50);
        for (const Snapshot &snap : r.snapshots) {
            const double c = std::cos(0.5 * kKappa * snap.t);
            CHECK_THAT(snap.pop_memory[0], WithinAbs(c * c, 1e-4));
        }
        CHECK(r.norm_drift <= 1e-8);
    }
    SECTION("two phonons match the beamsplitter action") {
        const Wavefunction2D psi0 = product_state(fock_state(1, g), fock_state(1, g));
        const PropagationResult r = propagate(psi0, s, spec, opt);
        for (const Snapshot &snap : r.snapshots) {
            // theta = kappa t / 2; P(1,1) = cos^2(2 theta), P(2,0) = sin^2(2 theta)/2
            const double th2 = kKappa * snap.t;
            CHECK_THAT(snap.pop_memory[1], WithinAbs(std::pow(std::cos(th2), 2), 1e-4));
            CHECK_THAT(snap.pop_memory[2],
                       WithinAbs(0.5 * std::pow(std::sin(th2), 2), 1e-4));
            CHECK_THAT(snap.pop_memory[3],
                       WithinAbs(0.5 * std::pow(std::sin(th2), 2), 1e-4));
        }
    }
}

TEST_CASE("propagate: conservation laws", "[tdse][property]") {
    SECTION("energy on a static segment with hopping") {
        const Grid1D gh = Grid1D::balanced(64, kOmegaH);
        const Grid1D gl = Grid1D::balanced(64, kOmegaL);
        const HamiltonianSpec spec{kOmegaH, kOmegaL, 40.0 * kKappa, true};
        const Wavefunction2D psi0 =
            product_state(fock_superposition(gh, 3), fock_state(1, gl));
        Schedule s;
        s.segments.push_back(hold(100e-6, kOmegaH, kOmegaL));
        const PropagationResult r = propagate(psi0, s, spec, PropagationOptions{});
        const double w0 = kOmegaH * kOmegaH, w1 = kOmegaL * kOmegaL;
        const double e0 = energy_expectation(psi0, spec, w0, w1, true);
        const double e1 = energy_expectation(r.state, spec, w0, w1, true);
        CHECK(std::abs(e1 - e0) <= 1e-8 * std::abs(e0));
        CHECK(r.norm_drift <= 1e-8);
    }
    SECTION("exchange symmetry at equal frequencies") {
        const Grid1D g = Grid1D::balanced(64, kOmegaM);
        const HamiltonianSpec spec{kOmegaM, kOmegaM, 50.0 * kKappa, true};
        const Wavefunction2D a = product_state(fock_state(1, g), fock_state(0, g));
        const Wavefunction2D b = product_state(fock_state(0, g), fock_state(1, g));
        Wavefunction2D psi0(g, g);
        for (std::size_t k = 0; k < psi0.amplitudes.size(); ++k) {
            psi0.amplitudes[k] = (a.amplitudes[k] + b.amplitudes[k]) / std::sqrt(2.0);
        }
        Schedule s;
        s.segments.push_back(hold(20e-6, kOmegaM, kOmegaM));
        const PropagationResult r = propagate(psi0, s, spec, PropagationOptions{});
        const auto m0 = marginal(r.state, 0);
        const auto m1 = marginal(r.state, 1);
        for (int i = 0; i < g.size(); ++i) {
            CHECK_THAT(m0[i], WithinAbs(m1[i], 1e-10));
        }
    }
}

TEST_CASE("propagate: FC without hopping is the analytic phase map", "[tdse]") {
    const Grid1D gh = Grid1D::balanced(64, kOmegaH);
    const Grid1D gl = Grid1D::balanced(64, kOmegaL);
    const HamiltonianSpec spec{kOmegaH, kOmegaL, kKappa, true};
    const BProfile down = make_b_profile(kOmegaH, kOmegaM, kTfc, 6.0);
    const BProfile up = make_b_profile(kOmegaL, kOmegaM, kTfc, 6.0);
    Schedule s;
    s.segments.push_back({kTfc,
                          {FrequencyProgram::ramp(down), FrequencyProgram::ramp(up)},
                          false, "fc"});
    constexpr int n_max = 5;
    const Wavefunction2D psi0 =
        product_state(fock_superposition(gh, n_max), fock_superposition(gl, n_max));
    const PropagationResult r = propagate(psi0, s, spec, PropagationOptions{});

    const Eigen::MatrixXcd before = fock_amplitudes(psi0, kOmegaH, kOmegaL, n_max);
    const Eigen::MatrixXcd after = fock_amplitudes(r.state, kOmegaM, kOmegaM, n_max);
    const double th_h = theta_phase(down);
    const double th_l = theta_phase(up);
    for (int n0 = 0; n0 <= n_max; ++n0) {
        for (int n1 = 0; n1 <= n_max; ++n1) {
            const Complex ratio = after(n0, n1) / before(n0, n1);
            CHECK(std::norm(ratio) >= 0.999);
            const double expect = th_h * (n0 + 0.5) + th_l * (n1 + 0.5);
            CHECK(std::abs(std::arg(ratio * std::polar(1.0, -expect))) <= 1e-3);
        }
    }
}

TEST_CASE("propagate: configuration errors", "[tdse]") {
    const Grid1D gh = Grid1D::balanced(64, kOmegaH);
    const Grid1D gl = Grid1D::balanced(64, kOmegaL);
    const HamiltonianSpec spec{kOmegaH, kOmegaL, kKappa, true};
    const Wavefunction2D psi0 = product_state(fock_state(0, gh), fock_state(0, gl));
    Schedule s;
    s.segments.push_back(hold(1e-6, kOmegaH, kOmegaL));

    SECTION("dt beyond 50 steps per period") {
        PropagationOptions opt;
        opt.dt = 50e-9;
        CHECK_THROWS_AS(propagate(psi0, s, spec, opt), ConfigError);
    }
    SECTION("ramp shorter than 100 steps") {
        const BProfile fast = make_b_profile(kOmegaH, kOmegaM, 150e-9, 6.0);
        const BProfile fast_up = make_b_profile(kOmegaL, kOmegaM, 150e-9, 6.0);
        Schedule r;
        r.segments.push_back({150e-9,
                              {FrequencyProgram::ramp(fast), FrequencyProgram::ramp(fast_up)},
                              true, "fc"});
        CHECK_THROWS_AS(propagate(psi0, r, spec, PropagationOptions{}), ConfigError);
    }
    SECTION("grid scale mismatch") {
        const Wavefunction2D wrong = product_state(fock_state(0, gl), fock_state(0, gl));
        CHECK_THROWS_AS(propagate(wrong, s, spec, PropagationOptions{}), DomainError);
    }
    SECTION("norm budget is enforced") {
        PropagationOptions opt;
        opt.norm_budget = 1e-300;
        opt.snapshot_stride = 10;
        CHECK_THROWS_AS(propagate(psi0, s, spec, opt), ConvergenceError);
    }
}

TEST_CASE("integrators agree through a ramp", "[tdse]") {
    const Grid1D gh = Grid1D::balanced(64, kOmegaH);
    const Grid1D gl = Grid1D::balanced(64, kOmegaL);
    const HamiltonianSpec spec{kOmegaH, kOmegaL, kKappa, true};
    Schedule s;
    s.segments.push_back({kTfc,
                          {FrequencyProgram::ramp(make_b_profile(kOmegaH, kOmegaM, kTfc, 6.0)),
                           FrequencyProgram::ramp(make_b_profile(kOmegaL, kOmegaM, kTfc, 6.0))},
                          true, "fc"});
    const Wavefunction2D psi0 = product_state(fock_state(1, gh), fock_state(2, gl));
    PropagationOptions exact;
    PropagationOptions strang;
    strang.integrator = Integrator::Strang;
    PropagationOptions fine = exact;
    fine.dt = 0.5e-9;
    const auto a = propagate(psi0, s, spec, exact).state;
    const auto b = propagate(psi0, s, spec, strang).state;
    const auto c = propagate(psi0, s, spec, fine).state;
    CHECK(1.0 - fidelity(a, c).squared <= 1e-9);
    CHECK(1.0 - fidelity(b, c).squared <= 1e-6);
}

TEST_CASE("convergence_check", "[tdse]") {
    SECTION("static eigenstate converges trivially") {
        const auto run = [](double dt, int n) {
            const Grid1D g = Grid1D::balanced(n, kOmegaM);
            const HamiltonianSpec spec{kOmegaM, kOmegaM, 0.0, true};
            const Wavefunction2D psi0 =
                product_state(fock_state(1, g), fock_state(0, g));
            Schedule s;
            s.segments.push_back(hold(2e-6, kOmegaM, kOmegaM));
            PropagationOptions opt;
            opt.dt = dt;
            const auto r = propagate(psi0, s, spec, opt);
            return 1.0 - fidelity(r.state, psi0).squared;
        };
        const ConvergenceReport rep = convergence_check(run, 2e-9, 32, 5e-4);
        CHECK(rep.change_dt < 1e-12);
        CHECK(rep.change_grid < 1e-12);
        CHECK(rep.pass);
        CHECK_THAT(rep.limit, WithinRel(5e-5, 1e-15));
    }
    SECTION("a step-sensitive run fails") {
        const auto run = [](double dt, int) { return 1e6 * dt; };
        const ConvergenceReport rep = convergence_check(run, 50e-9, 64, 5e-4);
        CHECK_FALSE(rep.pass);
        CHECK_THAT(rep.change_dt, WithinRel(0.025, 1e-12));
    }
}

TEST_CASE("snapshot CSV", "[tdse]") {
    const auto path = std::filesystem::temp_directory_path() / "odb_snapshots.csv";
    std::vector<Snapshot> snaps{{0.0, 1.0, {1.0, 0.0}, {0.99, 0.001}},
                                {1e-6, 1.0, {0.5, 0.5}, {0.4, 0.4}}};
    write_snapshots_csv(path, {{1, 1}, {2, 0}}, snaps);
    std::ifstream is(path);
    std::string line;
    std::getline(is, line);
    CHECK(line == "t[s],norm,\"pop_mem(1,1)\",\"pop_mem(2,0)\","
                  "\"pop_gate(1,1)\",\"pop_gate(2,0)\"");
    std::getline(is, line);
    CHECK(line == "0,1,1,0,0.98999999999999999,0.001");
    int rows = 1;
    while (std::getline(is, line)) {
        ++rows;
    }
    CHECK(rows == 2);
}
