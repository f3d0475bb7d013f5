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
 * @file test_symplectic.cpp
 * Tests for the two-mode transforms, target phases and chain planner.
 */
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <catch_amalgamated.hpp>

#include "odb/constants.hpp"
#include "odb/errors.hpp"
#include "odb/lr_engine.hpp"
#include "odb/pulses.hpp"
#include "odb/symplectic.hpp"

using namespace odb;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using cd = std::complex<double>;

namespace {

constexpr double kPi = constants::pi;
const double kOmegaH = constants::mhz_to_rad_s(2.64);
const double kOmegaL = constants::mhz_to_rad_s(2.20);
const double kOmegaM = constants::mhz_to_rad_s(2.42);

double max_abs_diff(const TwoModeTransform &a, const TwoModeTransform &b) {
    return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

/// Schroedinger-picture reference for a passive two-mode circuit in the
/// N-excitation subspace. Basis index k holds |n0 = k, n1 = N - k>.
class SubspaceOracle {
  public:
    explicit SubspaceOracle(int total) : n_(total) {}

    /// exp(-i theta (a0^dag a1 + a1^dag a0)) by eigendecomposition.
    [[nodiscard]] Eigen::MatrixXcd beamsplitter(double theta) const {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n_ + 1, n_ + 1);
        for (int k = 0; k < n_; ++k) {
            const double v = std::sqrt((k + 1.0) * (n_ - k));
            h(k + 1, k) = v;
            h(k, k + 1) = v;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
        Eigen::VectorXcd ph(n_ + 1);
        for (int k = 0; k <= n_; ++k) {
            ph(k) = std::polar(1.0, -theta * es.eigenvalues()(k));
        }
        const Eigen::MatrixXcd v = es.eigenvectors().cast<cd>();
        return v * ph.asDiagonal() * v.adjoint();
    }

    /// exp(-i phi0 (n0 + z) - i phi1 (n1 + z)), z = 1/2 with zero point.
    [[nodiscard]] Eigen::MatrixXcd phase(double phi0, double phi1,
                                         bool zero_point) const {
        const double z = zero_point ? 0.5 : 0.0;
        Eigen::VectorXcd d(n_ + 1);
        for (int k = 0; k <= n_; ++k) {
            d(k) = std::polar(1.0, -phi0 * (k + z) - phi1 * (n_ - k + z));
        }
        return d.asDiagonal();
    }

    [[nodiscard]] Eigen::VectorXcd basis(int n0) const {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n_ + 1);
        v(n0) = 1.0;
        return v;
    }

  private:
    int n_;
};

OdbParameters nominal_parameters() {
    const double t_fc = 4e-6;
    OdbParameters p;
    p.theta_hm = theta_phase(make_b_profile(kOmegaH, kOmegaM, t_fc, 6.0));
    p.theta_lm = theta_phase(make_b_profile(kOmegaL, kOmegaM, t_fc, 6.0));
    p.omega_m = kOmegaM;
    p.omega_h = kOmegaH;
    p.omega_l = kOmegaL;
    p.t_b = 577.81e-6;
    p.t_3 = p.t_b + 2.0 * t_fc;
    return p;
}

OdbParameters random_parameters(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> ang(-100.0, 100.0);
    std::uniform_real_distribution<double> f(1.0, 3.0);
    std::uniform_real_distribution<double> t(0.0, 1e-3);
    OdbParameters p;
    p.theta_hm = ang(rng);
    p.theta_lm = ang(rng);
    p.omega_m = constants::mhz_to_rad_s(f(rng));
    p.omega_h = constants::mhz_to_rad_s(f(rng));
    p.omega_l = constants::mhz_to_rad_s(f(rng));
    p.t_b = t(rng);
    p.t_3 = p.t_b + 8e-6;
    return p;
}

SingleModeTransform random_bogoliubov(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> r(-1.0, 1.0);
    std::uniform_real_distribution<double> a(-kPi, kPi);
    const double s = r(rng);
    const cd eta = std::polar(std::cosh(s), a(rng));
    const cd zeta = std::polar(std::sinh(s), a(rng));
    Eigen::Matrix2cd m;
    m << eta, zeta, std::conj(zeta), std::conj(eta);
    return SingleModeTransform(m);
}

} // namespace

TEST_CASE("bs_matrix", "[symplectic]") {
    CHECK(max_abs_diff(bs_matrix(0.0), TwoModeTransform::identity()) == 0.0);

    const TwoModeTransform q = bs_matrix(kPi / 4);
    const double r = 1.0 / std::sqrt(2.0);
    for (int k = 0; k < 4; ++k) {
        CHECK_THAT(q(k, k).real(), WithinAbs(r, 1e-15));
    }
    CHECK(std::abs(q(0, 2) - cd(0, -r)) <= 1e-15);
    CHECK(std::abs(q(2, 0) - cd(0, -r)) <= 1e-15);
    CHECK(std::abs(q(1, 3) - cd(0, r)) <= 1e-15);
    CHECK(std::abs(q(3, 1) - cd(0, r)) <= 1e-15);

    const TwoModeTransform s = bs_matrix(kPi / 2);
    for (int k = 0; k < 4; ++k) {
        CHECK(std::abs(s(k, k)) <= 1e-15);
    }
    CHECK(std::abs(s(0, 2) - cd(0, -1)) <= 1e-15);
    CHECK(std::abs(s(1, 3) - cd(0, 1)) <= 1e-15);
}

TEST_CASE("ps_matrix", "[symplectic]") {
    CHECK(max_abs_diff(ps_matrix(0, 0), TwoModeTransform::identity()) == 0.0);
    const TwoModeTransform m = ps_matrix(kPi, kPi);
    for (int k = 0; k < 4; ++k) {
        CHECK(std::abs(m(k, k) + 1.0) <= 1e-15);
    }
    CHECK(max_abs_diff(ps_matrix(0.3, 0.7) * ps_matrix(0.5, 0.1),
                       ps_matrix(0.8, 0.8)) <= 1e-15);
}

TEST_CASE("fc_block", "[symplectic]") {
    CHECK(max_abs_diff(fc_block({}, {}), TwoModeTransform::identity()) == 0.0);
    const SingleModeTransform hm =
        fc_matrix(make_b_profile(kOmegaH, kOmegaM, 4e-6, 6.0));
    const SingleModeTransform lm =
        fc_matrix(make_b_profile(kOmegaL, kOmegaM, 4e-6, 6.0));
    const TwoModeTransform m = fc_block(hm, lm);
    for (int r = 0; r < 2; ++r) {
        for (int c = 2; c < 4; ++c) {
            CHECK(m(r, c) == cd(0.0));
            CHECK(m(c, r) == cd(0.0));
        }
    }
    CHECK(m.metric_residual() <= 1e-12);
}

TEST_CASE("odb_matrix", "[symplectic]") {
    SECTION("zero angle and phases is the identity") {
        CHECK(max_abs_diff(odb_matrix(0.0, OdbParameters{}),
                           TwoModeTransform::identity()) <= 1e-15);
    }
    SECTION("equals the sequential product") {
        const OdbParameters p = nominal_parameters();
        const double hold = p.omega_m * p.t_b;
        const TwoModeTransform seq =
            ps_matrix(-p.theta_hm + hold - p.omega_h * p.t_3,
                      -p.theta_lm + hold - p.omega_l * p.t_3) *
            (bs_matrix(kPi / 4) * ps_matrix(-p.theta_hm, -p.theta_lm));
        CHECK(max_abs_diff(odb_matrix(kPi / 4, p), seq) <= 1e-12);
    }
    SECTION("nominal HOM phases from the Fock action") {
        const OdbParameters p = nominal_parameters();
        const HomPhases ph = hom_target_phases(p);
        // Reference amplitude from the Schroedinger circuit with zero-point
        // phases included.
        const SubspaceOracle o(2);
        const double hold = p.omega_m * p.t_b;
        const Eigen::VectorXcd out =
            o.phase(-p.theta_hm + hold - p.omega_h * p.t_3,
                    -p.theta_lm + hold - p.omega_l * p.t_3, true) *
            o.beamsplitter(kPi / 4) *
            o.phase(-p.theta_hm, -p.theta_lm, true) * o.basis(1);
        const cd pref(0.0, -1.0 / std::sqrt(2.0));
        // Basis index k is n0; (n0, n1) = (0, 2) carries phi_20.
        CHECK(std::abs(out(0) - pref * std::polar(1.0, ph.phi_20)) <= 1e-9);
        CHECK(std::abs(out(2) - pref * std::polar(1.0, ph.phi_02)) <= 1e-9);
        CHECK(std::abs(out(1)) <= 1e-12);

        const Eigen::MatrixXcd lib =
            apply_to_fock_product(odb_matrix(kPi / 4, p), 1, 1, 2);
        const cd ov = std::conj(out(0)) * lib(0, 2) +
                      std::conj(out(1)) * lib(1, 1) +
                      std::conj(out(2)) * lib(2, 0);
        CHECK_THAT(std::abs(ov), WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("apply_to_fock_product against the subspace oracle",
          "[symplectic][property]") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> a(-kPi, kPi);
    for (int trial = 0; trial < 30; ++trial) {
        const double p0 = a(rng), p1 = a(rng), q0 = a(rng), q1 = a(rng);
        const double th = a(rng);
        const int n0 = trial % 4;
        const int n1 = (trial / 4) % 3;
        const int total = n0 + n1;
        const SubspaceOracle o(total);
        const Eigen::VectorXcd ref = o.phase(p0, p1, false) *
                                     o.beamsplitter(th) *
                                     o.phase(q0, q1, false) * o.basis(n0);
        const Eigen::MatrixXcd lib = apply_to_fock_product(
            ps_matrix(p0, p1) * bs_matrix(th) * ps_matrix(q0, q1), n0, n1,
            total);
        for (int k = 0; k <= total; ++k) {
            CHECK(std::abs(lib(k, total - k) - ref(k)) <= 1e-12);
        }
        CHECK_THAT(lib.squaredNorm(), WithinAbs(1.0, 1e-12));
    }
    CHECK_THROWS_AS(apply_to_fock_product(
                        fc_block(random_bogoliubov(rng), {}), 1, 1, 2),
                    DomainError);
}

TEST_CASE("hom_target_phases", "[symplectic]") {
    SECTION("zero inputs") {
        const HomPhases h = hom_target_phases(OdbParameters{});
        CHECK(h.phi_20 == 0.0);
        CHECK(h.phi_02 == 0.0);
    }
    SECTION("difference identity on random inputs") {
        std::mt19937_64 rng(11);
        for (int k = 0; k < 100; ++k) {
            const OdbParameters p = random_parameters(rng);
            const HomPhases h = hom_target_phases(p);
            const double expect = 2.0 * (p.theta_hm - p.theta_lm) +
                                  2.0 * (p.omega_h - p.omega_l) * p.t_3;
            CHECK(std::abs(angle_difference(h.phi_02 - h.phi_20, expect)) <=
                  1e-8);
        }
    }
    SECTION("frozen values for the default design") {
        const HomPhases h = hom_target_phases(nominal_parameters());
        CHECK_THAT(h.phi_20, WithinAbs(0.929688727393362, 1e-7));
        CHECK_THAT(h.phi_02, WithinAbs(5.65509543388725, 1e-7));
    }
}

TEST_CASE("swap_phases", "[symplectic]") {
    SECTION("zero inputs") {
        const SwapPhases s = swap_phases(OdbParameters{});
        CHECK_THAT(s.phi0, WithinAbs(kPi / 2, 1e-15));
        CHECK_THAT(s.phi1, WithinAbs(kPi / 2, 1e-15));
    }
    SECTION("difference identity on random inputs") {
        std::mt19937_64 rng(12);
        for (int k = 0; k < 100; ++k) {
            const OdbParameters p = random_parameters(rng);
            const SwapPhases s = swap_phases(p);
            CHECK(std::abs(angle_difference(s.phi1 - s.phi0,
                                            (p.omega_h - p.omega_l) * p.t_3)) <=
                  1e-8);
        }
    }
    SECTION("compensated swap is a pure exchange") {
        std::mt19937_64 rng(13);
        for (int k = 0; k < 20; ++k) {
            const OdbParameters p = random_parameters(rng);
            const SwapPhases s = swap_phases(p);
            // The Fock-space phase e^{-i phi (n + 1/2)} acts as ps_matrix.
            const TwoModeTransform m =
                ps_matrix(-s.phi0, -s.phi1) * odb_matrix(kPi / 2, p);
            Eigen::Matrix4cd swap = Eigen::Matrix4cd::Zero();
            swap(0, 2) = swap(2, 0) = 1.0;
            swap(1, 3) = swap(3, 1) = 1.0;
            // Equal up to a global sign on the annihilation rows.
            const cd g = m(0, 2);
            CHECK_THAT(std::abs(g), WithinAbs(1.0, 1e-12));
            Eigen::Matrix4cd expect = swap;
            expect.row(0) *= g;
            expect.row(2) *= g;
            expect.row(1) *= std::conj(g);
            expect.row(3) *= std::conj(g);
            CHECK((m.matrix() - expect).cwiseAbs().maxCoeff() <= 1e-9);
        }
    }
    SECTION("frozen values for the default design") {
        OdbParameters p = nominal_parameters();
        p.t_b = 1155.618e-6;
        p.t_3 = p.t_b + 8e-6;
        const SwapPhases s = swap_phases(p);
        CHECK_THAT(s.phi0, WithinAbs(1.54591391975373, 1e-7));
        CHECK_THAT(s.phi1, WithinAbs(1.49514578247181, 1e-7));
    }
}

TEST_CASE("phase wrapping", "[symplectic]") {
    CHECK(wrap_two_pi(0.0) == 0.0);
    CHECK_THAT(wrap_two_pi(-0.5), WithinAbs(2 * kPi - 0.5, 1e-15));
    CHECK_THAT(wrap_two_pi(1e4), WithinAbs(std::fmod(1e4, 2 * kPi), 1e-12));
    CHECK(wrap_two_pi(2 * kPi) < 2 * kPi);
    CHECK_THAT(angle_difference(0.1, 2 * kPi - 0.1), WithinAbs(0.2, 1e-14));
    CHECK_THAT(angle_difference(3.0, -3.0), WithinAbs(6.0 - 2 * kPi, 1e-14));
}

TEST_CASE("transform invariants", "[symplectic][property]") {
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> a(-kPi, kPi);
    for (int k = 0; k < 100; ++k) {
        const double t1 = a(rng), t2 = a(rng);
        const TwoModeTransform m =
            fc_block(random_bogoliubov(rng), random_bogoliubov(rng)) *
            bs_matrix(t1) * ps_matrix(a(rng), a(rng)) *
            odb_matrix(t2, random_parameters(rng));
        CHECK(m.metric_residual() <= 1e-12);
        CHECK(max_abs_diff(bs_matrix(t1) * bs_matrix(t2), bs_matrix(t1 + t2)) <=
              1e-12);

        // Folding the phase factors out leaves the bare beamsplitter.
        const OdbParameters p = random_parameters(rng);
        const double hold = p.omega_m * p.t_b;
        const TwoModeTransform bare =
            ps_matrix(p.theta_hm - hold + p.omega_h * p.t_3,
                      p.theta_lm - hold + p.omega_l * p.t_3) *
            odb_matrix(t1, p) * ps_matrix(p.theta_hm, p.theta_lm);
        CHECK(max_abs_diff(bare, bs_matrix(t1)) <= 1e-12);
    }
}

TEST_CASE("plan_chain", "[symplectic]") {
    const double kappa = 2718.5;
    SECTION("two modes") {
        const ChainLayout c = plan_chain(2, ChainScheme::TwoFrequency, kappa);
        CHECK(c.labels ==
              std::vector{FrequencyLabel::High, FrequencyLabel::Low});
        CHECK(c.resonant_pairs.empty());
    }
    SECTION("four modes") {
        const ChainLayout c = plan_chain(4, ChainScheme::TwoFrequency, kappa);
        REQUIRE(c.resonant_pairs.size() == 2);
        CHECK(c.resonant_pairs[0].j == 0);
        CHECK(c.resonant_pairs[0].k == 2);
        CHECK(c.resonant_pairs[1].j == 1);
        CHECK(c.resonant_pairs[1].k == 3);
        for (const auto &rp : c.resonant_pairs) {
            CHECK_THAT(rp.kappa, WithinRel(kappa / 8.0, 1e-15));
        }
    }
    SECTION("three-frequency scheme") {
        const ChainLayout c = plan_chain(3, ChainScheme::ThreeFrequency, kappa);
        CHECK(c.labels == std::vector{FrequencyLabel::High, FrequencyLabel::Low,
                                      FrequencyLabel::Auxiliary});
        CHECK(c.resonant_pairs.empty());
        const ChainLayout big =
            plan_chain(12, ChainScheme::ThreeFrequency, kappa);
        for (const auto &rp : big.resonant_pairs) {
            CHECK(rp.k - rp.j > 2);
        }
    }
    SECTION("no equal neighbours up to 64 modes") {
        for (int m = 2; m <= 64; ++m) {
            for (ChainScheme s :
                 {ChainScheme::TwoFrequency, ChainScheme::ThreeFrequency}) {
                const ChainLayout c = plan_chain(m, s, kappa);
                for (int j = 0; j + 1 < m; ++j) {
                    CHECK(c.labels[j] != c.labels[j + 1]);
                }
                for (const auto &rp : c.resonant_pairs) {
                    const double d = rp.k - rp.j;
                    CHECK_THAT(rp.kappa, WithinRel(kappa / (d * d * d), 1e-14));
                }
            }
        }
    }
    SECTION("errors") {
        CHECK_THROWS_AS(plan_chain(1, ChainScheme::TwoFrequency, kappa),
                        DomainError);
        const ChainLayout c = plan_chain(3, ChainScheme::TwoFrequency, kappa);
        CHECK_THROWS_AS(c.kappa(1, 1), DomainError);
    }
}

TEST_CASE("kappa_from_geometry", "[symplectic]") {
    const double mass = 40.0 * 1.66053906660e-27;
    const double d = 43.8e-6;
    // Independent evaluation in SI units.
    const double e = 1.602176634e-19;
    const double eps0 = 8.8541878128e-12;
    const double expect = e * e / (4.0 * kPi * eps0 * d * d * d * mass * kOmegaM);
    const double k = kappa_from_geometry(d, mass, kOmegaM);
    CHECK_THAT(k, WithinRel(expect, 1e-12));
    CHECK_THAT(k, WithinRel(2.71e3, 0.005));
    CHECK_THAT(k / (2 * kPi), WithinRel(432.0, 0.005));
    CHECK_THAT(kappa_from_geometry(2 * d, mass, kOmegaM), WithinRel(k / 8, 1e-14));
    CHECK_THAT(k * 579e-6 / 2, WithinAbs(0.787, 0.002));
    CHECK_THAT(k * 579e-6 / 2, WithinRel(kPi / 4, 0.003));
    CHECK_THROWS_AS(kappa_from_geometry(-d, mass, kOmegaM), DomainError);
    CHECK_THROWS_AS(kappa_from_geometry(d, mass, 0.0), DomainError);
}

TEST_CASE("transform JSON round trip", "[symplectic]") {
    std::mt19937_64 rng(5);
    const TwoModeTransform m =
        fc_block(random_bogoliubov(rng), random_bogoliubov(rng)) *
        bs_matrix(0.3);
    const TwoModeTransform back = transform_from_json(transform_to_json(m));
    CHECK(max_abs_diff(m, back) == 0.0);
    CHECK_THROWS_AS(
        transform_from_json(R"({"rows":2,"cols":2,"data":[[1,0],[0,0],[0,0],[1,0]]})"),
        DomainError);
}
