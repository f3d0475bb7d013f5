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
 * @file symplectic.hpp
 *
 * Heisenberg-picture algebra on the operator vector (a0, a0†, a1, a1†):
 * beamsplitter, phase-shift and block frequency-conversion matrices, the
 * full on-demand-beamsplitter transform, the closed-form target phases of
 * the HOM and SWAP outputs, and the chain frequency planner.
 */

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "odb/lr_engine.hpp"

namespace odb {

/// 4x4 complex matrix M with a(T) = M a on (a0, a0†, a1, a1†).
class TwoModeTransform {
  public:
    TwoModeTransform() : m_(Eigen::Matrix4cd::Identity()) {}
    explicit TwoModeTransform(const Eigen::Matrix4cd &m) : m_(m) {}

    static TwoModeTransform identity() { return {}; }

    [[nodiscard]] const Eigen::Matrix4cd &matrix() const noexcept {
        return m_;
    }
    [[nodiscard]] std::complex<double> operator()(int r, int c) const {
        return m_(r, c);
    }

    /// max |M G M† - G| with G = diag(1, -1, 1, -1).
    [[nodiscard]] double metric_residual() const;

    /// Largest entry coupling an annihilator to a creator.
    [[nodiscard]] double anomalous_magnitude() const;

    /// Number-conserving 2x2 block P(i, j) = M(2i, 2j).
    [[nodiscard]] Eigen::Matrix2cd passive_block() const;

    friend TwoModeTransform operator*(const TwoModeTransform &a,
                                      const TwoModeTransform &b) {
        return TwoModeTransform(a.m_ * b.m_);
    }

  private:
    Eigen::Matrix4cd m_;
};

/// exp(-i theta (a0† a1 + a0 a1†)) in the Heisenberg picture.
TwoModeTransform bs_matrix(double theta);

/// diag(e^{-i phi0}, e^{i phi0}, e^{-i phi1}, e^{i phi1}).
TwoModeTransform ps_matrix(double phi0, double phi1);

/// Block-diagonal embedding of two single-mode transforms.
TwoModeTransform fc_block(const SingleModeTransform &s0,
                          const SingleModeTransform &s1);

/// Everything the closed-form ODB phases depend on. Mode 0 sits at
/// omega_h, mode 1 at omega_l; both are converted to omega_m for T_B.
struct OdbParameters {
    double theta_hm = 0.0; // Θ of FC(omega_h -> omega_m), rad
    double theta_lm = 0.0; // Θ of FC(omega_l -> omega_m), rad
    double omega_m = 0.0;
    double omega_h = 0.0;
    double omega_l = 0.0;
    double t_b = 0.0;  // hold, s
    double t_3 = 0.0;  // 2 T_FC + T_B, s
};

/// Interaction-frame transform P(-Θ_mh + ω_m T_B - ω_h T3, ...) B(θ)
/// P(-Θ_hm, -Θ_lm), using Θ_mh = Θ_hm and Θ_ml = Θ_lm.
TwoModeTransform odb_matrix(double theta, const OdbParameters &p);

/// Phases of the HOM output (-i/√2)(e^{iφ_20}|2⟩_1|0⟩_0 + e^{iφ_02}|0⟩_1|2⟩_0).
/// The first index counts quanta in mode 1, the second in mode 0.
struct HomPhases {
    double phi_20 = 0.0;
    double phi_02 = 0.0;
};
HomPhases hom_target_phases(const OdbParameters &p);

/// φ0, φ1 such that ODB(π/2) = i U_P(φ0, φ1) SWAP in the interaction frame.
struct SwapPhases {
    double phi0 = 0.0;
    double phi1 = 0.0;
};
SwapPhases swap_phases(const OdbParameters &p);

/// Reduces an angle to [0, 2π).
double wrap_two_pi(double angle);
/// Signed distance between two angles, in (-π, π].
double angle_difference(double a, double b);

/// Fock amplitudes c(n0, n1), n <= n_cut, of U |n0_in, n1_in⟩ where U is
/// the number-conserving unitary whose Heisenberg matrix is `m`. The
/// vacuum phase is not represented. Throws DomainError if `m` mixes
/// annihilators with creators beyond 1e-12.
Eigen::MatrixXcd apply_to_fock_product(const TwoModeTransform &m, int n0_in,
                                       int n1_in, int n_cut);

enum class FrequencyLabel { High, Low, Gate, Auxiliary };
enum class ChainScheme { TwoFrequency, ThreeFrequency };

const char *to_string(FrequencyLabel label);

struct ResonantPair {
    int j = 0;
    int k = 0;
    double kappa = 0.0; // rad/s
};

struct ChainLayout {
    int mode_count = 0;
    std::vector<FrequencyLabel> labels;
    double kappa_nn = 0.0;
    /// Same-label pairs with their residual hopping rates.
    std::vector<ResonantPair> resonant_pairs;

    /// kappa_nn |j - k|^{-3}.
    [[nodiscard]] double kappa(int j, int k) const;
};

ChainLayout plan_chain(int mode_count, ChainScheme scheme, double kappa_nn);

/// e^2 / (4 pi eps0 d^3 m), in s^-2.
double coulomb_coupling(double distance, double mass);

/// Hopping rate e^2 / (4 pi eps0 d^3 m omega), rad/s.
double kappa_from_geometry(double distance, double mass, double omega);

/// {"rows":4,"cols":4,"data":[[re,im],...]} with data in row-major order.
std::string transform_to_json(const TwoModeTransform &m);
TwoModeTransform transform_from_json(const std::string &text);

} // namespace odb
