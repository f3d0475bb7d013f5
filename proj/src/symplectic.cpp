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

#include "odb/symplectic.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "odb/constants.hpp"
#include "odb/errors.hpp"

namespace odb {

using cd = std::complex<double>;

double TwoModeTransform::metric_residual() const {
    const Eigen::Vector4cd g(1.0, -1.0, 1.0, -1.0);
    const Eigen::Matrix4cd metric = g.asDiagonal();
    return (m_ * metric * m_.adjoint() - metric).cwiseAbs().maxCoeff();
}

double TwoModeTransform::anomalous_magnitude() const {
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            worst = std::max(worst, std::abs(m_(2 * i, 2 * j + 1)));
            worst = std::max(worst, std::abs(m_(2 * i + 1, 2 * j)));
        }
    }
    return worst;
}

Eigen::Matrix2cd TwoModeTransform::passive_block() const {
    Eigen::Matrix2cd p;
    p << m_(0, 0), m_(0, 2), m_(2, 0), m_(2, 2);
    return p;
}

TwoModeTransform bs_matrix(double theta) {
    const double c = std::cos(theta);
    const cd is(0.0, std::sin(theta));
    Eigen::Matrix4cd m;
    m << c, 0, -is, 0,
         0, c, 0, is,
         -is, 0, c, 0,
         0, is, 0, c;
    return TwoModeTransform(m);
}

TwoModeTransform ps_matrix(double phi0, double phi1) {
    const Eigen::Vector4cd d(std::polar(1.0, -phi0), std::polar(1.0, phi0),
                             std::polar(1.0, -phi1), std::polar(1.0, phi1));
    return TwoModeTransform(d.asDiagonal().toDenseMatrix());
}

TwoModeTransform fc_block(const SingleModeTransform &s0,
                          const SingleModeTransform &s1) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m.block<2, 2>(0, 0) = s0.matrix();
    m.block<2, 2>(2, 2) = s1.matrix();
    return TwoModeTransform(m);
}

TwoModeTransform odb_matrix(double theta, const OdbParameters &p) {
    const double hold = p.omega_m * p.t_b;
    const TwoModeTransform after =
        ps_matrix(-p.theta_hm + hold - p.omega_h * p.t_3,
                  -p.theta_lm + hold - p.omega_l * p.t_3);
    return after * bs_matrix(theta) * ps_matrix(-p.theta_hm, -p.theta_lm);
}

double wrap_two_pi(double angle) {
    double r = std::fmod(angle, constants::two_pi);
    if (r < 0.0) {
        r += constants::two_pi;
    }
    // fmod can land exactly on 2π after the shift
    return r >= constants::two_pi ? 0.0 : r;
}

double angle_difference(double a, double b) {
    double d = wrap_two_pi(a - b);
    if (d > constants::pi) {
        d -= constants::two_pi;
    }
    return d;
}

HomPhases hom_target_phases(const OdbParameters &p) {
    const double common = -3.0 * p.omega_m * p.t_b +
                          1.5 * (p.theta_hm + p.theta_lm);
    const double phi_20 = 0.5 * p.theta_hm + 2.5 * p.theta_lm +
                          (0.5 * p.omega_h + 2.5 * p.omega_l) * p.t_3 +
                          common;
    const double phi_02 = 2.5 * p.theta_hm + 0.5 * p.theta_lm +
                          (2.5 * p.omega_h + 0.5 * p.omega_l) * p.t_3 +
                          common;
    return {wrap_two_pi(phi_20), wrap_two_pi(phi_02)};
}

SwapPhases swap_phases(const OdbParameters &p) {
    const double base =
        -(p.theta_hm + p.theta_lm) + p.omega_m * p.t_b + 0.5 * constants::pi;
    return {wrap_two_pi(base - p.omega_h * p.t_3),
            wrap_two_pi(base - p.omega_l * p.t_3)};
}

Eigen::MatrixXcd apply_to_fock_product(const TwoModeTransform &m, int n0_in,
                                       int n1_in, int n_cut) {
    if (n0_in < 0 || n1_in < 0 || n_cut < 0) {
        throw DomainError("apply_to_fock_product: negative Fock index");
    }
    if (m.anomalous_magnitude() > 1e-12) {
        throw DomainError(
            "apply_to_fock_product: transform is not number conserving");
    }
    const Eigen::Matrix2cd p = m.passive_block();
    const int total = n0_in + n1_in;

    // Coefficients of (a0†)^k0 (a1†)^k1 in the creation polynomial.
    Eigen::MatrixXcd poly = Eigen::MatrixXcd::Zero(total + 1, total + 1);
    poly(0, 0) = 1.0;
    const auto multiply = [&](cd c0, cd c1) {
        Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(total + 1, total + 1);
        for (int k0 = 0; k0 <= total; ++k0) {
            for (int k1 = 0; k0 + k1 <= total; ++k1) {
                const cd v = poly(k0, k1);
                if (v == cd(0.0)) {
                    continue;
                }
                if (k0 + 1 <= total) {
                    next(k0 + 1, k1) += c0 * v;
                }
                if (k1 + 1 <= total) {
                    next(k0, k1 + 1) += c1 * v;
                }
            }
        }
        poly = std::move(next);
    };
    // U a_j† U† = sum_i P(i, j) a_i†
    for (int k = 0; k < n0_in; ++k) {
        multiply(p(0, 0), p(1, 0));
    }
    for (int k = 0; k < n1_in; ++k) {
        multiply(p(0, 1), p(1, 1));
    }

    const auto fact = [](int n) { return std::tgamma(n + 1.0); };
    const double norm_in = 1.0 / std::sqrt(fact(n0_in) * fact(n1_in));
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n_cut + 1, n_cut + 1);
    for (int k0 = 0; k0 <= std::min(total, n_cut); ++k0) {
        for (int k1 = 0; k1 <= std::min(total - k0, n_cut); ++k1) {
            out(k0, k1) =
                poly(k0, k1) * norm_in * std::sqrt(fact(k0) * fact(k1));
        }
    }
    return out;
}

const char *to_string(FrequencyLabel label) {
    switch (label) {
    case FrequencyLabel::High:
        return "omega_h";
    case FrequencyLabel::Low:
        return "omega_l";
    case FrequencyLabel::Gate:
        return "omega_m";
    case FrequencyLabel::Auxiliary:
        return "omega_aux";
    }
    return "?";
}

double ChainLayout::kappa(int j, int k) const {
    if (j == k) {
        throw DomainError("ChainLayout::kappa: identical modes");
    }
    const double d = std::abs(j - k);
    return kappa_nn / (d * d * d);
}

ChainLayout plan_chain(int mode_count, ChainScheme scheme, double kappa_nn) {
    if (mode_count < 2) {
        throw DomainError("plan_chain: need at least two modes");
    }
    ChainLayout layout;
    layout.mode_count = mode_count;
    layout.kappa_nn = kappa_nn;
    layout.labels.reserve(mode_count);
    for (int j = 0; j < mode_count; ++j) {
        if (scheme == ChainScheme::TwoFrequency) {
            layout.labels.push_back(j % 2 == 0 ? FrequencyLabel::High
                                               : FrequencyLabel::Low);
        } else {
            static constexpr FrequencyLabel cycle[3] = {
                FrequencyLabel::High, FrequencyLabel::Low,
                FrequencyLabel::Auxiliary};
            layout.labels.push_back(cycle[j % 3]);
        }
    }
    for (int j = 0; j < mode_count; ++j) {
        for (int k = j + 1; k < mode_count; ++k) {
            if (layout.labels[j] == layout.labels[k]) {
                layout.resonant_pairs.push_back({j, k, layout.kappa(j, k)});
            }
        }
    }
    return layout;
}

double coulomb_coupling(double distance, double mass) {
    if (!(distance > 0.0 && mass > 0.0)) {
        throw DomainError("coulomb_coupling: non-positive argument");
    }
    const double e = constants::elementary_charge;
    return e * e /
           (4.0 * constants::pi * constants::vacuum_permittivity * distance *
            distance * distance * mass);
}

double kappa_from_geometry(double distance, double mass, double omega) {
    if (!(omega > 0.0)) {
        throw DomainError("kappa_from_geometry: non-positive frequency");
    }
    return coulomb_coupling(distance, mass) / omega;
}

std::string transform_to_json(const TwoModeTransform &m) {
    nlohmann::json j;
    j["rows"] = 4;
    j["cols"] = 4;
    nlohmann::json data = nlohmann::json::array();
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            data.push_back({m(r, c).real(), m(r, c).imag()});
        }
    }
    j["data"] = std::move(data);
    return j.dump();
}

TwoModeTransform transform_from_json(const std::string &text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("rows").get<int>() != 4 || j.at("cols").get<int>() != 4 ||
        j.at("data").size() != 16) {
        throw DomainError("transform_from_json: expected a 4x4 matrix");
    }
    Eigen::Matrix4cd m;
    for (int k = 0; k < 16; ++k) {
        const auto &e = j["data"][k];
        m(k / 4, k % 4) = cd(e.at(0).get<double>(), e.at(1).get<double>());
    }
    return TwoModeTransform(m);
}

} // namespace odb
