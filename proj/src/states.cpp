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

#include "odb/states.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>

#include "odb/constants.hpp"
#include "odb/errors.hpp"
#include "odb/quadratic.hpp"

namespace odb {

namespace {

constexpr double kResolutionTol = 1e-8;

std::vector<double> grid_points(const Grid1D &g) {
    std::vector<double> xs(g.size());
    for (int i = 0; i < g.size(); ++i) {
        xs[i] = g.x(i);
    }
    return xs;
}

void require_same(const Grid1D &a, const Grid1D &b, const char *what) {
    if (!(a == b)) {
        throw DomainError(std::string(what) + ": grid mismatch");
    }
}

/// Fock functions of frequency omega_ref sampled on `g`, one per row.
Eigen::MatrixXd fock_table(const Grid1D &g, double omega_ref, int n_max) {
    const double s = std::sqrt(omega_ref / g.scale_frequency());
    std::vector<double> xs = grid_points(g);
    for (double &x : xs) {
        x *= s;
    }
    return hermite_functions(n_max, xs) * std::sqrt(s);
}

/// Band-limited resampling matrix from `g` at frequency omega_old to the
/// same points at omega_new.
Eigen::MatrixXcd rescale_matrix(const Grid1D &g, double omega_new) {
    const int n = g.size();
    const double c = std::sqrt(g.scale_frequency() / omega_new);
    const double amp = std::sqrt(c) / n;
    const double dp = g.dp();
    const int half = n / 2;
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double xs = g.x(i) * c;
        if (xs < -g.span() || xs >= g.span()) {
            continue;
        }
        for (int j = 0; j < n; ++j) {
            const double th = dp * (xs - g.x(j));
            double sum = 1.0 + std::cos(half * th);
            for (int k = 1; k < half; ++k) {
                sum += 2.0 * std::cos(k * th);
            }
            r(i, j) = amp * sum;
        }
    }
    return r;
}

void check_norm_loss(double before, double after, const char *what) {
    if (std::abs(after - before) > kResolutionTol * std::max(before, 1.0)) {
        throw ResolutionError(std::string(what) +
                              ": grid does not resolve the state");
    }
}

void write_f64(std::ostream &os, double v) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    if constexpr (std::endian::native == std::endian::big) {
        bits = __builtin_bswap64(bits);
    }
    os.write(reinterpret_cast<const char *>(&bits), sizeof bits);
}

double read_f64(std::istream &is) {
    std::uint64_t bits = 0;
    is.read(reinterpret_cast<char *>(&bits), sizeof bits);
    if (!is) {
        throw DomainError("read_state: truncated file");
    }
    if constexpr (std::endian::native == std::endian::big) {
        bits = __builtin_bswap64(bits);
    }
    return std::bit_cast<double>(bits);
}

} // namespace

Wavefunction1D::Wavefunction1D(Grid1D g, std::vector<Complex> a)
    : grid(g), amplitudes(std::move(a)) {
    if (amplitudes.size() != static_cast<std::size_t>(grid.size())) {
        throw DomainError("Wavefunction1D: amplitude count mismatch");
    }
}

Wavefunction1D::Wavefunction1D(Grid1D g)
    : grid(g), amplitudes(static_cast<std::size_t>(g.size())) {}

double Wavefunction1D::norm_squared() const {
    double s = 0.0;
    for (const Complex &a : amplitudes) {
        s += std::norm(a);
    }
    return s * grid.dx();
}

double Wavefunction1D::normalize() {
    const double n = std::sqrt(norm_squared());
    if (n == 0.0) {
        throw NumericError("normalize: zero state");
    }
    for (Complex &a : amplitudes) {
        a /= n;
    }
    return n;
}

Wavefunction2D::Wavefunction2D(Grid1D g0, Grid1D g1, std::vector<Complex> a)
    : grid0(g0), grid1(g1), amplitudes(std::move(a)) {
    if (amplitudes.size() !=
        static_cast<std::size_t>(grid0.size()) * grid1.size()) {
        throw DomainError("Wavefunction2D: amplitude count mismatch");
    }
}

Wavefunction2D::Wavefunction2D(Grid1D g0, Grid1D g1)
    : grid0(g0), grid1(g1),
      amplitudes(static_cast<std::size_t>(g0.size()) * g1.size()) {}

double Wavefunction2D::norm_squared() const {
    double s = 0.0;
    for (const Complex &a : amplitudes) {
        s += std::norm(a);
    }
    return s * cell();
}

double Wavefunction2D::normalize() {
    const double n = std::sqrt(norm_squared());
    if (n == 0.0) {
        throw NumericError("normalize: zero state");
    }
    for (Complex &a : amplitudes) {
        a /= n;
    }
    return n;
}

Eigen::MatrixXcd Wavefunction2D::as_matrix() const {
    Eigen::MatrixXcd m(grid0.size(), grid1.size());
    for (int i = 0; i < grid0.size(); ++i) {
        for (int j = 0; j < grid1.size(); ++j) {
            m(i, j) = at(i, j);
        }
    }
    return m;
}

Wavefunction2D Wavefunction2D::from_matrix(Grid1D g0, Grid1D g1,
                                           const Eigen::MatrixXcd &m) {
    Wavefunction2D w(g0, g1);
    for (int i = 0; i < g0.size(); ++i) {
        for (int j = 0; j < g1.size(); ++j) {
            w.at(i, j) = m(i, j);
        }
    }
    return w;
}

Wavefunction2D product_state(const Wavefunction1D &mode0,
                             const Wavefunction1D &mode1) {
    Wavefunction2D w(mode0.grid, mode1.grid);
    for (int i = 0; i < mode0.grid.size(); ++i) {
        for (int j = 0; j < mode1.grid.size(); ++j) {
            w.at(i, j) = mode0.amplitudes[i] * mode1.amplitudes[j];
        }
    }
    return w;
}

Eigen::MatrixXd hermite_functions(int n_max, std::span<const double> xs) {
    if (n_max < 0) {
        throw DomainError("hermite_functions: n_max must be >= 0");
    }
    const auto n = static_cast<Eigen::Index>(xs.size());
    Eigen::MatrixXd h(n_max + 1, n);
    const double c0 = std::pow(constants::pi, -0.25);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = xs[i];
        h(0, i) = c0 * std::exp(-0.5 * x * x);
        if (n_max >= 1) {
            h(1, i) = std::sqrt(2.0) * x * h(0, i);
        }
        for (int k = 1; k < n_max; ++k) {
            h(k + 1, i) = std::sqrt(2.0 / (k + 1)) * x * h(k, i) -
                          std::sqrt(static_cast<double>(k) / (k + 1)) *
                              h(k - 1, i);
        }
    }
    return h;
}

Wavefunction1D fock_state_at(int n, const Grid1D &grid, double omega_ref) {
    if (n < 0) {
        throw DomainError("fock_state: n must be >= 0");
    }
    if (!(omega_ref > 0.0)) {
        throw DomainError("fock_state: reference frequency must be > 0");
    }
    const Eigen::MatrixXd h = fock_table(grid, omega_ref, n);
    Wavefunction1D w(grid);
    for (int i = 0; i < grid.size(); ++i) {
        w.amplitudes[i] = h(n, i);
    }
    const double norm = w.norm_squared();
    if (std::abs(norm - 1.0) > kResolutionTol) {
        throw ResolutionError("fock_state: n=" + std::to_string(n) +
                              " is not resolved on the grid");
    }
    w.normalize();
    return w;
}

Wavefunction1D fock_state(int n, const Grid1D &grid) {
    return fock_state_at(n, grid, grid.scale_frequency());
}

void GkpParams::validate() const {
    if (!(delta > 0.0) || !(epsilon > 0.0)) {
        throw DomainError("GkpParams: delta and epsilon must be > 0");
    }
    if (s_max < 1) {
        throw DomainError("GkpParams: s_max must be >= 1");
    }
    if (logical != 0 && logical != 1) {
        throw DomainError("GkpParams: logical index must be 0 or 1");
    }
}

Wavefunction1D gkp_state(const GkpParams &params, const Grid1D &grid) {
    params.validate();
    const double root_pi = std::sqrt(constants::pi);
    const double d2 = params.delta * params.delta;
    const double e2 = params.epsilon * params.epsilon;
    std::vector<double> centers;
    std::vector<double> weights;
    for (int s = -params.s_max; s <= params.s_max; ++s) {
        const double xs = (2 * s + params.logical) * root_pi;
        centers.push_back(xs);
        weights.push_back(std::exp(-0.5 * e2 * xs * xs));
    }

    // Continuum norm and the part of it outside [-L, L); peaks overlap
    // only at the e^{-pi/Delta^2} level, so off-grid mass is peak-wise.
    double total = 0.0;
    double outside = 0.0;
    const double l = grid.span();
    for (std::size_t a = 0; a < centers.size(); ++a) {
        for (std::size_t b = 0; b < centers.size(); ++b) {
            const double sep = centers[a] - centers[b];
            total += weights[a] * weights[b] * root_pi * params.delta *
                     std::exp(-sep * sep / (4.0 * d2));
        }
        const double w2 = weights[a] * weights[a] * root_pi * params.delta;
        outside += 0.5 * w2 *
                   (std::erfc((l - centers[a]) / params.delta) +
                    std::erfc((l + centers[a]) / params.delta));
    }
    if (outside / total > kResolutionTol) {
        throw ResolutionError("gkp_state: grid span truncates " +
                              std::to_string(outside / total) +
                              " of the mass");
    }

    Wavefunction1D w(grid);
    for (int i = 0; i < grid.size(); ++i) {
        const double x = grid.x(i);
        double v = 0.0;
        for (std::size_t a = 0; a < centers.size(); ++a) {
            const double u = x - centers[a];
            v += weights[a] * std::exp(-0.5 * u * u / d2);
        }
        w.amplitudes[i] = v;
    }
    w.normalize();
    return w;
}

Wavefunction1D rescale_reference(const Wavefunction1D &psi,
                                 double new_frequency) {
    if (!(new_frequency > 0.0)) {
        throw DomainError("rescale_reference: frequency must be > 0");
    }
    const Grid1D target = psi.grid.with_frequency(new_frequency);
    if (new_frequency == psi.grid.scale_frequency()) {
        return {target, psi.amplitudes};
    }
    const Eigen::MatrixXcd r = rescale_matrix(psi.grid, new_frequency);
    const Eigen::Map<const Eigen::VectorXcd> in(psi.amplitudes.data(),
                                                psi.grid.size());
    const Eigen::VectorXcd out = r * in;
    Wavefunction1D w(target, {out.data(), out.data() + out.size()});
    const double before = psi.norm_squared();
    const double after = w.norm_squared();
    check_norm_loss(before, after, "rescale_reference");
    const double scale = std::sqrt(before / after);
    for (Complex &a : w.amplitudes) {
        a *= scale;
    }
    return w;
}

Wavefunction2D rescale_reference(const Wavefunction2D &psi,
                                 double new_frequency0,
                                 double new_frequency1) {
    if (!(new_frequency0 > 0.0) || !(new_frequency1 > 0.0)) {
        throw DomainError("rescale_reference: frequency must be > 0");
    }
    const Grid1D g0 = psi.grid0.with_frequency(new_frequency0);
    const Grid1D g1 = psi.grid1.with_frequency(new_frequency1);
    Eigen::MatrixXcd m = psi.as_matrix();
    if (new_frequency0 != psi.grid0.scale_frequency()) {
        m = rescale_matrix(psi.grid0, new_frequency0) * m;
    }
    if (new_frequency1 != psi.grid1.scale_frequency()) {
        m = m * rescale_matrix(psi.grid1, new_frequency1).transpose();
    }
    Wavefunction2D w = Wavefunction2D::from_matrix(g0, g1, m);
    const double before = psi.norm_squared();
    const double after = w.norm_squared();
    check_norm_loss(before, after, "rescale_reference");
    const double scale = std::sqrt(before / after);
    for (Complex &a : w.amplitudes) {
        a *= scale;
    }
    return w;
}

Eigen::VectorXcd fock_amplitudes(const Wavefunction1D &psi, double omega_ref,
                                 int n_max) {
    const Eigen::MatrixXd h = fock_table(psi.grid, omega_ref, n_max);
    const Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes.data(),
                                               psi.grid.size());
    return (h.cast<Complex>() * v) * psi.grid.dx();
}

Eigen::MatrixXcd fock_amplitudes(const Wavefunction2D &psi,
                                 double omega_ref0, double omega_ref1,
                                 int n_max) {
    const Eigen::MatrixXcd h0 =
        fock_table(psi.grid0, omega_ref0, n_max).cast<Complex>();
    const Eigen::MatrixXcd h1 =
        fock_table(psi.grid1, omega_ref1, n_max).cast<Complex>();
    return h0 * psi.as_matrix() * h1.transpose() * psi.cell();
}

Eigen::VectorXd fock_populations(const Wavefunction1D &psi, double omega_ref,
                                 int n_max) {
    return fock_amplitudes(psi, omega_ref, n_max).cwiseAbs2();
}

Eigen::MatrixXd fock_populations(const Wavefunction2D &psi, double omega_ref0,
                                 double omega_ref1, int n_max) {
    return fock_amplitudes(psi, omega_ref0, omega_ref1, n_max).cwiseAbs2();
}

namespace {

/// K for sum_j phi_j (x_ref,j^2 + p_ref,j^2)/2 in grid coordinates.
Eigen::MatrixXd rotation_generator(const std::vector<Grid1D> &grids,
                                   const std::vector<double> &omega_ref,
                                   const std::vector<double> &phi) {
    const auto m = static_cast<Eigen::Index>(grids.size());
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const double s2 = omega_ref[j] / grids[j].scale_frequency();
        k(j, j) = phi[j] * s2;
        k(m + j, m + j) = phi[j] / s2;
    }
    return k;
}

std::vector<Complex> rotate(const std::vector<Grid1D> &grids,
                            const std::vector<Complex> &amps,
                            const Eigen::MatrixXd &k) {
    SpectralEngine engine(grids);
    engine.load(amps);
    engine.apply_quadratic(k, 1.0);
    const auto d = engine.data();
    return {d.begin(), d.end()};
}

} // namespace

Wavefunction1D apply_fock_phase(const Wavefunction1D &psi, double omega_ref,
                                double phi, const FockPhaseOptions &opt) {
    if (phi == 0.0) {
        return psi;
    }
    if (opt.method == PhaseGateMethod::Rotation) {
        const Eigen::MatrixXd k =
            rotation_generator({psi.grid}, {omega_ref}, {phi});
        return {psi.grid, rotate({psi.grid}, psi.amplitudes, k)};
    }
    const Eigen::MatrixXd h = fock_table(psi.grid, omega_ref, opt.n_cut);
    const Eigen::VectorXcd c = fock_amplitudes(psi, omega_ref, opt.n_cut);
    const double residual = psi.norm_squared() - c.squaredNorm();
    if (residual > opt.residual_tol) {
        throw ResolutionError("apply_fock_phase: Fock truncation residual " +
                              std::to_string(residual));
    }
    Eigen::VectorXcd cp(c.size());
    for (Eigen::Index n = 0; n < c.size(); ++n) {
        cp(n) = c(n) * std::polar(1.0, -phi * (n + 0.5));
    }
    const Eigen::VectorXcd out = h.cast<Complex>().transpose() * cp;
    return {psi.grid, {out.data(), out.data() + out.size()}};
}

Wavefunction2D apply_fock_phase(const Wavefunction2D &psi,
                                double omega_ref0, double omega_ref1,
                                double phi0, double phi1,
                                const FockPhaseOptions &opt) {
    if (phi0 == 0.0 && phi1 == 0.0) {
        return psi;
    }
    if (opt.method == PhaseGateMethod::Rotation) {
        const std::vector<Grid1D> grids{psi.grid0, psi.grid1};
        const Eigen::MatrixXd k = rotation_generator(
            grids, {omega_ref0, omega_ref1}, {phi0, phi1});
        return {psi.grid0, psi.grid1, rotate(grids, psi.amplitudes, k)};
    }
    const Eigen::MatrixXd h0 = fock_table(psi.grid0, omega_ref0, opt.n_cut);
    const Eigen::MatrixXd h1 = fock_table(psi.grid1, omega_ref1, opt.n_cut);
    Eigen::MatrixXcd c =
        fock_amplitudes(psi, omega_ref0, omega_ref1, opt.n_cut);
    const double residual = psi.norm_squared() - c.squaredNorm();
    if (residual > opt.residual_tol) {
        throw ResolutionError("apply_fock_phase: Fock truncation residual " +
                              std::to_string(residual));
    }
    for (Eigen::Index a = 0; a < c.rows(); ++a) {
        for (Eigen::Index b = 0; b < c.cols(); ++b) {
            c(a, b) *= std::polar(1.0, -phi0 * (a + 0.5) - phi1 * (b + 0.5));
        }
    }
    const Eigen::MatrixXcd out = h0.cast<Complex>().transpose() * c *
                                 h1.cast<Complex>();
    return Wavefunction2D::from_matrix(psi.grid0, psi.grid1, out);
}

double oscillator_energy(const Wavefunction1D &psi) {
    double x2 = 0.0;
    double norm = 0.0;
    for (int i = 0; i < psi.grid.size(); ++i) {
        const double w = std::norm(psi.amplitudes[i]);
        x2 += w * psi.grid.x(i) * psi.grid.x(i);
        norm += w;
    }
    SpectralEngine engine({psi.grid});
    engine.load(psi.amplitudes);
    engine.forward();
    const auto d = engine.data();
    double p2 = 0.0;
    double pnorm = 0.0;
    for (int k = 0; k < psi.grid.size(); ++k) {
        const double w = std::norm(d[k]);
        p2 += w * psi.grid.p(k) * psi.grid.p(k);
        pnorm += w;
    }
    return 0.5 * (x2 / norm + p2 / pnorm);
}

Complex inner_product(const Wavefunction1D &a, const Wavefunction1D &b) {
    require_same(a.grid, b.grid, "inner_product");
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i) {
        s += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    }
    return s * a.grid.dx();
}

Complex inner_product(const Wavefunction2D &a, const Wavefunction2D &b) {
    require_same(a.grid0, b.grid0, "inner_product");
    require_same(a.grid1, b.grid1, "inner_product");
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i) {
        s += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    }
    return s * a.cell();
}

namespace {
Fidelity make_fidelity(Complex overlap) {
    Fidelity f;
    f.overlap = overlap;
    f.magnitude = std::min(1.0, std::abs(overlap));
    f.squared = f.magnitude * f.magnitude;
    return f;
}
} // namespace

Fidelity fidelity(const Wavefunction1D &psi, const Wavefunction1D &target) {
    return make_fidelity(inner_product(target, psi));
}

Fidelity fidelity(const Wavefunction2D &psi, const Wavefunction2D &target) {
    return make_fidelity(inner_product(target, psi));
}

std::vector<double> marginal(const Wavefunction2D &psi, int mode) {
    if (mode != 0 && mode != 1) {
        throw DomainError("marginal: mode must be 0 or 1");
    }
    const int n0 = psi.grid0.size();
    const int n1 = psi.grid1.size();
    std::vector<double> out(mode == 0 ? n0 : n1, 0.0);
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            out[mode == 0 ? i : j] += std::norm(psi.at(i, j));
        }
    }
    const double w = mode == 0 ? psi.grid1.dx() : psi.grid0.dx();
    for (double &v : out) {
        v *= w;
    }
    return out;
}

std::vector<double> density(const Wavefunction1D &psi) {
    std::vector<double> out(psi.amplitudes.size());
    std::transform(psi.amplitudes.begin(), psi.amplitudes.end(), out.begin(),
                   [](Complex a) { return std::norm(a); });
    return out;
}

double l1_distance(std::span<const double> a, std::span<const double> b,
                   double dx) {
    if (a.size() != b.size()) {
        throw DomainError("l1_distance: length mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::abs(a[i] - b[i]);
    }
    return s * dx;
}

void write_state(const std::filesystem::path &path,
                 const Wavefunction2D &psi) {
    if (psi.grid0.span() != psi.grid1.span()) {
        throw DomainError("write_state: both modes must share the span");
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw DomainError("write_state: cannot open " + path.string());
    }
    write_f64(os, psi.grid0.size());
    write_f64(os, psi.grid1.size());
    write_f64(os, psi.grid0.span());
    write_f64(os, psi.grid0.scale_frequency());
    write_f64(os, psi.grid1.scale_frequency());
    for (const Complex &a : psi.amplitudes) {
        write_f64(os, a.real());
        write_f64(os, a.imag());
    }
}

Wavefunction2D read_state(const std::filesystem::path &path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw DomainError("read_state: cannot open " + path.string());
    }
    const auto n0 = static_cast<int>(read_f64(is));
    const auto n1 = static_cast<int>(read_f64(is));
    const double span = read_f64(is);
    const double w0 = read_f64(is);
    const double w1 = read_f64(is);
    Wavefunction2D psi(Grid1D(n0, span, w0), Grid1D(n1, span, w1));
    for (Complex &a : psi.amplitudes) {
        const double re = read_f64(is);
        const double im = read_f64(is);
        a = {re, im};
    }
    return psi;
}

void write_marginal_csv(const std::filesystem::path &path, const Grid1D &grid,
                        std::span<const double> density) {
    if (density.size() != static_cast<std::size_t>(grid.size())) {
        throw DomainError("write_marginal_csv: length mismatch");
    }
    std::ofstream os(path);
    if (!os) {
        throw DomainError("write_marginal_csv: cannot open " + path.string());
    }
    os << "x,density\n" << std::setprecision(17);
    for (int i = 0; i < grid.size(); ++i) {
        os << grid.x(i) << ',' << density[i] << '\n';
    }
}

} // namespace odb
