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

#include "odb/quadratic.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <fftw3.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "odb/errors.hpp"

namespace odb {

using cd = std::complex<double>;

Eigen::MatrixXd quadratic_flow(const Eigen::MatrixXd &k, double t) {
    const Eigen::Index n = k.rows();
    if (k.cols() != n || n % 2 != 0) {
        throw DomainError("quadratic_flow: K must be square of even size");
    }
    const Eigen::Index m = n / 2;
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    j.topRightCorner(m, m).setIdentity();
    j.bottomLeftCorner(m, m) = -Eigen::MatrixXd::Identity(m, m);
    const Eigen::MatrixXd gen = (j * k * t).eval();
    return gen.exp();
}

ShearFactors shear_factorization(const Eigen::MatrixXd &s) {
    const Eigen::Index m = s.rows() / 2;
    const Eigen::MatrixXd s11 = s.topLeftCorner(m, m);
    const Eigen::MatrixXd s12 = s.topRightCorner(m, m);
    const Eigen::MatrixXd s22 = s.bottomRightCorner(m, m);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(m, m);

    Eigen::FullPivLU<Eigen::MatrixXd> lu(s12);
    if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-300) {
        throw NumericError("shear_factorization: singular momentum block");
    }
    const Eigen::MatrixXd inv = lu.inverse();
    ShearFactors f;
    f.b = 0.5 * (s12 + s12.transpose());
    Eigen::MatrixXd a2 = inv * (id - s11);
    Eigen::MatrixXd a1 = (id - s22) * inv;
    f.a_first = 0.5 * (a2 + a2.transpose());
    f.a_last = 0.5 * (a1 + a1.transpose());
    return f;
}

namespace {

std::mutex &planner_mutex() {
    static std::mutex m;
    return m;
}

/// exp(-i v'Mv/2) over the product of 1-D coordinate lists, scaled.
void fill_quadratic_phase(std::vector<cd> &out,
                          const std::vector<std::vector<double>> &axes,
                          const Eigen::MatrixXd &mat, double scale) {
    if (axes.size() == 1) {
        const auto &v = axes[0];
        out.resize(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            out[i] = std::polar(scale, -0.5 * mat(0, 0) * v[i] * v[i]);
        }
        return;
    }
    const auto &v0 = axes[0];
    const auto &v1 = axes[1];
    const std::size_t n0 = v0.size();
    const std::size_t n1 = v1.size();
    out.resize(n0 * n1);
    std::vector<cd> col(n1);
    for (std::size_t j = 0; j < n1; ++j) {
        col[j] = std::polar(1.0, -0.5 * mat(1, 1) * v1[j] * v1[j]);
    }
    const double c = mat(0, 1);
    for (std::size_t i = 0; i < n0; ++i) {
        const cd row = std::polar(scale, -0.5 * mat(0, 0) * v0[i] * v0[i]);
        cd* dst = out.data() + i * n1;
        if (c == 0.0) {
            for (std::size_t j = 0; j < n1; ++j) {
                dst[j] = row * col[j];
            }
            continue;
        }
        // exp(-i c v0 v1) has no closed recurrence on the FFT-ordered
        // momentum axis, so evaluate it directly.
        const double cv0 = c * v0[i];
        for (std::size_t j = 0; j < n1; ++j) {
            dst[j] = row * col[j] * std::polar(1.0, -cv0 * v1[j]);
        }
    }
}

struct PhaseEntry {
    Eigen::MatrixXd key;
    std::vector<cd> table;
    std::size_t last_use = 0;
};

/// Few-slot cache; a propagation alternates between a handful of factors.
struct PhaseCache {
    static constexpr std::size_t slots = 6;
    std::vector<PhaseEntry> entries;
    std::size_t clock = 0;
};

} // namespace

struct SpectralEngine::Impl {
    std::vector<Grid1D> grids;
    std::vector<std::vector<double>> x_axes;
    std::vector<std::vector<double>> p_axes;
    std::size_t total = 0;
    fftw_complex *buffer = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    PhaseCache x_cache;
    PhaseCache p_cache;

    cd *data() { return reinterpret_cast<cd *>(buffer); }

    ~Impl() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd != nullptr) {
            fftw_destroy_plan(fwd);
        }
        if (bwd != nullptr) {
            fftw_destroy_plan(bwd);
        }
        if (buffer != nullptr) {
            fftw_free(buffer);
        }
    }

    void multiply(PhaseCache &cache,
                  const std::vector<std::vector<double>> &axes,
                  const Eigen::MatrixXd &mat, double scale) {
        PhaseEntry *hit = nullptr;
        for (PhaseEntry &e : cache.entries) {
            if (e.key.rows() == mat.rows() && e.key == mat) {
                hit = &e;
                break;
            }
        }
        if (hit == nullptr) {
            if (cache.entries.size() < PhaseCache::slots) {
                cache.entries.emplace_back();
                hit = &cache.entries.back();
            } else {
                hit = &*std::min_element(
                    cache.entries.begin(), cache.entries.end(),
                    [](const PhaseEntry &a, const PhaseEntry &b) {
                        return a.last_use < b.last_use;
                    });
            }
            fill_quadratic_phase(hit->table, axes, mat, scale);
            hit->key = mat;
        }
        hit->last_use = ++cache.clock;
        cd *d = data();
        const cd *t = hit->table.data();
        for (std::size_t k = 0; k < total; ++k) {
            d[k] *= t[k];
        }
    }
};

SpectralEngine::SpectralEngine(std::vector<Grid1D> grids)
    : impl_(std::make_unique<Impl>()) {
    if (grids.empty() || grids.size() > 2) {
        throw DomainError("SpectralEngine supports one or two modes");
    }
    impl_->grids = std::move(grids);
    impl_->total = 1;
    std::vector<int> dims;
    for (const Grid1D &g : impl_->grids) {
        impl_->total *= static_cast<std::size_t>(g.size());
        dims.push_back(g.size());
        std::vector<double> xs(g.size());
        std::vector<double> ps(g.size());
        for (int i = 0; i < g.size(); ++i) {
            xs[i] = g.x(i);
            ps[i] = g.p(i);
        }
        impl_->x_axes.push_back(std::move(xs));
        impl_->p_axes.push_back(std::move(ps));
    }
    std::lock_guard<std::mutex> lock(planner_mutex());
    impl_->buffer = static_cast<fftw_complex *>(
        fftw_malloc(sizeof(fftw_complex) * impl_->total));
    impl_->fwd = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(),
                               impl_->buffer, impl_->buffer, FFTW_FORWARD,
                               FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(),
                               impl_->buffer, impl_->buffer, FFTW_BACKWARD,
                               FFTW_ESTIMATE);
    std::fill(impl_->data(), impl_->data() + impl_->total, cd(0.0));
}

SpectralEngine::~SpectralEngine() = default;
SpectralEngine::SpectralEngine(SpectralEngine &&) noexcept = default;
SpectralEngine &SpectralEngine::operator=(SpectralEngine &&) noexcept = default;

int SpectralEngine::modes() const noexcept {
    return static_cast<int>(impl_->grids.size());
}
std::size_t SpectralEngine::size() const noexcept { return impl_->total; }
const std::vector<Grid1D> &SpectralEngine::grids() const noexcept {
    return impl_->grids;
}

std::span<cd> SpectralEngine::data() noexcept {
    return {impl_->data(), impl_->total};
}
std::span<const cd> SpectralEngine::data() const noexcept {
    return {reinterpret_cast<const cd *>(impl_->buffer), impl_->total};
}

void SpectralEngine::load(std::span<const cd> amplitudes) {
    if (amplitudes.size() != impl_->total) {
        throw DomainError("SpectralEngine::load: size mismatch");
    }
    std::copy(amplitudes.begin(), amplitudes.end(), impl_->data());
}

void SpectralEngine::forward() { fftw_execute(impl_->fwd); }
void SpectralEngine::backward() { fftw_execute(impl_->bwd); }

void SpectralEngine::multiply_position_phase(const Eigen::MatrixXd &a) {
    impl_->multiply(impl_->x_cache, impl_->x_axes, a, 1.0);
}

void SpectralEngine::multiply_momentum_phase(const Eigen::MatrixXd &b) {
    impl_->multiply(impl_->p_cache, impl_->p_axes, b,
                    1.0 / static_cast<double>(impl_->total));
}

void SpectralEngine::apply_shears(const ShearFactors &f) {
    multiply_position_phase(f.a_first);
    forward();
    multiply_momentum_phase(f.b);
    backward();
    multiply_position_phase(f.a_last);
}

void SpectralEngine::apply_quadratic(const Eigen::MatrixXd &k, double t,
                                     double max_angle) {
    if (t == 0.0) {
        return;
    }
    const double rate = k.cwiseAbs().rowwise().sum().maxCoeff();
    const int steps = std::max(
        1, static_cast<int>(std::ceil(rate * std::abs(t) / max_angle)));
    const ShearFactors f =
        shear_factorization(quadratic_flow(k, t / steps));
    const Eigen::MatrixXd merged = f.a_last + f.a_first;
    multiply_position_phase(f.a_first);
    for (int s = 0; s < steps; ++s) {
        forward();
        multiply_momentum_phase(f.b);
        backward();
        multiply_position_phase(s + 1 < steps ? merged : f.a_last);
    }
}

double SpectralEngine::edge_mass(double fraction) const {
    const auto &grids = impl_->grids;
    const auto in_edge = [&](const std::vector<std::vector<double>> &axes,
                             const std::vector<double> &limits,
                             std::size_t flat) {
        if (axes.size() == 1) {
            return std::abs(axes[0][flat]) > limits[0];
        }
        const std::size_t n1 = axes[1].size();
        return std::abs(axes[0][flat / n1]) > limits[0] ||
               std::abs(axes[1][flat % n1]) > limits[1];
    };
    std::vector<double> x_lim;
    std::vector<double> p_lim;
    for (const Grid1D &g : grids) {
        x_lim.push_back((1.0 - fraction) * g.span());
        p_lim.push_back((1.0 - fraction) * g.p_max());
    }

    const auto d = data();
    double total = 0.0;
    double x_edge = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
        const double w = std::norm(d[k]);
        total += w;
        if (in_edge(impl_->x_axes, x_lim, k)) {
            x_edge += w;
        }
    }

    std::vector<cd> scratch(d.begin(), d.end());
    fftw_complex *tmp;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        tmp = static_cast<fftw_complex *>(
            fftw_malloc(sizeof(fftw_complex) * impl_->total));
    }
    std::copy(scratch.begin(), scratch.end(), reinterpret_cast<cd *>(tmp));
    fftw_execute_dft(impl_->fwd, tmp, tmp);
    const cd *ft = reinterpret_cast<const cd *>(tmp);
    double p_total = 0.0;
    double p_edge = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
        const double w = std::norm(ft[k]);
        p_total += w;
        if (in_edge(impl_->p_axes, p_lim, k)) {
            p_edge += w;
        }
    }
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_free(tmp);
    }
    if (total == 0.0) {
        return 0.0;
    }
    return std::max(x_edge / total, p_edge / p_total);
}

} // namespace odb
