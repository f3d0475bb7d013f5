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

#include <cmath>

#include "odb/constants.hpp"
#include "odb/errors.hpp"

namespace odb {

/// Uniform grid x in [-L, L) over the dimensionless coordinate
/// x = X / sqrt(hbar / (m omega)) of the oscillator at `scale_frequency`.
class Grid1D {
  public:
    Grid1D(int n_points, double span, double scale_frequency)
        : n_(n_points), span_(span), scale_frequency_(scale_frequency) {
        if (n_points < 2 || (n_points & (n_points - 1)) != 0) {
            throw DomainError("Grid1D: n_points must be a power of two");
        }
        if (!(span > 0.0) || !(scale_frequency > 0.0)) {
            throw DomainError("Grid1D: span and frequency must be positive");
        }
    }

    /// Span with equal position and momentum extent, L = sqrt(pi N / 2).
    static double balanced_span(int n_points) {
        return std::sqrt(constants::pi * n_points / 2.0);
    }
    static Grid1D balanced(int n_points, double scale_frequency) {
        return {n_points, balanced_span(n_points), scale_frequency};
    }

    [[nodiscard]] int size() const noexcept { return n_; }
    [[nodiscard]] double span() const noexcept { return span_; }
    [[nodiscard]] double scale_frequency() const noexcept {
        return scale_frequency_;
    }
    [[nodiscard]] double dx() const noexcept { return 2.0 * span_ / n_; }
    [[nodiscard]] double x(int i) const noexcept { return -span_ + i * dx(); }

    [[nodiscard]] double dp() const noexcept {
        return constants::pi / span_;
    }
    /// Momentum of FFT bin k (standard ordering, Nyquist bin negative).
    [[nodiscard]] double p(int k) const noexcept {
        return dp() * (k < n_ / 2 ? k : k - n_);
    }
    [[nodiscard]] double p_max() const noexcept {
        return constants::pi / dx();
    }

    /// Same sampling, different reference frequency.
    [[nodiscard]] Grid1D with_frequency(double omega) const {
        return {n_, span_, omega};
    }

    /// Same sampling points (ignores the reference frequency).
    [[nodiscard]] bool same_sampling(const Grid1D &o) const noexcept {
        return n_ == o.n_ && span_ == o.span_;
    }

    friend bool operator==(const Grid1D &a, const Grid1D &b) noexcept {
        return a.n_ == b.n_ && a.span_ == b.span_ &&
               a.scale_frequency_ == b.scale_frequency_;
    }

  private:
    int n_;
    double span_;
    double scale_frequency_;
};

} // namespace odb
