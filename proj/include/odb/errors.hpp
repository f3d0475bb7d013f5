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

#include <stdexcept>
#include <string>

namespace odb {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// A designed b(t) ramp whose induced ω²(t) goes negative.
class UnrealizablePulseError : public std::runtime_error {
  public:
    UnrealizablePulseError(const std::string &what, double t)
        : std::runtime_error(what), t_(t) {}
    [[nodiscard]] double time() const noexcept { return t_; }

  private:
    double t_;
};

/// Quadrature or ODE integration failed to reach its tolerance.
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// The grid cannot represent the requested state to the required accuracy.
class ResolutionError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Propagation drifted outside its budget (norm, halving test).
class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Inconsistent run configuration (bad keys, unresolved ramps, ...).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace odb
