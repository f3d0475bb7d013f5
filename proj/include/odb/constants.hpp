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

#include <numbers>

namespace odb::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// CODATA 2018
inline constexpr double elementary_charge = 1.602176634e-19;   // C
inline constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg

/// Cyclic MHz to angular rad/s.
constexpr double mhz_to_rad_s(double f_mhz) { return two_pi * f_mhz * 1e6; }

} // namespace odb::constants
