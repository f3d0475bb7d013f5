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

#include "odb/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "odb/constants.hpp"
#include "odb/errors.hpp"
#include "odb/grid.hpp"

namespace odb {

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string &key, const std::string &v) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size() ||
        !std::isfinite(out)) {
        throw ConfigError("config: '" + key + "' expects a number, got '" +
                          v + "'");
    }
    return out;
}

int to_int(const std::string &key, const std::string &v) {
    int out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw ConfigError("config: '" + key + "' expects an integer, got '" +
                          v + "'");
    }
    return out;
}

bool to_bool(const std::string &key, const std::string &v) {
    if (v == "true" || v == "1" || v == "yes") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no") {
        return false;
    }
    throw ConfigError("config: '" + key + "' expects true/false, got '" + v +
                      "'");
}

struct Field {
    std::function<void(ExperimentConfig &, const std::string &,
                       const std::string &)>
        set;
    std::function<std::string(const ExperimentConfig &)> get;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

#define ODB_DOUBLE(name)                                                     \
    {#name,                                                                  \
     {[](ExperimentConfig &c, const std::string &k, const std::string &v) {  \
          c.name = to_double(k, v);                                          \
      },                                                                     \
      [](const ExperimentConfig &c) { return fmt(c.name); }}}
#define ODB_INT(name)                                                        \
    {#name,                                                                  \
     {[](ExperimentConfig &c, const std::string &k, const std::string &v) {  \
          c.name = to_int(k, v);                                             \
      },                                                                     \
      [](const ExperimentConfig &c) { return std::to_string(c.name); }}}
#define ODB_BOOL(name)                                                       \
    {#name,                                                                  \
     {[](ExperimentConfig &c, const std::string &k, const std::string &v) {  \
          c.name = to_bool(k, v);                                            \
      },                                                                     \
      [](const ExperimentConfig &c) {                                        \
          return std::string(c.name ? "true" : "false");                     \
      }}}

const std::map<std::string, Field> &fields() {
    static const std::map<std::string, Field> f = {
        ODB_DOUBLE(mass_u),
        ODB_DOUBLE(d_um),
        ODB_DOUBLE(omega_h_mhz),
        ODB_DOUBLE(omega_l_mhz),
        ODB_DOUBLE(omega_m_mhz),
        ODB_DOUBLE(t_fc_us),
        ODB_DOUBLE(sigma),
        ODB_DOUBLE(theta_pi),
        ODB_DOUBLE(swap_theta_pi),
        ODB_INT(grid_points),
        ODB_DOUBLE(grid_span),
        ODB_DOUBLE(dt_ns),
        ODB_BOOL(hopping_during_fc),
        ODB_DOUBLE(gkp_delta),
        ODB_DOUBLE(gkp_epsilon),
        ODB_INT(gkp_s_max),
        {"output_dir",
         {[](ExperimentConfig &c, const std::string &, const std::string &v) {
              c.output_dir = v;
          },
          [](const ExperimentConfig &c) { return c.output_dir; }}},
        ODB_BOOL(physical_phase_gate),
        ODB_INT(snapshot_stride),
        ODB_DOUBLE(detune_dt_ns),
        ODB_INT(detune_grid_points),
        ODB_DOUBLE(boundary_tol),
        ODB_INT(static_step_multiplier),
    };
    return f;
}

#undef ODB_DOUBLE
#undef ODB_INT
#undef ODB_BOOL

} // namespace

double ExperimentConfig::omega_h() const {
    return constants::mhz_to_rad_s(omega_h_mhz);
}
double ExperimentConfig::omega_l() const {
    return constants::mhz_to_rad_s(omega_l_mhz);
}
double ExperimentConfig::omega_m() const {
    return constants::mhz_to_rad_s(omega_m_mhz);
}
double ExperimentConfig::mass_kg() const {
    return mass_u * constants::atomic_mass_unit;
}
double ExperimentConfig::distance_m() const { return d_um * 1e-6; }

double ExperimentConfig::span() const {
    return grid_span > 0.0 ? grid_span : Grid1D::balanced_span(grid_points);
}

void ExperimentConfig::validate() const {
    if (!(omega_l_mhz > 0.0 && omega_l_mhz < omega_m_mhz &&
          omega_m_mhz < omega_h_mhz)) {
        throw ConfigError("config: need 0 < omega_l < omega_m < omega_h");
    }
    if (!(mass_u > 0.0) || !(d_um > 0.0)) {
        throw ConfigError("config: mass and distance must be > 0");
    }
    if (!(t_fc_us > 0.0) || !(sigma > 0.0) || !(dt_ns > 0.0) ||
        !(detune_dt_ns > 0.0)) {
        throw ConfigError("config: durations and sigma must be > 0");
    }
    if (theta_pi < 0.0 || swap_theta_pi < 0.0) {
        throw ConfigError("config: theta must be >= 0");
    }
    const auto pow2 = [](int n) { return n >= 2 && (n & (n - 1)) == 0; };
    if (!pow2(grid_points) || !pow2(detune_grid_points)) {
        throw ConfigError("config: grid sizes must be powers of two");
    }
    if (grid_span < 0.0) {
        throw ConfigError("config: grid_span must be >= 0");
    }
    if (!(gkp_delta > 0.0) || !(gkp_epsilon > 0.0) || gkp_s_max < 1) {
        throw ConfigError("config: invalid GKP parameters");
    }
    if (snapshot_stride < 0 || static_step_multiplier < 1) {
        throw ConfigError("config: invalid stride or step multiplier");
    }
    if (!(boundary_tol > 0.0)) {
        throw ConfigError("config: boundary_tol must be > 0");
    }
}

std::string ExperimentConfig::to_text() const {
    std::ostringstream os;
    for (const auto &[key, field] : fields()) {
        os << key << " = " << field.get(*this) << '\n';
    }
    return os.str();
}

ExperimentConfig parse_config(const std::string &text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key = value");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        const auto it = fields().find(key);
        if (it == fields().end()) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": unknown key '" + key + "'");
        }
        it->second.set(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream is(path);
    if (!is) {
        throw ConfigError("config: cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

} // namespace odb
