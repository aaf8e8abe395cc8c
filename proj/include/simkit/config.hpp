// SPDX-License-Identifier: Apache-2.0
//
// simkit: link-level simulation library for IRS-assisted OFDM uplinks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SIMKIT_CONFIG_HPP
#define SIMKIT_CONFIG_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "simkit/channel.hpp"

namespace simkit {

/// Configuration problem: bad file, unknown/duplicate key, malformed value,
/// or violated parameter invariant. `field` names the offending key.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string field_name, const std::string &message)
        : std::runtime_error(message), field(std::move(field_name)) {}

    std::string field;
};

enum class OverheadModel { symbol, resource_element, both };

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Every scalar parameter of the simulated system. Defaults reproduce the
/// reference setup: 64 sub-carriers, 8-sample CP, 6 taps, a 12x12 surface in
/// 12 groups, 150-symbol frames, 0 dBm transmit power, -80 dBm noise.
struct SystemConfig {
    int n = 64;
    int np = 64;
    int lcp = 8;
    int l = 6;
    int m = 12;
    int frame_symbols = 150;
    double pt_dbm = 0.0;
    double noise_dbm = -80.0;
    double gamma_db = 9.0;
    double eta = 0.5;
    double pathloss_exp_direct = 3.5;
    double pathloss_exp_user_irs = 2.4;
    double pathloss_exp_irs_ap = 2.2;
    double ref_loss_db = 30.0;
    IrsLayout layout{12, 12, 3, 4};
    Geometry geometry{50.0, 2.0, 45.0};
    int sdr_randomizations = 100;
    int realizations = 2000;
    std::uint64_t seed = 1;
    OverheadModel overhead_model = OverheadModel::symbol;

    double pt_watts() const { return dbm_to_watts(pt_dbm); }
    double noise_watts() const { return dbm_to_watts(noise_dbm); }
    double gamma_linear() const { return db_to_linear(gamma_db); }

    FadingProfile profile() const {
        return FadingProfile{l,
                             eta,
                             pathloss_exp_direct,
                             pathloss_exp_user_irs,
                             pathloss_exp_irs_ap,
                             ref_loss_db};
    }

    bool operator==(const SystemConfig &o) const {
        return n == o.n && np == o.np && lcp == o.lcp && l == o.l && m == o.m &&
               frame_symbols == o.frame_symbols && pt_dbm == o.pt_dbm &&
               noise_dbm == o.noise_dbm && gamma_db == o.gamma_db && eta == o.eta &&
               pathloss_exp_direct == o.pathloss_exp_direct &&
               pathloss_exp_user_irs == o.pathloss_exp_user_irs &&
               pathloss_exp_irs_ap == o.pathloss_exp_irs_ap && ref_loss_db == o.ref_loss_db &&
               layout.rows == o.layout.rows && layout.cols == o.layout.cols &&
               layout.tile_rows == o.layout.tile_rows && layout.tile_cols == o.layout.tile_cols &&
               geometry.irs_ap_distance == o.geometry.irs_ap_distance &&
               geometry.user_lateral_offset == o.geometry.user_lateral_offset &&
               geometry.user_horizontal == o.geometry.user_horizontal &&
               sdr_randomizations == o.sdr_randomizations && realizations == o.realizations &&
               seed == o.seed && overhead_model == o.overhead_model;
    }
};

inline const char *overhead_model_name(OverheadModel model) {
    switch (model) {
    case OverheadModel::symbol:
        return "symbol";
    case OverheadModel::resource_element:
        return "resource_element";
    case OverheadModel::both:
        return "both";
    }
    return "symbol";
}

/// Check every SystemConfig invariant; throws ConfigError naming the field.
inline void validate_config(const SystemConfig &cfg) {
    if (cfg.n < 1)
        throw ConfigError("n", "n: must be >= 1");
    if (cfg.l < 1)
        throw ConfigError("l", "l: must be >= 1");
    if (cfg.l > cfg.n)
        throw ConfigError("l", "l: must not exceed n");
    if (cfg.np < 1)
        throw ConfigError("np", "np: must be >= 1");
    if (cfg.n % cfg.np != 0)
        throw ConfigError("np", "np: must divide n (comb spacing n/np must be integer)");
    if (cfg.np < cfg.l)
        throw ConfigError("np", "np: must be >= l (pilot count below the delay spread aliases "
                                "the impulse response)");
    if (cfg.lcp < cfg.l)
        throw ConfigError("lcp", "lcp: cyclic prefix must be >= l");
    if (cfg.m < 1)
        throw ConfigError("m", "m: must be >= 1");
    try {
        cfg.layout.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError("layout", std::string("layout: ") + e.what());
    }
    if (cfg.layout.num_groups() != cfg.m)
        throw ConfigError("m", "m: layout tiling produces " +
                                   std::to_string(cfg.layout.num_groups()) +
                                   " groups, expected m");
    if (cfg.frame_symbols <= cfg.m + 1)
        throw ConfigError("frame_symbols",
                          "frame_symbols: frame must exceed the m+1 pilot symbols");
    if (cfg.eta < 0.0)
        throw ConfigError("eta", "eta: must be >= 0");
    if (cfg.l == 1 && cfg.eta > 0.0)
        throw ConfigError("eta", "eta: must be 0 when l == 1 (no NLoS taps exist)");
    if (cfg.gamma_db < 0.0)
        throw ConfigError("gamma_db", "gamma_db: must be >= 0 (gamma >= 1 linear)");
    if (cfg.geometry.irs_ap_distance <= 0.0)
        throw ConfigError("geometry.irs_ap_distance", "geometry.irs_ap_distance: must be > 0");
    if (cfg.geometry.user_lateral_offset <= 0.0)
        throw ConfigError("geometry.user_lateral_offset",
                          "geometry.user_lateral_offset: must be > 0");
    if (cfg.sdr_randomizations < 1)
        throw ConfigError("sdr_randomizations", "sdr_randomizations: must be >= 1");
    if (cfg.realizations < 1)
        throw ConfigError("realizations", "realizations: must be >= 1");
}

namespace detail {

inline std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string &key, const std::string &value, int line) {
    std::size_t pos = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &pos);
    } catch (const std::exception &) {
        pos = 0;
    }
    if (pos != value.size() || value.empty())
        throw ConfigError(key, "line " + std::to_string(line) + ": invalid numeric value '" +
                                   value + "' for key '" + key + "'");
    return out;
}

inline long long parse_int(const std::string &key, const std::string &value, int line) {
    std::size_t pos = 0;
    long long out = 0;
    try {
        out = std::stoll(value, &pos);
    } catch (const std::exception &) {
        pos = 0;
    }
    if (pos != value.size() || value.empty())
        throw ConfigError(key, "line " + std::to_string(line) + ": invalid integer value '" +
                                   value + "' for key '" + key + "'");
    return out;
}

inline std::uint64_t parse_u64(const std::string &key, const std::string &value, int line) {
    std::size_t pos = 0;
    std::uint64_t out = 0;
    try {
        out = std::stoull(value, &pos);
    } catch (const std::exception &) {
        pos = 0;
    }
    if (pos != value.size() || value.empty() || value.front() == '-')
        throw ConfigError(key, "line " + std::to_string(line) +
                                   ": invalid unsigned integer value '" + value + "' for key '" +
                                   key + "'");
    return out;
}

} // namespace detail

/// Parse a flat `key = value` config file ('#' starts a comment; unknown and
/// duplicate keys are errors). Keys not present keep their defaults. Tile
/// dimensions may be given explicitly; otherwise the most-square tiling for
/// `m` is derived. The result is fully validated.
inline SystemConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("", "cannot open config file '" + path + "'");

    SystemConfig cfg;
    int explicit_tile_rows = 0;
    int explicit_tile_cols = 0;
    std::map<std::string, int> seen;

    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos)
            raw = raw.substr(0, hash);
        const std::string stripped = detail::trim(raw);
        if (stripped.empty())
            continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("", "line " + std::to_string(line) +
                                      ": expected 'key = value', got '" + stripped + "'");
        const std::string key = detail::trim(stripped.substr(0, eq));
        const std::string value = detail::trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError("", "line " + std::to_string(line) + ": empty key");
        if (seen.count(key))
            throw ConfigError(key, "line " + std::to_string(line) + ": duplicate key '" + key +
                                       "' (first set on line " + std::to_string(seen[key]) + ")");
        seen[key] = line;

        if (key == "n")
            cfg.n = static_cast<int>(detail::parse_int(key, value, line));
        else if (key == "np")
            cfg.np = static_cast<int>(detail::parse_int(key, value, line));
        else if (key == "lcp")
            cfg.lcp = static_cast<int>(detail::parse_int(key, value, line));
        else if (key == "l")
            cfg.l = static_cast<int>(detail::parse_int(key, value, line));
        else if (key == "m")
            cfg.m = static_cast<int>(detail::parse_int(key, value, line));
        else if (key == "frame_symbols")
            cfg.frame_symbols = static_cast<int>(detail::parse_int(key, value, line));
        else if (key == "pt_dbm")
            cfg.pt_dbm = detail::parse_double(key, value, line);
        else if (key == "noise_dbm")
            cfg.noise_dbm = detail::parse_double(key, value, line);
        else if (key == "gamma_db")
            cfg.gamma_db = detail::parse_double(key, value, line);
        else if (key == "eta")
            cfg.eta = detail::parse_double(key, value, line);
        else if (key == "pathloss_exp_direct")
            cfg.pathloss_exp_direct = detail::parse_double(key, value, line);
        else if (key == "pathloss_exp_user_irs")
            cfg.pathloss_exp_user_irs = detail::parse_double(key, value, line);
        else if (key == "pathloss_exp_irs_ap")
            cfg.pathloss_exp_irs_ap = detail::parse_double(key, value, line);
        else if (key == "ref_loss_db")
            cfg.ref_loss_db = detail::parse_double(key, value, line);
        else if (key == "layout.rows")
            cfg.layout.rows = static_cast<int>(detail::parse_int(key, value, line));
        else if (key == "layout.cols")
            cfg.layout.cols = static_cast<int>(detail::parse_int(key, value, line));
        else if (key == "layout.tile_rows")
            explicit_tile_rows = static_cast<int>(detail::parse_int(key, value, line));
        else if (key == "layout.tile_cols")
            explicit_tile_cols = static_cast<int>(detail::parse_int(key, value, line));
        else if (key == "geometry.irs_ap_distance")
            cfg.geometry.irs_ap_distance = detail::parse_double(key, value, line);
        else if (key == "geometry.user_lateral_offset")
            cfg.geometry.user_lateral_offset = detail::parse_double(key, value, line);
        else if (key == "geometry.user_horizontal")
            cfg.geometry.user_horizontal = detail::parse_double(key, value, line);
        else if (key == "sdr_randomizations")
            cfg.sdr_randomizations = static_cast<int>(detail::parse_int(key, value, line));
        else if (key == "realizations")
            cfg.realizations = static_cast<int>(detail::parse_int(key, value, line));
        else if (key == "seed")
            cfg.seed = detail::parse_u64(key, value, line);
        else if (key == "overhead_model") {
            if (value == "symbol")
                cfg.overhead_model = OverheadModel::symbol;
            else if (value == "resource_element")
                cfg.overhead_model = OverheadModel::resource_element;
            else if (value == "both")
                cfg.overhead_model = OverheadModel::both;
            else
                throw ConfigError(key, "line " + std::to_string(line) +
                                           ": overhead_model must be symbol, resource_element, "
                                           "or both");
        } else
            throw ConfigError(key,
                              "line " + std::to_string(line) + ": unknown key '" + key + "'");
    }

    if ((explicit_tile_rows > 0) != (explicit_tile_cols > 0))
        throw ConfigError("layout.tile_rows",
                          "layout.tile_rows/layout.tile_cols must be set together");
    if (explicit_tile_rows > 0) {
        cfg.layout.tile_rows = explicit_tile_rows;
        cfg.layout.tile_cols = explicit_tile_cols;
    } else {
        try {
            cfg.layout = IrsLayout::with_groups(cfg.layout.rows, cfg.layout.cols, cfg.m);
        } catch (const std::invalid_argument &e) {
            throw ConfigError("m", std::string("m: ") + e.what());
        }
    }

    validate_config(cfg);
    return cfg;
}

/// Write a config file that load_config round-trips exactly.
inline void save_config(const SystemConfig &cfg, const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("", "cannot write config file '" + path + "'");
    auto num = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    out << "# simkit configuration\n";
    out << "n = " << cfg.n << "\n";
    out << "np = " << cfg.np << "\n";
    out << "lcp = " << cfg.lcp << "\n";
    out << "l = " << cfg.l << "\n";
    out << "m = " << cfg.m << "\n";
    out << "frame_symbols = " << cfg.frame_symbols << "\n";
    out << "pt_dbm = " << num(cfg.pt_dbm) << "\n";
    out << "noise_dbm = " << num(cfg.noise_dbm) << "\n";
    out << "gamma_db = " << num(cfg.gamma_db) << "\n";
    out << "eta = " << num(cfg.eta) << "\n";
    out << "pathloss_exp_direct = " << num(cfg.pathloss_exp_direct) << "\n";
    out << "pathloss_exp_user_irs = " << num(cfg.pathloss_exp_user_irs) << "\n";
    out << "pathloss_exp_irs_ap = " << num(cfg.pathloss_exp_irs_ap) << "\n";
    out << "ref_loss_db = " << num(cfg.ref_loss_db) << "\n";
    out << "layout.rows = " << cfg.layout.rows << "\n";
    out << "layout.cols = " << cfg.layout.cols << "\n";
    out << "layout.tile_rows = " << cfg.layout.tile_rows << "\n";
    out << "layout.tile_cols = " << cfg.layout.tile_cols << "\n";
    out << "geometry.irs_ap_distance = " << num(cfg.geometry.irs_ap_distance) << "\n";
    out << "geometry.user_lateral_offset = " << num(cfg.geometry.user_lateral_offset) << "\n";
    out << "geometry.user_horizontal = " << num(cfg.geometry.user_horizontal) << "\n";
    out << "sdr_randomizations = " << cfg.sdr_randomizations << "\n";
    out << "realizations = " << cfg.realizations << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "overhead_model = " << overhead_model_name(cfg.overhead_model) << "\n";
}

} // namespace simkit

#endif // SIMKIT_CONFIG_HPP
