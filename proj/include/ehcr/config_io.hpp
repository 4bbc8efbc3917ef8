#ifndef EHCR_CONFIG_IO_HPP
#define EHCR_CONFIG_IO_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ehcr/config.hpp"
#include "ehcr/numerics.hpp"

namespace ehcr {

// Config files are flat `key = value` lines; `#` starts a comment. A value may
// carry a unit token that matches its key: dBm for *_dbm keys, s/ms/us for T,
// m for distances and bps/Hz for R. Keys not present keep their defaults.
//
//   P_b_dbm M_dbm N0_dbm P_c_dbm   powers in dBm
//   eta tau rho                     dimensionless
//   T                               seconds
//   R                               bps/Hz
//   alpha alpha_s                   path-loss exponents
//   d_min d_max d_STSR              meters
//   ideal                           true/false
//   K m L                           beacon link fading (L = beacon antennas; `mu` is an alias)
//   K_s m_s mu_s                    ST -> SR link fading (K_s, m_s default to K, m)

namespace config_io {

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::string at_line(int line, const std::string& msg) {
    return "config line " + std::to_string(line) + ": " + msg;
}

enum class Unit { none, dbm, time, meter, rate, flag, integer };

inline const std::map<std::string, Unit, std::less<>>& known_keys() {
    static const std::map<std::string, Unit, std::less<>> keys = {
        {"P_b_dbm", Unit::dbm}, {"M_dbm", Unit::dbm},     {"N0_dbm", Unit::dbm},   {"P_c_dbm", Unit::dbm},
        {"eta", Unit::none},    {"tau", Unit::none},      {"rho", Unit::none},     {"T", Unit::time},
        {"R", Unit::rate},      {"alpha", Unit::none},    {"alpha_s", Unit::none}, {"d_min", Unit::meter},
        {"d_max", Unit::meter}, {"d_STSR", Unit::meter},  {"ideal", Unit::flag},   {"K", Unit::none},
        {"m", Unit::integer},   {"L", Unit::integer},     {"K_s", Unit::none},     {"m_s", Unit::integer},
        {"mu_s", Unit::integer}, {"mu", Unit::integer},
    };
    return keys;
}

inline double parse_number(std::string_view text, int line, std::string_view key, std::string_view* rest) {
    double value = 0.0;
    const auto* begin = text.data();
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr == begin) {
        throw ConfigError(at_line(line, "cannot parse a number for '" + std::string(key) + "'"));
    }
    *rest = trim(std::string_view(ptr, static_cast<std::size_t>(end - ptr)));
    return value;
}

inline double apply_unit(Unit unit, double value, std::string_view suffix, int line, std::string_view key) {
    auto bad = [&] {
        return ConfigError(at_line(line, "unit '" + std::string(suffix) + "' not valid for '" + std::string(key) + "'"));
    };
    switch (unit) {
        case Unit::dbm:
            if (!suffix.empty() && suffix != "dBm" && suffix != "dbm") throw bad();
            return value;
        case Unit::time:
            if (suffix.empty() || suffix == "s") return value;
            if (suffix == "ms") return value * 1e-3;
            if (suffix == "us") return value * 1e-6;
            throw bad();
        case Unit::meter:
            if (!suffix.empty() && suffix != "m") throw bad();
            return value;
        case Unit::rate:
            if (!suffix.empty() && suffix != "bps/Hz") throw bad();
            return value;
        case Unit::integer:
            if (!suffix.empty()) throw bad();
            if (value != std::floor(value)) {
                throw ConfigError(at_line(line, "'" + std::string(key) + "' must be an integer"));
            }
            return value;
        default:
            if (!suffix.empty()) throw bad();
            return value;
    }
}

}  // namespace detail

/// Parses config text. Unknown keys, duplicates, and malformed values raise
/// ConfigError with the offending line number; the assembled configuration is
/// then validated.
inline SystemConfig parse_config(std::string_view text) {
    std::map<std::string, double> values;
    std::optional<bool> ideal;
    std::set<std::string> seen;

    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = detail::trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(detail::at_line(line_no, "expected 'key = value'"));
        }
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string_view value_text = detail::trim(line.substr(eq + 1));
        const auto& keys = detail::known_keys();
        const auto it = keys.find(key);
        if (it == keys.end()) {
            throw ConfigError(detail::at_line(line_no, "unknown key '" + key + "'"));
        }
        if (!seen.insert(key).second) {
            throw ConfigError(detail::at_line(line_no, "duplicate key '" + key + "'"));
        }
        if (value_text.empty()) {
            throw ConfigError(detail::at_line(line_no, "missing value for '" + key + "'"));
        }
        if (it->second == detail::Unit::flag) {
            if (value_text == "true" || value_text == "1") {
                ideal = true;
            } else if (value_text == "false" || value_text == "0") {
                ideal = false;
            } else {
                throw ConfigError(detail::at_line(line_no, "'" + key + "' must be true or false"));
            }
            continue;
        }
        std::string_view suffix;
        const double number = detail::parse_number(value_text, line_no, key, &suffix);
        values[key] = detail::apply_unit(it->second, number, suffix, line_no, key);
    }

    SystemConfig cfg;
    auto get = [&](const char* key, double fallback) {
        const auto it = values.find(key);
        return it == values.end() ? fallback : it->second;
    };
    auto dbm = [&](const char* key, double watts) {
        const auto it = values.find(key);
        return it == values.end() ? watts : numerics::dbm_to_watts(it->second);
    };
    cfg.P_b = dbm("P_b_dbm", cfg.P_b);
    cfg.M = dbm("M_dbm", cfg.M);
    cfg.N0 = dbm("N0_dbm", cfg.N0);
    cfg.P_c = dbm("P_c_dbm", cfg.P_c);
    cfg.eta = get("eta", cfg.eta);
    cfg.tau = get("tau", cfg.tau);
    cfg.rho = get("rho", cfg.rho);
    cfg.T = get("T", cfg.T);
    cfg.R = get("R", cfg.R);
    cfg.alpha = get("alpha", cfg.alpha);
    cfg.alpha_s = get("alpha_s", cfg.alpha_s);
    cfg.d_min = get("d_min", cfg.d_min);
    cfg.d_max = get("d_max", cfg.d_max);
    cfg.d_STSR = get("d_STSR", cfg.d_STSR);
    if (ideal) cfg.ideal = *ideal;

    const double K = get("K", cfg.fading_pb_st.K());
    const double m = get("m", cfg.fading_pb_st.m());
    if (values.count("L") && values.count("mu")) {
        throw ConfigError("config: 'L' and 'mu' both set; they name the same parameter");
    }
    const double L = get("L", get("mu", cfg.fading_pb_st.mu()));
    const double K_s = get("K_s", K);
    const double m_s = get("m_s", m);
    const double mu_s = get("mu_s", cfg.fading_st_sr.mu());
    try {
        cfg.fading_pb_st = FadingParams(K, static_cast<int>(L), static_cast<int>(m));
        cfg.fading_st_sr = FadingParams(K_s, static_cast<int>(mu_s), static_cast<int>(m_s));
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

inline SystemConfig load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << file.rdbuf();
    return parse_config(buf.str());
}

/// Replaces the beacon antenna count, keeping K and m.
inline SystemConfig with_antennas(SystemConfig cfg, int L) {
    try {
        cfg.fading_pb_st = FadingParams(cfg.fading_pb_st.K(), L, cfg.fading_pb_st.m());
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
    return cfg;
}

/// Parses "a:b:step" (inclusive), a comma list, or a single value. The result
/// is sorted ascending without duplicates and every entry lies in (0, 1).
inline std::vector<double> parse_tau_grid(std::string_view spec) {
    auto number = [&](std::string_view s) {
        s = detail::trim(s);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
            throw ConfigError("bad tau grid '" + std::string(spec) + "'");
        }
        return v;
    };
    std::vector<double> grid;
    if (std::count(spec.begin(), spec.end(), ':') == 2) {
        const auto c1 = spec.find(':');
        const auto c2 = spec.find(':', c1 + 1);
        const double a = number(spec.substr(0, c1));
        const double b = number(spec.substr(c1 + 1, c2 - c1 - 1));
        const double step = number(spec.substr(c2 + 1));
        if (!(step > 0.0) || b < a) {
            throw ConfigError("bad tau grid '" + std::string(spec) + "': need a <= b and step > 0");
        }
        const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
        for (long i = 0; i < n; ++i) {
            // Round to 12 decimals so 0.1 + 2 * 0.1 prints as 0.3.
            grid.push_back(std::round((a + i * step) * 1e12) / 1e12);
        }
    } else {
        std::size_t start = 0;
        while (start <= spec.size()) {
            const auto comma = spec.find(',', start);
            const auto piece = spec.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            grid.push_back(number(piece));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    }
    for (const double t : grid) {
        if (!(t > 0.0 && t < 1.0)) {
            throw ConfigError("tau grid values must lie in (0, 1), got " + std::to_string(t));
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

inline constexpr std::string_view default_tau_grid = "0.05:0.95:0.05";

}  // namespace config_io
}  // namespace ehcr

#endif  // EHCR_CONFIG_IO_HPP
