// config.hpp — flat dotted key = value run configuration
//
//   # comment
//   model.amp = 1.0
//   sweep.bias = 1, 2, 3, 4
//
// Keys are case-sensitive; unknown keys and malformed values are ConfigError.

#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "floquet_ef/dynamics.hpp"
#include "floquet_ef/grid.hpp"

namespace floquet_ef {

struct SweepSpec {
    std::vector<double> bias;   // μ_L values, μ_R = −μ_L
    std::vector<double> omega;
    std::vector<double> amp;
};

struct RunConfig {
    ModelParams model{};
    QuadratureSpec quad{};
    GridSpec grid{};
    DynamicsSpec dynamics{};
    int dump_trajectories{0};
    int dump_every{100};
    SweepSpec sweep{};
    std::string output_dir{"out"};
    std::string grid_cache{};  // empty: <output_dir>/grids
    bool de_explicit{false};
    bool mu_right_explicit{false};
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline double parse_double(std::string_view key, std::string_view text) {
    text = trim(text);
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v))
        throw ConfigError(std::string(key) + ": expected a finite number, got '" + std::string(text) + "'");
    return v;
}

inline long long parse_integer(std::string_view key, std::string_view text) {
    text = trim(text);
    long long v = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(text) + "'");
    return v;
}

inline bool parse_bool(std::string_view key, std::string_view text) {
    text = trim(text);
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ConfigError(std::string(key) + ": expected a boolean, got '" + std::string(text) + "'");
}

inline std::vector<double> parse_list(std::string_view key, std::string_view text) {
    std::vector<double> out;
    text = trim(text);
    if (text.empty()) return out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        out.push_back(parse_double(key, item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += format_double(v[i]);
    }
    return s;
}

struct KeyBinding {
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

inline const std::map<std::string, KeyBinding, std::less<>>& key_table() {
    static const std::map<std::string, KeyBinding, std::less<>> table = [] {
        std::map<std::string, KeyBinding, std::less<>> t;
        auto real = [&](const std::string& key, auto getter) {
            t[key] = {[getter, key](RunConfig& c, std::string_view v) { getter(c) = parse_double(key, v); },
                      [getter](const RunConfig& c) { return format_double(getter(const_cast<RunConfig&>(c))); }};
        };
        auto integer = [&](const std::string& key, auto getter) {
            t[key] = {[getter, key](RunConfig& c, std::string_view v) {
                          using T = std::remove_reference_t<decltype(getter(c))>;
                          getter(c) = static_cast<T>(parse_integer(key, v));
                      },
                      [getter](const RunConfig& c) { return std::to_string(getter(const_cast<RunConfig&>(c))); }};
        };
        auto list = [&](const std::string& key, auto getter) {
            t[key] = {[getter, key](RunConfig& c, std::string_view v) { getter(c) = parse_list(key, v); },
                      [getter](const RunConfig& c) { return format_list(getter(const_cast<RunConfig&>(c))); }};
        };

        real("model.kT", [](RunConfig& c) -> double& { return c.model.kT; });
        real("model.delta", [](RunConfig& c) -> double& { return c.model.delta; });
        real("model.amp", [](RunConfig& c) -> double& { return c.model.amp; });
        real("model.omega", [](RunConfig& c) -> double& { return c.model.omega; });
        real("model.gamma_tilde", [](RunConfig& c) -> double& { return c.model.gamma_tilde; });
        real("model.mu_left", [](RunConfig& c) -> double& { return c.model.mu_left; });
        t["model.mu_right"] = {[](RunConfig& c, std::string_view v) {
                                   c.model.mu_right = parse_double("model.mu_right", v);
                                   c.mu_right_explicit = true;
                               },
                               [](const RunConfig& c) { return format_double(c.model.mu_right); }};
        real("model.lambda_x", [](RunConfig& c) -> double& { return c.model.lambda_x; });
        real("model.lambda_y", [](RunConfig& c) -> double& { return c.model.lambda_y; });
        real("model.mass", [](RunConfig& c) -> double& { return c.model.mass; });
        integer("model.n_floquet", [](RunConfig& c) -> int& { return c.model.n_floquet; });
        integer("model.d", [](RunConfig& c) -> int& { return c.model.d; });

        real("quad.e_max", [](RunConfig& c) -> double& { return c.quad.e_max; });
        t["quad.de"] = {[](RunConfig& c, std::string_view v) {
                            c.quad.de = parse_double("quad.de", v);
                            c.de_explicit = true;
                        },
                        [](const RunConfig& c) { return format_double(c.quad.de); }};
        real("quad.tail_tol", [](RunConfig& c) -> double& { return c.quad.tail_tol; });

        real("grid.x_min", [](RunConfig& c) -> double& { return c.grid.x_min; });
        real("grid.x_max", [](RunConfig& c) -> double& { return c.grid.x_max; });
        real("grid.y_min", [](RunConfig& c) -> double& { return c.grid.y_min; });
        real("grid.y_max", [](RunConfig& c) -> double& { return c.grid.y_max; });
        integer("grid.nx", [](RunConfig& c) -> int& { return c.grid.nx; });
        integer("grid.ny", [](RunConfig& c) -> int& { return c.grid.ny; });
        t["grid.out_of_bounds"] = {[](RunConfig& c, std::string_view v) {
                                       v = trim(v);
                                       if (v == "error")
                                           c.grid.out_of_bounds = OutOfBoundsPolicy::Error;
                                       else if (v == "clamp")
                                           c.grid.out_of_bounds = OutOfBoundsPolicy::Clamp;
                                       else
                                           throw ConfigError("grid.out_of_bounds: expected 'error' or 'clamp'");
                                   },
                                   [](const RunConfig& c) {
                                       return std::string(c.grid.out_of_bounds == OutOfBoundsPolicy::Clamp ? "clamp"
                                                                                                          : "error");
                                   }};

        integer("dynamics.n_traj", [](RunConfig& c) -> int& { return c.dynamics.n_traj; });
        real("dynamics.dt", [](RunConfig& c) -> double& { return c.dynamics.dt; });
        real("dynamics.t_burn", [](RunConfig& c) -> double& { return c.dynamics.t_burn; });
        real("dynamics.t_total", [](RunConfig& c) -> double& { return c.dynamics.t_total; });
        t["dynamics.seed"] = {[](RunConfig& c, std::string_view v) {
                                  const long long s = parse_integer("dynamics.seed", v);
                                  if (s < 0) throw ConfigError("dynamics.seed must be >= 0");
                                  c.dynamics.master_seed = static_cast<std::uint64_t>(s);
                              },
                              [](const RunConfig& c) { return std::to_string(c.dynamics.master_seed); }};
        t["dynamics.stochastic"] = {
            [](RunConfig& c, std::string_view v) { c.dynamics.stochastic = parse_bool("dynamics.stochastic", v); },
            [](const RunConfig& c) { return std::string(c.dynamics.stochastic ? "true" : "false"); }};
        integer("dynamics.dump_trajectories", [](RunConfig& c) -> int& { return c.dump_trajectories; });
        integer("dynamics.dump_every", [](RunConfig& c) -> int& { return c.dump_every; });

        list("sweep.bias", [](RunConfig& c) -> std::vector<double>& { return c.sweep.bias; });
        list("sweep.omega", [](RunConfig& c) -> std::vector<double>& { return c.sweep.omega; });
        list("sweep.amp", [](RunConfig& c) -> std::vector<double>& { return c.sweep.amp; });

        t["output.dir"] = {[](RunConfig& c, std::string_view v) { c.output_dir = std::string(trim(v)); },
                           [](const RunConfig& c) { return c.output_dir; }};
        t["output.grid_cache"] = {[](RunConfig& c, std::string_view v) { c.grid_cache = std::string(trim(v)); },
                                  [](const RunConfig& c) { return c.grid_cache; }};
        return t;
    }();
    return table;
}

}  // namespace detail

inline void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
    key = detail::trim(key);
    const auto& table = detail::key_table();
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown configuration key '" + std::string(key) + "'");
    it->second.set(cfg, value);
}

/// Parses "key=value"; used for --set overrides.
inline void apply_override(RunConfig& cfg, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
    apply_setting(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

inline void parse_config(RunConfig& cfg, std::istream& in, const std::string& source = "<config>") {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view s = line;
        if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = detail::trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key = value");
        try {
            apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

inline void load_config(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    parse_config(cfg, in, path);
}

/// Derived defaults and cross-field validation; call once after all settings are applied.
inline void finalize(RunConfig& cfg) {
    if (!cfg.mu_right_explicit) cfg.model.mu_right = -cfg.model.mu_left;
    validate(cfg.model);
    if (!cfg.de_explicit) cfg.quad.de = default_quadrature(cfg.model).de;
    validate(cfg.quad);
    validate(cfg.grid);
    validate(cfg.dynamics);
    if (cfg.dump_trajectories < 0) throw ConfigError("dynamics.dump_trajectories must be >= 0");
    if (cfg.dump_every < 1) throw ConfigError("dynamics.dump_every must be >= 1");
    if (cfg.output_dir.empty()) throw ConfigError("output.dir must not be empty");
}

/// Every key in sorted order, one "key=value" per line.
inline std::string canonical_form(const RunConfig& cfg) {
    std::string s;
    for (const auto& [key, binding] : detail::key_table()) {
        if (key.rfind("output.", 0) == 0) continue;  // where results go does not change them
        s += key + "=" + binding.get(cfg) + "\n";
    }
    return s;
}

inline std::uint64_t config_fingerprint(const RunConfig& cfg) {
    detail::Fnv1a h;
    const std::string c = canonical_form(cfg);
    h.bytes(c.data(), c.size());
    return h.value();
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace floquet_ef
