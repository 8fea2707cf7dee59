#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "dimer/cli/keyvalue.hpp"
#include "dimer/cli/presets.hpp"
#include "dimer/evolve.hpp"
#include "dimer/params.hpp"

namespace dimer::cli {

enum class Mode { timeseries, steady, sweep, figure_preset };
enum class Format { csv, json };
enum class Backend { reduced, exponential, ode };

inline constexpr std::array<std::string_view, 4> kModeNames = {"timeseries", "steady", "sweep", "figure-preset"};
inline constexpr std::array<std::string_view, 2> kFormatNames = {"csv", "json"};
inline constexpr std::array<std::string_view, 3> kBackendNames = {"reduced", "exponential", "ode"};

/// Parameters that may be swept, in the column order of steady tables.
inline constexpr std::array<std::string_view, 6> kParameterKeys = {"gamma2", "delta", "n-photon", "xi", "f", "dd"};

/// Every key accepted in config files and as a flag.
inline constexpr std::array<std::string_view, 21> kConfigKeys = {
    "mode",       "preset",        "gamma2",  "delta",   "n-photon",      "xi",
    "f",          "dd",            "gamma-override-zero", "t-start", "t-end", "samples",
    "log-grid",   "sweep",         "wavelength-nm", "temperature-k", "output", "format",
    "workers",    "config",        "backend"};

template <std::size_t N>
int lookup(const std::array<std::string_view, N>& names, const std::string& key, const std::string& value) {
    for (std::size_t i = 0; i < N; ++i) {
        if (names[i] == value) return static_cast<int>(i);
    }
    std::string choices;
    for (auto n : names) choices += (choices.empty() ? "" : "|") + std::string(n);
    throw ConfigError("'" + key + "' must be one of " + choices + ", got '" + value + "'");
}

struct Sweep {
    std::string name;
    std::vector<double> values;
    bool operator==(const Sweep&) const = default;
};

struct RunConfig {
    Mode mode = Mode::timeseries;
    std::optional<std::string> preset;
    SystemParams params;
    TimeGrid grid{0.0, 20.0, 2000, Spacing::linear};
    std::optional<Sweep> sweep;
    std::optional<double> wavelength_nm;
    std::optional<double> temperature_k;
    std::string output = "-";
    Format format = Format::csv;
    int workers = 1;
    Backend backend = Backend::reduced;

    bool operator==(const RunConfig&) const = default;
};

inline double parameter(const SystemParams& p, std::string_view name) {
    if (name == "gamma2") return p.gamma2;
    if (name == "delta") return p.delta;
    if (name == "n-photon") return p.n_photon;
    if (name == "xi") return p.geometry.xi;
    if (name == "f") return p.geometry.f1;
    if (name == "dd") return p.geometry.dd;
    throw ConfigError("unknown parameter '" + std::string(name) + "'");
}

inline void set_parameter(SystemParams& p, std::string_view name, double v) {
    if (name == "gamma2") p.gamma2 = v;
    else if (name == "delta") p.delta = v;
    else if (name == "n-photon") p.n_photon = v;
    else if (name == "xi") p.geometry.xi = v;
    else if (name == "f") p.geometry.f1 = p.geometry.f2 = v;
    else if (name == "dd") p.geometry.dd = v;
    else throw ConfigError("parameter '" + std::string(name) + "' cannot be swept");
}

inline Sweep parse_sweep(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("'sweep' expects name=v1,v2,..., got '" + text + "'");
    Sweep s;
    s.name = normalize_key(trim(std::string_view(text).substr(0, eq)));
    if (std::find(kParameterKeys.begin(), kParameterKeys.end(), s.name) == kParameterKeys.end()) {
        throw ConfigError("'" + s.name + "' cannot be swept");
    }
    for (const auto& v : split_list(std::string_view(text).substr(eq + 1))) s.values.push_back(parse_number("sweep", v));
    if (s.values.empty()) throw ConfigError("sweep over '" + s.name + "' has no values");
    return s;
}

/// Checks physical and structural consistency; throws ConfigError.
inline void validate(const RunConfig& c) {
    try {
        c.params.validate();
        if (c.params.geometry.xi == 0.0) throw ConfigError("xi must be positive; the exchange rate diverges at xi = 0");
        if (c.mode == Mode::timeseries || c.mode == Mode::figure_preset) c.grid.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (c.mode == Mode::sweep && !c.sweep) throw ConfigError("sweep mode needs exactly one --sweep name=v1,v2,...");
    if (c.mode != Mode::sweep && c.sweep) throw ConfigError("--sweep is only valid in sweep mode");
    if (c.mode == Mode::figure_preset && !c.preset) throw ConfigError("figure-preset mode needs --preset");
    if (c.mode != Mode::figure_preset && c.preset) throw ConfigError("--preset is only valid in figure-preset mode");
    if (c.workers < 1) throw ConfigError("workers must be at least 1");
    if (c.grid.n_samples > 50'000'000) throw ConfigError("samples must not exceed 50000000");
    if (c.sweep) {
        for (double v : c.sweep->values) {
            RunConfig point = c;
            set_parameter(point.params, c.sweep->name, v);
            point.sweep.reset();
            point.mode = Mode::steady;
            validate(point);
        }
    }
}

struct Resolution {
    RunConfig config;
    std::vector<std::string> warnings;
};

namespace config_detail {

inline bool is_physics_key(std::string_view k) {
    return std::find(kParameterKeys.begin(), kParameterKeys.end(), k) != kParameterKeys.end() || k == "t-start" ||
           k == "t-end" || k == "samples" || k == "log-grid" || k == "gamma-override-zero" || k == "wavelength-nm" ||
           k == "temperature-k";
}

inline void apply(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "mode") c.mode = static_cast<Mode>(lookup(kModeNames, key, value));
    else if (key == "preset") c.preset = value;
    else if (key == "gamma-override-zero") c.params.zero_collective_decay = parse_bool(key, value);
    else if (key == "t-start") c.grid.t_start = parse_number(key, value);
    else if (key == "t-end") c.grid.t_end = parse_number(key, value);
    else if (key == "samples") {
        const long n = parse_integer(key, value);
        if (n < 2 || n > 50'000'000) throw ConfigError("samples must lie in [2, 50000000]");
        c.grid.n_samples = static_cast<int>(n);
    } else if (key == "log-grid") c.grid.spacing = parse_bool(key, value) ? Spacing::logarithmic : Spacing::linear;
    else if (key == "sweep") c.sweep = parse_sweep(value);
    else if (key == "wavelength-nm") c.wavelength_nm = parse_number(key, value);
    else if (key == "temperature-k") c.temperature_k = parse_number(key, value);
    else if (key == "output") c.output = value;
    else if (key == "format") c.format = static_cast<Format>(lookup(kFormatNames, key, value));
    else if (key == "workers") {
        const long n = parse_integer(key, value);
        if (n < 1 || n > 1024) throw ConfigError("workers must lie in [1, 1024]");
        c.workers = static_cast<int>(n);
    } else if (key == "backend") c.backend = static_cast<Backend>(lookup(kBackendNames, key, value));
    else if (key == "config") {
        // handled by the caller
    } else if (std::find(kParameterKeys.begin(), kParameterKeys.end(), key) != kParameterKeys.end()) {
        set_parameter(c.params, key, parse_number(key, value));
    } else {
        throw ConfigError("unknown key '" + key + "'");
    }
}

}  // namespace config_detail

/// Builds a validated configuration from key/value pairs. In preset mode the
/// preset's fields replace any conflicting physical or grid settings, with a
/// warning for each one that differed.
inline Resolution resolve(const KeyValues& kv) {
    Resolution r;
    KeyValues effective = kv;

    const auto preset_it = std::find_if(kv.begin(), kv.end(), [](const auto& e) { return e.first == "preset"; });
    const auto mode_it = std::find_if(kv.begin(), kv.end(), [](const auto& e) { return e.first == "mode"; });
    if (preset_it != kv.end() && (mode_it == kv.end() || mode_it->second == "figure-preset")) {
        const auto preset = find_preset(preset_it->second);
        if (!preset) throw ConfigError("unknown preset '" + preset_it->second + "'");
        effective.clear();
        for (const auto& [k, v] : kv) {
            if (!config_detail::is_physics_key(k)) {
                effective.emplace_back(k, v);
                continue;
            }
            const auto field = std::find_if(preset->fields.begin(), preset->fields.end(),
                                            [&](const auto& e) { return e.first == k; });
            if (field == preset->fields.end() || field->second != v) {
                r.warnings.push_back("preset " + preset->name + " ignores " + k + " = " + v);
            }
        }
        if (mode_it == kv.end()) effective.emplace_back("mode", "figure-preset");
        for (const auto& [k, v] : preset->fields) {
            if (k != preset->varied) effective.emplace_back(k, v);
        }
    }

    for (const auto& [k, v] : effective) {
        if (std::find(kConfigKeys.begin(), kConfigKeys.end(), k) == kConfigKeys.end()) {
            throw ConfigError("unknown key '" + k + "'");
        }
        config_detail::apply(r.config, k, v);
    }

    RunConfig& c = r.config;
    if (c.wavelength_nm.has_value() != c.temperature_k.has_value()) {
        throw ConfigError("wavelength-nm and temperature-k must be given together");
    }
    if (c.wavelength_nm) {
        if (std::any_of(kv.begin(), kv.end(), [](const auto& e) { return e.first == "n-photon"; }) && !c.preset) {
            throw ConfigError("give either n-photon or wavelength-nm/temperature-k, not both");
        }
        try {
            c.params.n_photon = photon_number_from_temperature(*c.wavelength_nm, *c.temperature_k);
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
        c.wavelength_nm.reset();
        c.temperature_k.reset();
    }
    validate(c);
    return r;
}

}  // namespace dimer::cli
