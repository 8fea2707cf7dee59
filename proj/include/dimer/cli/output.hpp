#pragma once

// CSV and JSON tables for time series and steady-state rows.

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dimer/cli/config.hpp"
#include "dimer/evolve.hpp"
#include "dimer/observables.hpp"

#ifndef DIMER_VERSION
#define DIMER_VERSION "unknown"
#endif

namespace dimer::cli {

using nlohmann::json;

inline constexpr const char* kVersion = DIMER_VERSION;

/// 17 significant digits; parses back to the same double.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct SteadyRow {
    SystemParams params;
    ObservableSet values;
};

/// One emitted table: a time series or a list of steady rows.
struct Table {
    SystemParams params;  ///< parameters of the series, or the base set for steady rows
    std::optional<TimeSeries> series;
    std::vector<SteadyRow> steady;
};

inline std::string csv_header(bool steady) {
    std::string h = steady ? "gamma2,delta,n_photon,xi,f,dd," : "t,";
    for (std::size_t i = 0; i < kObservableNames.size(); ++i) {
        h += (i ? "," : "") + std::string(kObservableNames[i]);
    }
    return h;
}

inline void write_values(std::ostream& out, const ObservableSet& o) {
    for (std::size_t i = 0; i < kObservableNames.size(); ++i) {
        out << ',' << format_number(value(o, static_cast<Observable>(i)));
    }
}

inline void write_csv(std::ostream& out, const Table& table) {
    const bool steady = !table.series;
    out << csv_header(steady) << '\n';
    if (table.series) {
        const TimeSeries& s = *table.series;
        for (std::size_t k = 0; k < s.size(); ++k) {
            out << format_number(s.times[k]);
            write_values(out, s.rows[k]);
            out << '\n';
        }
        return;
    }
    for (const SteadyRow& r : table.steady) {
        bool first = true;
        for (auto key : kParameterKeys) {
            if (!first) out << ',';
            first = false;
            out << format_number(parameter(r.params, key));
        }
        write_values(out, r.values);
        out << '\n';
    }
}

inline json params_to_json(const SystemParams& p) {
    return {{"gamma1", p.gamma1},
            {"gamma2", p.gamma2},
            {"delta", p.delta},
            {"n_photon", p.n_photon},
            {"xi", p.geometry.xi},
            {"f1", p.geometry.f1},
            {"f2", p.geometry.f2},
            {"dd", p.geometry.dd},
            {"gamma_override_zero", p.zero_collective_decay}};
}

inline SystemParams params_from_json(const json& j) {
    SystemParams p;
    p.gamma1 = j.at("gamma1").get<double>();
    p.gamma2 = j.at("gamma2").get<double>();
    p.delta = j.at("delta").get<double>();
    p.n_photon = j.at("n_photon").get<double>();
    p.geometry.xi = j.at("xi").get<double>();
    p.geometry.f1 = j.at("f1").get<double>();
    p.geometry.f2 = j.at("f2").get<double>();
    p.geometry.dd = j.at("dd").get<double>();
    p.zero_collective_decay = j.at("gamma_override_zero").get<bool>();
    return p;
}

inline json config_to_json(const RunConfig& c) {
    json j;
    j["mode"] = kModeNames[static_cast<int>(c.mode)];
    j["preset"] = c.preset ? json(*c.preset) : json(nullptr);
    j["params"] = params_to_json(c.params);
    j["grid"] = {{"t_start", c.grid.t_start},
                 {"t_end", c.grid.t_end},
                 {"samples", c.grid.n_samples},
                 {"log_grid", c.grid.spacing == Spacing::logarithmic}};
    j["sweep"] = c.sweep ? json{{"name", c.sweep->name}, {"values", c.sweep->values}} : json(nullptr);
    j["wavelength_nm"] = c.wavelength_nm ? json(*c.wavelength_nm) : json(nullptr);
    j["temperature_k"] = c.temperature_k ? json(*c.temperature_k) : json(nullptr);
    j["output"] = c.output;
    j["format"] = kFormatNames[static_cast<int>(c.format)];
    j["workers"] = c.workers;
    j["backend"] = kBackendNames[static_cast<int>(c.backend)];
    return j;
}

inline RunConfig config_from_json(const json& j) {
    try {
        RunConfig c;
        c.mode = static_cast<Mode>(lookup(kModeNames, "mode", j.at("mode").get<std::string>()));
        if (!j.at("preset").is_null()) c.preset = j.at("preset").get<std::string>();
        c.params = params_from_json(j.at("params"));
        const json& g = j.at("grid");
        c.grid.t_start = g.at("t_start").get<double>();
        c.grid.t_end = g.at("t_end").get<double>();
        c.grid.n_samples = g.at("samples").get<int>();
        c.grid.spacing = g.at("log_grid").get<bool>() ? Spacing::logarithmic : Spacing::linear;
        if (!j.at("sweep").is_null()) {
            c.sweep = Sweep{j["sweep"].at("name").get<std::string>(), j["sweep"].at("values").get<std::vector<double>>()};
        }
        if (!j.at("wavelength_nm").is_null()) c.wavelength_nm = j["wavelength_nm"].get<double>();
        if (!j.at("temperature_k").is_null()) c.temperature_k = j["temperature_k"].get<double>();
        c.output = j.at("output").get<std::string>();
        c.format = static_cast<Format>(lookup(kFormatNames, "format", j.at("format").get<std::string>()));
        c.workers = j.at("workers").get<int>();
        c.backend = static_cast<Backend>(lookup(kBackendNames, "backend", j.at("backend").get<std::string>()));
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed configuration record: ") + e.what());
    }
}

inline json observables_to_json(const ObservableSet& o) {
    json j = json::object();
    for (std::size_t i = 0; i < kObservableNames.size(); ++i) {
        j[std::string(kObservableNames[i])] = value(o, static_cast<Observable>(i));
    }
    return j;
}

inline json table_to_json(const RunConfig& config, const Table& table) {
    json records = json::array();
    if (table.series) {
        const TimeSeries& s = *table.series;
        for (std::size_t k = 0; k < s.size(); ++k) {
            json r = observables_to_json(s.rows[k]);
            r["t"] = s.times[k];
            records.push_back(std::move(r));
        }
    } else {
        for (const SteadyRow& row : table.steady) {
            json r = observables_to_json(row.values);
            for (auto key : kParameterKeys) {
                std::string name(key);
                if (name == "n-photon") name = "n_photon";
                r[name] = parameter(row.params, key);
            }
            records.push_back(std::move(r));
        }
    }
    const Couplings c = couplings(table.params);
    json params = params_to_json(table.params);
    params["big_gamma"] = c.big_gamma;
    params["big_omega"] = c.big_omega;
    return {{"metadata", {{"version", kVersion}, {"config", config_to_json(config)}, {"parameters", params}}},
            {"records", std::move(records)}};
}

/// Path of table idx out of count: "run.csv" becomes "run_0.csv", ...
inline std::string indexed_path(const std::string& path, std::size_t idx, std::size_t count) {
    if (count <= 1) return path;
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash + 1);
    const std::string stem = has_ext ? path.substr(0, dot) : path;
    const std::string ext = has_ext ? path.substr(dot) : "";
    return stem + "_" + std::to_string(idx) + ext;
}

inline std::string render(const RunConfig& config, const std::vector<Table>& tables, bool to_stdout) {
    std::ostringstream out;
    if (config.format == Format::csv) {
        for (std::size_t i = 0; i < tables.size(); ++i) {
            if (i) out << '\n';
            write_csv(out, tables[i]);
        }
        return out.str();
    }
    if (to_stdout && tables.size() > 1) {
        json all = json::array();
        for (const Table& t : tables) all.push_back(table_to_json(config, t));
        return all.dump(2) + '\n';
    }
    return table_to_json(config, tables.front()).dump(2) + '\n';
}

/// Writes every table to config.output ("-" is stdout). Several tables go
/// to separate files with an index suffix.
inline std::vector<std::string> emit(const RunConfig& config, const std::vector<Table>& tables, std::ostream& stdout_stream) {
    if (config.output == "-") {
        stdout_stream << render(config, tables, true);
        stdout_stream.flush();
        if (!stdout_stream) throw IoError("failed writing to standard output");
        return {"-"};
    }
    std::vector<std::string> paths;
    for (std::size_t i = 0; i < tables.size(); ++i) {
        const std::string path = indexed_path(config.output, i, tables.size());
        std::ofstream file(path, std::ios::binary);
        if (!file) throw IoError("cannot open '" + path + "' for writing");
        file << render(config, {tables[i]}, false);
        file.close();
        if (!file) throw IoError("failed writing '" + path + "'");
        paths.push_back(path);
    }
    return paths;
}

}  // namespace dimer::cli
