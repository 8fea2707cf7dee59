// dimer: time series, steady states, sweeps and figure presets for a
// dipole-coupled pair of two-level molecules in a thermal field.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dimer/cli/run.hpp"

namespace {

struct Flag {
    const char* name;
    const char* help;
    bool is_switch = false;
};

const std::vector<Flag> kFlags = {
    {"--mode", "timeseries | steady | sweep | figure-preset"},
    {"--preset", "figure preset (fig2a, fig2b, fig2c, fig2d, fig3)"},
    {"--gamma2", "decay rate of molecule 2 in units of gamma1"},
    {"--delta", "detuning omega1 - omega2 in units of gamma1"},
    {"--n-photon", "mean thermal photon number"},
    {"--xi", "effective distance omega0 r12 / c"},
    {"--f", "projection of both dipoles on the separation axis"},
    {"--dd", "scalar product of the two dipole directions"},
    {"--gamma-override-zero", "set the collective decay rate to zero", true},
    {"--t-start", "first sample time"},
    {"--t-end", "last sample time"},
    {"--samples", "number of sample times"},
    {"--log-grid", "logarithmically spaced sample times", true},
    {"--sweep", "swept parameter, name=v1,v2,..."},
    {"--wavelength-nm", "transition wavelength, used with --temperature-k"},
    {"--temperature-k", "field temperature, used with --wavelength-nm"},
    {"--output", "output path, - for standard output"},
    {"--format", "csv | json"},
    {"--workers", "concurrent sweep points"},
    {"--backend", "reduced | exponential | ode"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamics and steady state of an incoherently driven molecular dimer"};
    app.set_version_flag("--version", std::string(dimer::cli::kVersion));

    std::vector<std::string> values(kFlags.size());
    for (std::size_t i = 0; i < kFlags.size(); ++i) {
        const Flag& f = kFlags[i];
        if (f.is_switch) {
            app.add_flag(std::string(f.name) + "{true}", values[i], f.help);
        } else {
            app.add_option(f.name, values[i], f.help);
        }
    }
    std::string config_path;
    app.add_option("--config", config_path, "key = value file; flags take precedence");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : dimer::cli::kExitConfig;
    }

    dimer::cli::KeyValues flags;
    for (std::size_t i = 0; i < kFlags.size(); ++i) {
        if (app.count(kFlags[i].name) > 0) flags.emplace_back(dimer::cli::normalize_key(kFlags[i].name), values[i]);
    }

    dimer::cli::KeyValues kv;
    if (!config_path.empty()) {
        try {
            kv = dimer::cli::parse_config_file(config_path);
        } catch (...) {
            return dimer::cli::report_failure(std::current_exception(), std::cerr);
        }
    }
    return dimer::cli::run(dimer::cli::merge(kv, flags));
}
