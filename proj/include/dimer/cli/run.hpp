#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include "dimer/cli/config.hpp"
#include "dimer/cli/output.hpp"
#include "dimer/dimer.hpp"

namespace dimer::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitConfig = 2,
    kExitNumerical = 3,
    kExitIo = 4,
};

/// Runs task(i) for i in [0, count) on at most `workers` threads. Results
/// are written by index, so their order never depends on scheduling. The
/// exception of the lowest failing index is rethrown.
inline void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& task) {
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t n = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(workers, 1)));
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t k = 0; k < n; ++k) pool.emplace_back(worker);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

/// Parameter set of each output table or steady row.
inline std::vector<SystemParams> plan(const RunConfig& c) {
    std::vector<SystemParams> jobs;
    if (c.mode == Mode::figure_preset) {
        const auto preset = find_preset(*c.preset);
        if (!preset) throw ConfigError("unknown preset '" + *c.preset + "'");
        for (const auto& v : preset->values) {
            SystemParams p = c.params;
            set_parameter(p, preset->varied, parse_number(preset->varied, v));
            jobs.push_back(p);
        }
    } else if (c.mode == Mode::sweep) {
        for (double v : c.sweep->values) {
            SystemParams p = c.params;
            set_parameter(p, c.sweep->name, v);
            jobs.push_back(p);
        }
    } else {
        jobs.push_back(c.params);
    }
    return jobs;
}

inline TimeSeries time_series(const SystemParams& p, const TimeGrid& grid, Backend backend) {
    if (backend == Backend::reduced) {
        return propagate_reduced(build_reduced_system(p), couplings(p), initial_state_ground(), grid);
    }
    MasterOptions opt;
    opt.backend = backend == Backend::exponential ? MasterBackend::exponential : MasterBackend::adaptive_ode;
    return propagate_master(build_generator(p), ground_state_rho(), grid, opt);
}

inline ObservableSet steady_values(const SystemParams& p, Backend backend) {
    const Couplings c = couplings(p);
    if (c.big_gamma == 0.0) return observables_from_bloch(thermal_product_state(p.n_photon), c);
    if (backend == Backend::reduced) {
        return observables_from_bloch(steady_state_reduced(build_reduced_system(p)), c);
    }
    const Generator gen = build_generator(p);
    return observables_from_rho(steady_state_full(gen), gen.couplings);
}

/// Computes every table of a validated configuration.
inline std::vector<Table> compute(const RunConfig& c) {
    const std::vector<SystemParams> jobs = plan(c);
    const bool steady = c.mode == Mode::steady || c.mode == Mode::sweep;
    if (steady) {
        Table table;
        table.params = c.params;
        table.steady.resize(jobs.size());
        parallel_for(jobs.size(), c.workers, [&](std::size_t i) {
            table.steady[i] = SteadyRow{jobs[i], steady_values(jobs[i], c.backend)};
        });
        return {table};
    }
    std::vector<Table> tables(jobs.size());
    parallel_for(jobs.size(), c.workers, [&](std::size_t i) {
        tables[i].params = jobs[i];
        tables[i].series = time_series(jobs[i], c.grid, c.backend);
    });
    return tables;
}

/// Maps an exception to the process exit status and prints the diagnostic.
inline int report_failure(std::exception_ptr e, std::ostream& err) {
    try {
        std::rethrow_exception(e);
    } catch (const ConfigError& ex) {
        err << "error: invalid configuration: " << ex.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& ex) {
        err << "error: invalid configuration: " << ex.what() << '\n';
        return kExitConfig;
    } catch (const SingularityError& ex) {
        err << "error: invalid configuration: " << ex.what() << '\n';
        return kExitConfig;
    } catch (const DegeneracyError& ex) {
        err << "error: degenerate system: " << ex.what() << '\n';
        return kExitNumerical;
    } catch (const StiffnessError& ex) {
        err << "error: integration failed: " << ex.what() << '\n';
        return kExitNumerical;
    } catch (const IoError& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitIo;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitFailure;
    }
}

/// Resolves, computes and writes. Returns the process exit status.
inline int run(const KeyValues& kv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    try {
        const Resolution r = resolve(kv);
        for (const auto& w : r.warnings) err << "warning: " << w << '\n';
        emit(r.config, compute(r.config), out);
        return kExitOk;
    } catch (...) {
        return report_failure(std::current_exception(), err);
    }
}

}  // namespace dimer::cli
