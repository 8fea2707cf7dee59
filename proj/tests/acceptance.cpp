// Acceptance checks. Prints one PASS/FAIL line per criterion; with
// --criterion N only that one runs. Exit status is nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dimer/cli/run.hpp"
#include "dimer/dimer.hpp"

namespace {

using dimer::SystemParams;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double budget_s;  ///< runtime limit, 0 if none
    std::function<Outcome()> check;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

SystemParams params(double gamma2, double n, double delta, double xi, double f) {
    SystemParams p;
    p.gamma1 = 1.0;
    p.gamma2 = gamma2;
    p.n_photon = n;
    p.delta = delta;
    p.geometry = dimer::Geometry::parallel(xi, f);
    return p;
}

struct PresetRun {
    std::vector<SystemParams> params;
    dimer::TimeGrid grid;
};

PresetRun preset(const std::string& name) {
    const auto config = dimer::cli::resolve({{"preset", name}}).config;
    return {dimer::cli::plan(config), config.grid};
}

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

Outcome symmetric_null() {
    double worst = 0.0;
    const double geometries[][2] = {{0.01, 0.0}, {0.02, 0.0}, {0.05, 0.5}, {0.3, 0.9}, {1.0, 0.2}, {3.0, 1.0}};
    for (const auto& g : geometries) {
        const auto p = params(1.0, 0.1, 0.0, g[0], g[1]);
        const auto s = dimer::propagate_reduced(dimer::build_reduced_system(p), dimer::couplings(p),
                                                dimer::initial_state_ground(), {0.0, 50.0, 2000, dimer::Spacing::linear});
        for (const auto& row : s.rows) worst = std::max(worst, std::abs(row.coherence.imag()));
    }
    return {worst < 1e-12, fmt("max |Im<s2+ s1->| = %.3g over 6 geometries", worst)};
}

Outcome gamma_zero_reference() {
    double worst = 0.0;
    for (double n : {0.05, 0.1, 0.5}) {
        auto p = params(0.9999, n, 100.0, 0.02, 0.0);
        p.zero_collective_decay = true;
        const auto x = dimer::steady_state_reduced(dimer::build_reduced_system(p));
        const double s = 1.0 / (1.0 + 2.0 * n);
        const dimer::Complex want[5] = {-s, -s, 0.0, 0.0, s * s};
        for (int i = 0; i < 5; ++i) worst = std::max(worst, std::abs(x.x(i) - want[i]));
    }
    return {worst < 1e-12, fmt("max deviation %.3g", worst)};
}

Outcome route_triangle() {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int draw = 0; draw < 200; ++draw) {
        const double xi = std::exp(std::log(0.01) + u(rng) * (std::log(1.0) - std::log(0.01)));
        const auto p = params(0.5 + 0.5 * u(rng), u(rng), 200.0 * u(rng), xi, u(rng));
        const auto c = dimer::couplings(p);
        const auto reduced = dimer::observables_from_bloch(dimer::steady_state_reduced(dimer::build_reduced_system(p)), c);
        const auto full = dimer::observables_from_rho(dimer::steady_state_full(dimer::build_generator(p)), c);
        const double coh_analytic = dimer::analytic_coherence_im(p);
        const double diff_analytic = dimer::analytic_pop_diff(p);

        for (std::size_t j = 0; j < dimer::kObservableNames.size(); ++j) {
            const auto which = static_cast<dimer::Observable>(j);
            worst = std::max(worst, rel_diff(value(reduced, which), value(full, which)));
        }
        for (const auto* o : {&reduced, &full}) {
            worst = std::max(worst, rel_diff(o->coherence.imag(), coh_analytic));
            worst = std::max(worst, rel_diff(o->pop2 - o->pop1, diff_analytic));
        }
    }
    return {worst < 1e-9, fmt("worst pairwise relative difference %.3g over 200 draws", worst)};
}

Outcome energy_balance() {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int draw = 0; draw < 50; ++draw) {
        const double xi = std::exp(std::log(0.01) + u(rng) * (std::log(1.0) - std::log(0.01)));
        const auto p = params(1.0, u(rng), 200.0 * u(rng), xi, u(rng));
        const auto e = dimer::energy_balance(p);
        worst = std::max(worst, std::abs(e.residual()) / std::max(std::abs(e.lhs), 0.5 * e.kappa));
    }
    return {worst < 1e-12, fmt("worst scaled residual %.3g over 50 draws", worst)};
}

Outcome oscillation() {
    const auto p = params(0.9999, 0.1, 100.0, 0.02, 0.0);
    const auto c = dimer::couplings(p);
    const double expected = std::sqrt(p.delta * p.delta + 4.0 * c.big_omega * c.big_omega);
    const double period = 2.0 * std::acos(-1.0) / expected;
    // 25 samples per period over one decay time of the fast mode
    const double t_end = 1.0;
    const int n = static_cast<int>(std::ceil(25.0 * t_end / period)) + 1;
    const auto s = dimer::propagate_reduced(dimer::build_reduced_system(p), c, dimer::initial_state_ground(),
                                            {0.0, t_end, n, dimer::Spacing::linear});
    const auto est = dimer::estimate_oscillation(s, dimer::Observable::current);
    const double freq_err = std::abs(est.frequency - expected) / expected;
    const double decay_ratio = est.decay / p.gamma1;
    const bool pass = freq_err < 0.02 && decay_ratio > 1.0 / 3.0 && decay_ratio < 3.0;
    return {pass, fmt("frequency %.9g vs %.9g (rel err %.2g), ", est.frequency, expected, freq_err) +
                      fmt("decay %.4g = %.3g gamma1", est.decay, decay_ratio)};
}

Outcome relaxation() {
    bool pass = true;
    std::string detail;
    for (SystemParams p : preset("fig2a").params) {
        const double n = p.n_photon;
        if (n != 0.05 && n != 0.1) continue;
        const dimer::AffinePropagator prop(dimer::build_reduced_system(p));
        const double t = dimer::settling_time(prop, dimer::couplings(p), dimer::initial_state_ground(), 0.1, 200.0);
        const double ratio = (1.0 / n) / t;
        pass = pass && ratio <= 3.0 && ratio >= 1.0 / 3.0;
        detail += fmt("N=%.2f: t_10%% = %.5g, 1/(N gamma1) / t = %.4f; ", n, t, ratio);
    }
    return {pass, detail};
}

Outcome detuning_monotonicity() {
    std::vector<double> current;
    for (double delta : {10.0, 30.0, 100.0}) {
        const auto p = params(1.0, 0.1, delta, 0.02, 0.0);
        const auto x = dimer::steady_state_reduced(dimer::build_reduced_system(p));
        current.push_back(std::abs(2.0 * dimer::couplings(p).big_omega * x.coherence().imag()));
    }
    const bool pass = current[0] < current[1] && current[1] < current[2];
    return {pass, fmt("|current| = %.6g, %.6g, %.6g", current[0], current[1], current[2])};
}

Outcome sign_inversion() {
    bool pass = true;
    std::string detail;
    for (const SystemParams& p : preset("fig3").params) {
        const double xi = p.geometry.xi;
        if (xi == 0.05) continue;
        const auto c = dimer::couplings(p);
        const double omega = std::sqrt(p.delta * p.delta + 4.0 * c.big_omega * c.big_omega);
        const double period = 2.0 * std::acos(-1.0) / omega;
        // the preset's log grid starts after the first extremum, so sample four periods instead
        const auto s = dimer::propagate_reduced(dimer::build_reduced_system(p), c, dimer::initial_state_ground(),
                                                {0.0, 4.0 * period, 801, dimer::Spacing::linear});
        const double first = dimer::first_extremum(s, dimer::Observable::current).value;
        const double steady = 2.0 * c.big_omega * dimer::steady_state_reduced(dimer::build_reduced_system(p)).coherence().imag();
        const bool opposite = std::signbit(first) != std::signbit(steady);
        pass = pass && opposite == (xi < 0.05);
        detail += fmt("xi=%.2f: first %.3g, steady %.3g; ", xi, first, steady);
    }
    return {pass, detail};
}

Outcome cptp() {
    double trace = 0.0, herm = 0.0, min_eig = 0.0;
    auto run = preset("fig2d");
    run.grid.n_samples = 100;
    for (const SystemParams& p : run.params) {
        const auto states = dimer::evolve_density(dimer::build_generator(p), dimer::ground_state_rho(), run.grid);
        for (const auto& d : states) {
            trace = std::max(trace, d.trace_error());
            herm = std::max(herm, d.hermiticity_error());
            min_eig = std::min(min_eig, d.min_eigenvalue());
        }
    }
    const bool pass = trace <= 1e-10 && herm <= 1e-10 && min_eig >= -1e-10;
    return {pass, fmt("trace err %.3g, hermiticity err %.3g, min eigenvalue %.3g", trace, herm, min_eig)};
}

Outcome temperature() {
    const double want[] = {0.1, 0.07, 0.05};
    const double kelvin[] = {13000.0, 11440.0, 10250.0};
    bool pass = true;
    std::string detail;
    for (int i = 0; i < 3; ++i) {
        const double n = dimer::photon_number_from_temperature(460.0, kelvin[i]);
        pass = pass && std::abs(n - want[i]) <= 0.003;
        detail += fmt("%.0f K -> %.5f; ", kelvin[i], n);
    }
    return {pass, detail};
}

Outcome backend_agreement() {
    const auto run = preset("fig2b");
    std::vector<double> worst(dimer::kObservableNames.size(), 0.0);
    dimer::MasterOptions ode;
    ode.backend = dimer::MasterBackend::adaptive_ode;
    for (const SystemParams& p : run.params) {
        const auto gen = dimer::build_generator(p);
        const auto a = dimer::propagate_master(gen, dimer::ground_state_rho(), run.grid);
        const auto b = dimer::propagate_master(gen, dimer::ground_state_rho(), run.grid, ode);
        for (std::size_t k = 0; k < a.size(); ++k) {
            for (std::size_t j = 0; j < worst.size(); ++j) {
                const auto which = static_cast<dimer::Observable>(j);
                worst[j] = std::max(worst[j], std::abs(value(a.rows[k], which) - value(b.rows[k], which)));
            }
        }
    }
    std::string detail = "max |exponential - ode|:";
    for (std::size_t j = 0; j < worst.size(); ++j) {
        detail += " " + std::string(dimer::kObservableNames[j]) + fmt(" %.3g", worst[j]);
    }
    return {*std::max_element(worst.begin(), worst.end()) < 1e-8, detail};
}

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {1, "symmetric null", 1.0, symmetric_null},
        {2, "gamma = 0 reference", 1.0, gamma_zero_reference},
        {3, "route triangle", 30.0, route_triangle},
        {4, "energy balance", 5.0, energy_balance},
        {5, "oscillation frequency", 5.0, oscillation},
        {6, "slow relaxation scale", 0.0, relaxation},
        {7, "detuning monotonicity", 0.0, detuning_monotonicity},
        {8, "sign inversion", 10.0, sign_inversion},
        {9, "CPTP sanity", 0.0, cptp},
        {10, "temperature conversion", 0.0, temperature},
        {11, "backend agreement", 0.0, backend_agreement},
    };
    return all;
}

bool run(const Criterion& c) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = c.check();
    } catch (const std::exception& e) {
        out = {false, std::string("error: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.2f s", elapsed);
    if (c.budget_s > 0.0) {
        timing += fmt(" of %.0f s", c.budget_s);
        if (elapsed > c.budget_s) {
            out.pass = false;
            timing += ", over budget";
        }
    }
    std::printf("%s criterion %d (%s): %s [%s]\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
    return out.pass;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
            return 2;
        }
    }
    bool all_pass = true;
    bool found = false;
    for (const auto& c : criteria()) {
        if (only != 0 && c.id != only) continue;
        found = true;
        all_pass = run(c) && all_pass;
    }
    if (!found) {
        std::fprintf(stderr, "no criterion %d\n", only);
        return 2;
    }
    return all_pass ? 0 : 1;
}
