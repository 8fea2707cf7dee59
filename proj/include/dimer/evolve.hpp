#pragma once

// Time propagation of the reduced and full systems, and analysis of the
// resulting time series.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include <boost/numeric/odeint/stepper/controlled_runge_kutta.hpp>
#include <boost/numeric/odeint/stepper/generation.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include "dimer/bloch.hpp"
#include "dimer/errors.hpp"
#include "dimer/linalg.hpp"
#include "dimer/liouvillian.hpp"
#include "dimer/observables.hpp"
#include "dimer/steady.hpp"

namespace dimer {

enum class Spacing { linear, logarithmic };

struct TimeGrid {
    double t_start = 0.0;
    double t_end = 1.0;
    int n_samples = 2000;
    Spacing spacing = Spacing::linear;

    void validate() const {
        if (!std::isfinite(t_start) || !std::isfinite(t_end)) throw DomainError("grid bounds must be finite");
        if (t_start < 0.0) throw DomainError("grid must start at t >= 0");
        if (!(t_end > t_start)) throw DomainError("grid end must exceed grid start");
        if (n_samples < 2) throw DomainError("grid needs at least two samples");
        if (spacing == Spacing::logarithmic && !(t_start > 0.0)) {
            throw DomainError("logarithmic grid requires t_start > 0");
        }
    }

    [[nodiscard]] double step() const { return (t_end - t_start) / (n_samples - 1); }

    [[nodiscard]] std::vector<double> times() const {
        validate();
        std::vector<double> t(static_cast<std::size_t>(n_samples));
        const double last = n_samples - 1;
        if (spacing == Spacing::linear) {
            const double h = step();
            for (int k = 0; k < n_samples; ++k) t[k] = t_start + k * h;
        } else {
            const double a = std::log(t_start);
            const double b = std::log(t_end);
            for (int k = 0; k < n_samples; ++k) t[k] = std::exp(a + (b - a) * (k / last));
        }
        t.front() = t_start;
        t.back() = t_end;
        for (std::size_t k = 1; k < t.size(); ++k) {
            if (!(t[k] > t[k - 1])) throw DomainError("grid times are not strictly increasing");
        }
        return t;
    }

    bool operator==(const TimeGrid&) const = default;
};

struct TimeSeries {
    std::vector<double> times;
    std::vector<ObservableSet> rows;

    [[nodiscard]] std::size_t size() const { return times.size(); }

    [[nodiscard]] std::vector<double> column(Observable which) const {
        std::vector<double> out(rows.size());
        std::transform(rows.begin(), rows.end(), out.begin(), [which](const ObservableSet& o) { return value(o, which); });
        return out;
    }
};

/// Exact propagation x(t) = x_inf + e^{At} (x0 - x_inf) of the reduced system,
/// equivalent to e^{At} x0 + (e^{At} - 1) A^{-1} L. The deviation from the
/// fixed point is carried in extended precision.
class AffinePropagator {
public:
    using ExtVector = Eigen::Matrix<std::complex<Extended>, 5, 1>;
    using ExtMatrix = Eigen::Matrix<std::complex<Extended>, 5, 5>;

    explicit AffinePropagator(const ReducedSystem& sys) : sys_(sys) {
        const double cond = condition_number(sys.a);
        if (!(cond <= kDegeneracyCondition)) {
            std::ostringstream msg;
            msg << "reduced system matrix is singular or nearly so (condition number " << cond
                << "); propagate with a spectral-projector decomposition instead";
            throw DegeneracyError(msg.str());
        }
        fixed_point_ = steady_state_reduced(sys);
        a_ext_ = sys.a.cast<std::complex<Extended>>();
        x_inf_ext_ = fixed_point_.x.cast<std::complex<Extended>>();
    }

    [[nodiscard]] BlochState at(const BlochState& x0, double t) const {
        if (!(t >= 0.0)) throw DomainError("propagation time must be non-negative");
        if (t == 0.0) return x0;
        const ExtMatrix e = expm_schur(ExtMatrix(a_ext_ * static_cast<Extended>(t)));
        return round(x_inf_ext_ + e * deviation(x0));
    }

    /// States on every grid time. Linear grids reuse a single step propagator.
    [[nodiscard]] std::vector<BlochState> on_grid(const BlochState& x0, const TimeGrid& grid) const {
        const std::vector<double> t = grid.times();
        std::vector<BlochState> out(t.size());
        out[0] = at(x0, t[0]);
        if (grid.spacing == Spacing::linear) {
            const ExtMatrix step = expm_schur(ExtMatrix(a_ext_ * static_cast<Extended>(grid.step())));
            ExtVector y = t[0] == 0.0 ? deviation(x0)
                                      : ExtVector(expm_schur(ExtMatrix(a_ext_ * static_cast<Extended>(t[0]))) *
                                                  deviation(x0));
            for (std::size_t k = 1; k < t.size(); ++k) {
                y = step * y;
                out[k] = round(x_inf_ext_ + y);
            }
        } else {
            for (std::size_t k = 1; k < t.size(); ++k) out[k] = at(x0, t[k]);
        }
        return out;
    }

    [[nodiscard]] const BlochState& fixed_point() const { return fixed_point_; }
    [[nodiscard]] const ReducedSystem& system() const { return sys_; }

private:
    [[nodiscard]] ExtVector deviation(const BlochState& x0) const {
        return x0.x.cast<std::complex<Extended>>() - x_inf_ext_;
    }
    static BlochState round(const ExtVector& v) {
        BlochState s;
        s.x = v.cast<Complex>();
        return s;
    }

    ReducedSystem sys_;
    BlochState fixed_point_;
    ExtMatrix a_ext_;
    ExtVector x_inf_ext_;
};

inline BlochState propagate_affine(const ReducedSystem& sys, const BlochState& x0, double t) {
    return AffinePropagator(sys).at(x0, t);
}

/// Observable time series of the reduced system.
inline TimeSeries propagate_reduced(const ReducedSystem& sys, const Couplings& c, const BlochState& x0,
                                    const TimeGrid& grid) {
    const AffinePropagator prop(sys);
    const std::vector<BlochState> states = prop.on_grid(x0, grid);
    TimeSeries series;
    series.times = grid.times();
    series.rows.reserve(states.size());
    for (const BlochState& s : states) series.rows.push_back(observables_from_bloch(s, c));
    return series;
}

enum class MasterBackend { exponential, adaptive_ode };

struct MasterOptions {
    MasterBackend backend = MasterBackend::exponential;
    double abs_tolerance = 1e-10;  ///< local error tolerance of the ODE backend
    double rel_tolerance = 1e-10;
    long max_steps = 20'000'000;
};

namespace evolve_detail {

using OdeState = std::array<Complex, 16>;

/// Propagates v0 under the generator with Schur-Parlett exponentials. When
/// the stationary state v_inf is unique, the traceless deviation v0 - v_inf
/// is carried under S - v_inf w^T (w the trace functional), which acts as S
/// on traceless vectors but moves the stationary eigenvalue 0 to -1. Without
/// this the coherences lose about four digits against the reduced route.
inline std::vector<Vector16c> exponential_path(const Generator& gen, const Vector16c& v0, const TimeGrid& grid,
                                               const std::vector<double>& t) {
    using ExtVector = Eigen::Matrix<std::complex<Extended>, 16, 1>;
    using ExtMatrix = Eigen::Matrix<std::complex<Extended>, 16, 16>;
    ExtMatrix s_ext = gen.superop.cast<std::complex<Extended>>();
    ExtVector fixed = ExtVector::Zero();
    try {
        fixed = ops::vec(steady_state_full(gen).rho).cast<std::complex<Extended>>();
        ExtVector w = ExtVector::Zero();
        for (int k = 0; k < 4; ++k) w(5 * k) = 1.0L;
        s_ext -= fixed * w.transpose();
    } catch (const DegeneracyError&) {
        fixed.setZero();
    }
    auto propagator = [&](double time) { return expm_schur(ExtMatrix(s_ext * static_cast<Extended>(time))); };

    const ExtVector d0 = v0.cast<std::complex<Extended>>() - fixed;
    std::vector<Vector16c> out(t.size());
    ExtVector d = t[0] == 0.0 ? d0 : ExtVector(propagator(t[0]) * d0);
    out[0] = ExtVector(fixed + d).cast<Complex>();
    if (grid.spacing == Spacing::linear) {
        const ExtMatrix step = propagator(grid.step());
        for (std::size_t k = 1; k < t.size(); ++k) {
            d = step * d;
            out[k] = ExtVector(fixed + d).cast<Complex>();
        }
    } else {
        for (std::size_t k = 1; k < t.size(); ++k) out[k] = ExtVector(fixed + propagator(t[k]) * d0).cast<Complex>();
    }
    return out;
}

inline std::vector<Vector16c> ode_path(const Matrix16c& s, const Vector16c& v0, const std::vector<double>& t,
                                       const MasterOptions& opt) {
    namespace odeint = boost::numeric::odeint;
    auto rhs = [&s](const OdeState& x, OdeState& dxdt, double /*t*/) {
        const Eigen::Map<const Vector16c> xv(x.data());
        Eigen::Map<Vector16c> dv(dxdt.data());
        dv.noalias() = s * xv;
    };
    auto stepper = odeint::make_controlled(opt.abs_tolerance, opt.rel_tolerance,
                                           odeint::runge_kutta_fehlberg78<OdeState>());

    OdeState x;
    Eigen::Map<Vector16c>(x.data()) = v0;
    const double norm = std::max(1.0, s.cwiseAbs().rowwise().sum().maxCoeff());
    double time = 0.0;
    double dt = 0.1 / norm;
    long steps = 0;

    std::vector<Vector16c> out;
    out.reserve(t.size());
    for (double target : t) {
        while (time < target) {
            const bool clipped = dt >= target - time;
            double trial = clipped ? target - time : dt;
            const double start = time;
            const auto result = stepper.try_step(rhs, x, time, trial);
            if (result == odeint::success) {
                ++steps;
                if (clipped) {
                    time = target;
                    dt = std::max(dt, trial);
                } else {
                    dt = trial;
                }
            } else {
                dt = trial;
                if (dt < 1e-14 * std::max(1.0, std::abs(start))) {
                    throw StiffnessError(
                        "adaptive step size underflow; the system is too stiff for the ODE backend, "
                        "use the exponential backend");
                }
            }
            if (steps > opt.max_steps) {
                std::ostringstream msg;
                msg << "adaptive integration exceeded " << opt.max_steps
                    << " steps; the system is too stiff for the ODE backend, use the exponential backend";
                throw StiffnessError(msg.str());
            }
        }
        out.emplace_back(Eigen::Map<const Vector16c>(x.data()));
    }
    return out;
}

}  // namespace evolve_detail

/// Density matrices on the grid, propagated under the full generator.
inline std::vector<DensityMatrix> evolve_density(const Generator& gen, const DensityMatrix& rho0,
                                                 const TimeGrid& grid, const MasterOptions& opt = {}) {
    rho0.validate();
    const std::vector<double> t = grid.times();
    const Vector16c v0 = ops::vec(rho0.rho);
    const std::vector<Vector16c> path = opt.backend == MasterBackend::exponential
                                            ? evolve_detail::exponential_path(gen, v0, grid, t)
                                            : evolve_detail::ode_path(gen.superop, v0, t, opt);
    std::vector<DensityMatrix> out(path.size());
    for (std::size_t k = 0; k < path.size(); ++k) out[k].rho = ops::unvec(path[k]);
    return out;
}

/// Observable time series of the full master equation.
inline TimeSeries propagate_master(const Generator& gen, const DensityMatrix& rho0, const TimeGrid& grid,
                                   const MasterOptions& opt = {}) {
    const std::vector<DensityMatrix> states = evolve_density(gen, rho0, grid, opt);
    TimeSeries series;
    series.times = grid.times();
    series.rows.reserve(states.size());
    for (const DensityMatrix& d : states) series.rows.push_back(observables_from_rho(d, gen.couplings, 1e-8));
    return series;
}

struct Extremum {
    double t = 0.0;
    double value = 0.0;
    std::size_t index = 0;
};

/// Local extrema by three-point comparison. A candidate is kept only if it
/// differs from the previously kept extremum by more than rel_floor times
/// the signal range; the location is refined by a parabola through the
/// three points.
inline std::vector<Extremum> find_extrema(const std::vector<double>& t, const std::vector<double>& y,
                                          double rel_floor = 1e-6) {
    std::vector<Extremum> out;
    if (y.size() < 3 || t.size() != y.size()) return out;
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) return out;
    const double floor = rel_floor * range;

    double reference = y.front();
    int last_kind = 0;  // +1 maximum, -1 minimum
    for (std::size_t k = 1; k + 1 < y.size(); ++k) {
        const double left = y[k] - y[k - 1];
        const double right = y[k + 1] - y[k];
        int kind = 0;
        if (left > 0.0 && right < 0.0) kind = 1;
        if (left < 0.0 && right > 0.0) kind = -1;
        if (kind == 0) continue;

        // Vertex of the interpolating parabola.
        const double t0 = t[k - 1], t1 = t[k], t2 = t[k + 1];
        const double y0 = y[k - 1], y1 = y[k], y2 = y[k + 1];
        const double d01 = (y1 - y0) / (t1 - t0);
        const double d12 = (y2 - y1) / (t2 - t1);
        const double curvature = (d12 - d01) / (t2 - t0);
        Extremum e{t1, y1, k};
        if (curvature != 0.0) {
            const double tv = 0.5 * (t0 + t1) - d01 / (2.0 * curvature);
            if (tv > t0 && tv < t2) {
                e.t = tv;
                e.value = y0 + d01 * (tv - t0) + curvature * (tv - t0) * (tv - t1);
            }
        }

        if (kind == last_kind) {
            // Same kind twice in a row: keep the more extreme one.
            Extremum& prev = out.back();
            if ((kind > 0 && e.value > prev.value) || (kind < 0 && e.value < prev.value)) prev = e;
            continue;
        }
        if (std::abs(e.value - reference) <= floor) continue;
        out.push_back(e);
        reference = e.value;
        last_kind = kind;
    }
    return out;
}

/// First extremum of an observable in a series.
inline Extremum first_extremum(const TimeSeries& series, Observable which, double rel_floor = 1e-6) {
    const auto extrema = find_extrema(series.times, series.column(which), rel_floor);
    if (extrema.empty()) throw EstimationError("series has no extremum");
    return extrema.front();
}

struct OscillationEstimate {
    double frequency = 0.0;           ///< angular frequency, pi / mean extremum spacing
    double decay = 0.0;               ///< envelope decay rate
    double frequency_residual = 0.0;  ///< relative standard deviation of the spacings
    double decay_residual = 0.0;      ///< rms residual of the log-linear envelope fit
    std::size_t extrema = 0;
};

/// Frequency from the mean extremum spacing (half a period) and decay rate
/// from a log-linear fit of the half peak-to-trough amplitudes, which is
/// insensitive to a slowly drifting baseline.
inline OscillationEstimate estimate_oscillation(const TimeSeries& series, Observable which) {
    const auto ex = find_extrema(series.times, series.column(which));
    if (ex.size() < 3) {
        throw EstimationError("fewer than three extrema; the signal is overdamped or constant");
    }
    OscillationEstimate est;
    est.extrema = ex.size();

    const std::size_t n = ex.size() - 1;
    std::vector<double> spacing(n);
    std::vector<double> tm(n);
    std::vector<double> log_amp(n);
    for (std::size_t j = 0; j < n; ++j) {
        spacing[j] = ex[j + 1].t - ex[j].t;
        tm[j] = 0.5 * (ex[j + 1].t + ex[j].t);
        log_amp[j] = std::log(0.5 * std::abs(ex[j + 1].value - ex[j].value));
    }
    const double mean = std::accumulate(spacing.begin(), spacing.end(), 0.0) / n;
    double var = 0.0;
    for (double s : spacing) var += (s - mean) * (s - mean);
    est.frequency = std::acos(-1.0) / mean;
    est.frequency_residual = std::sqrt(var / n) / mean;

    // Least squares fit log_amp = c - decay * t.
    const double tbar = std::accumulate(tm.begin(), tm.end(), 0.0) / n;
    const double ybar = std::accumulate(log_amp.begin(), log_amp.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        sxx += (tm[j] - tbar) * (tm[j] - tbar);
        sxy += (tm[j] - tbar) * (log_amp[j] - ybar);
    }
    if (!(sxx > 0.0)) throw EstimationError("extrema do not span a time interval");
    const double slope = sxy / sxx;
    est.decay = -slope;
    double ss = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double r = log_amp[j] - (ybar + slope * (tm[j] - tbar));
        ss += r * r;
    }
    est.decay_residual = std::sqrt(ss / n);
    return est;
}

/// Time after which the current stays within rel_band * |current(inf)| of
/// its steady value. Scans [0, t_max] on n_scan points, rescans the tail of
/// the last exit at 16 samples per period of the fastest mode (a coarse scan
/// aliases the exchange oscillation and can step over its last excursions),
/// then bisects the last exit from the band.
inline double settling_time(const AffinePropagator& prop, const Couplings& c, const BlochState& x0,
                            double rel_band, double t_max, int n_scan = 20000) {
    const double steady = 2.0 * c.big_omega * prop.fixed_point().coherence().imag();
    if (steady == 0.0) throw EstimationError("steady current vanishes; relative band undefined");
    const double band = rel_band * std::abs(steady);
    auto outside = [&](const BlochState& s) {
        return std::abs(2.0 * c.big_omega * s.coherence().imag() - steady) > band;
    };
    auto last_outside = [&](const std::vector<BlochState>& states) {
        for (std::size_t k = states.size(); k-- > 0;) {
            if (outside(states[k])) return k;
        }
        return states.size();
    };

    const TimeGrid grid{0.0, t_max, n_scan, Spacing::linear};
    std::vector<double> t = grid.times();
    std::vector<BlochState> states = prop.on_grid(x0, grid);
    std::size_t last = last_outside(states);
    if (last == states.size()) return 0.0;
    if (last + 1 == states.size()) throw EstimationError("current has not settled by t_max");

    const Eigen::ComplexEigenSolver<Matrix5c> eig(prop.system().a, false);
    const double fastest = eig.eigenvalues().imag().cwiseAbs().maxCoeff();
    const double coarse = grid.step();
    const double fine = fastest > 0.0 ? std::min(coarse, 2.0 * std::acos(-1.0) / (16.0 * fastest)) : coarse;
    if (fine < coarse) {
        double width = 8.0 * coarse;
        for (;;) {
            const BlochState start = states[last];
            const double t0 = t[last];
            const double t1 = std::min(t_max, t0 + width);
            const int n = static_cast<int>(std::ceil((t1 - t0) / fine)) + 1;
            const TimeGrid window{0.0, t1 - t0, n, Spacing::linear};
            const std::vector<BlochState> refined = prop.on_grid(start, window);
            const std::size_t k = last_outside(refined);
            std::vector<double> tw = window.times();
            for (double& v : tw) v += t0;
            const bool near_end = k + 1 >= refined.size() || tw[k] > t0 + 0.75 * (t1 - t0);
            if (near_end && t1 < t_max) {
                width *= 2.0;
                continue;
            }
            if (k + 1 == refined.size()) throw EstimationError("current has not settled by t_max");
            t = std::move(tw);
            states = refined;
            last = k;
            break;
        }
    }

    double a = t[last];
    double b = t[last + 1];
    const BlochState& base = states[last];
    for (int it = 0; it < 200 && b - a > 1e-14 * b; ++it) {
        const double mid = 0.5 * (a + b);
        if (outside(prop.at(base, mid - t[last]))) a = mid; else b = mid;
    }
    return b;
}

}  // namespace dimer
