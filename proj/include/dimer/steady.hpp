#pragma once

// Non-equilibrium steady state by three independent routes:
//   reduced   x(inf) = -A^{-1} L from the five-variable system
//   full      normalized null vector of the 16x16 generator
//   analytic  closed-form coherence and population difference over R

#include <cmath>
#include <optional>
#include <sstream>

#include <Eigen/Dense>

#include "dimer/bloch.hpp"
#include "dimer/compensated.hpp"
#include "dimer/errors.hpp"
#include "dimer/linalg.hpp"
#include "dimer/liouvillian.hpp"
#include "dimer/params.hpp"

namespace dimer {

/// Relative threshold on singular values counted as zero in the generator.
inline constexpr double kNullSpaceTolerance = 1e-12;

/// |R| below this fraction of the sum of its term magnitudes is degenerate.
inline constexpr double kDenominatorTolerance = 1e-12;

inline BlochState steady_state_reduced(const ReducedSystem& sys) {
    const double cond = condition_number(sys.a);
    if (!(cond <= kDegeneracyCondition)) {
        std::ostringstream msg;
        msg << "reduced system matrix is singular or nearly so (condition number " << cond
            << "); the steady state is not unique";
        throw DegeneracyError(msg.str());
    }
    const Vector5c rhs = -sys.l;
    const auto sol = refined_solve(sys.a, rhs);
    if (!(sol.scaled_residual < 1e-12)) {
        throw DegeneracyError("iterative refinement did not reach the residual target");
    }
    BlochState s;
    s.x = sol.x;
    return s;
}

/// Exact steady state when Gamma = 0: both molecules thermalize independently,
/// s_kz = -1/(1+2N) and the coherence vanishes.
inline BlochState thermal_product_state(double n_photon) {
    if (!(n_photon >= 0.0) || !std::isfinite(n_photon)) throw DomainError("mean photon number must be non-negative");
    const double sz = -1.0 / (1.0 + 2.0 * n_photon);
    BlochState s;
    s.x << sz, sz, 0.0, 0.0, sz * sz;
    return s;
}

/// Trace-normalized stationary density matrix of the full generator.
inline DensityMatrix steady_state_full(const Generator& gen) {
    const Eigen::JacobiSVD<Matrix16c> svd(gen.superop);
    const auto& sv = svd.singularValues();
    int zeros = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) <= kNullSpaceTolerance * sv(0)) ++zeros;
    }
    if (zeros != 1) {
        std::ostringstream msg;
        msg << "generator null space has dimension " << zeros << " (expected 1)";
        throw DegeneracyError(msg.str());
    }

    // Replace the equation for rho_00 by the trace condition.
    Matrix16c a = gen.superop;
    a.row(0).setZero();
    for (int k = 0; k < 4; ++k) a(0, 5 * k) = 1.0;
    Vector16c rhs = Vector16c::Zero();
    rhs(0) = 1.0;
    const auto sol = refined_solve(a, rhs);

    DensityMatrix d;
    d.rho = ops::unvec(sol.x);
    d.validate();
    return d;
}

namespace steady_detail {

struct Terms {
    DoubleDouble s;        // 1 + 2N
    DoubleDouble gsum;     // gamma1 + gamma2
    DoubleDouble gdiff;    // gamma2 - gamma1
    DoubleDouble g1g2;
    DoubleDouble n2;       // 2N
    double big_gamma;
    double big_omega;
    double delta;
};

inline Terms terms(const SystemParams& p) {
    const Couplings c = couplings(p);
    Terms t;
    t.n2 = DoubleDouble(2.0 * p.n_photon);
    t.s = two_sum(1.0, 2.0 * p.n_photon);
    t.gsum = two_sum(p.gamma1, p.gamma2);
    t.gdiff = two_sum(p.gamma2, -p.gamma1);
    t.g1g2 = two_prod(p.gamma1, p.gamma2);
    t.big_gamma = c.big_gamma;
    t.big_omega = c.big_omega;
    t.delta = p.delta;
    return t;
}

struct Denominator {
    DoubleDouble value;
    double magnitude;  // sum of |terms|, for the degeneracy test
};

inline Denominator denominator(const Terms& t) {
    const DoubleDouble g = t.big_gamma;
    const DoubleDouble w = t.big_omega;
    const DoubleDouble d = t.delta;
    const DoubleDouble s2 = t.s * t.s;
    const DoubleDouble s3 = s2 * t.s;
    const DoubleDouble gsum2 = t.gsum * t.gsum;
    const DoubleDouble gdiff2 = t.gdiff * t.gdiff;
    const DoubleDouble w2 = w * w;

    const DoubleDouble t1 = DoubleDouble(2.0) * t.s * t.gdiff * d * g * w;
    const DoubleDouble t2 = g * g * (s2 * (t.n2 * gdiff2 - gsum2) - DoubleDouble(4.0) * w2);
    const DoubleDouble t3 = s3 * (t.g1g2 * (s2 * gsum2 + d * d) + gsum2 * w2);

    Denominator r;
    r.value = t1 + t2 + t3;
    const double gg = t.big_gamma * t.big_gamma;
    r.magnitude = std::abs(t1.value()) +
                  gg * (s2.value() * (t.n2.value() * gdiff2.value() + gsum2.value()) + 4.0 * w2.value()) +
                  std::abs(t3.value());
    return r;
}

inline double checked_denominator(const Terms& t) {
    const Denominator r = denominator(t);
    if (!(std::abs(r.value.value()) > kDenominatorTolerance * r.magnitude)) {
        throw DegeneracyError("closed-form denominator R vanishes; steady state is degenerate");
    }
    return r.value.value();
}

}  // namespace steady_detail

/// Denominator R of the closed-form steady-state expressions.
inline double analytic_r(const SystemParams& p) {
    return steady_detail::denominator(steady_detail::terms(p)).value.value();
}

/// Im<s2+ s1-> in the steady state:
///   2 N Gamma [(1+2N) g1 g2 Delta + (g2 - g1) Gamma Omega] / R
inline double analytic_coherence_im(const SystemParams& p) {
    const auto t = steady_detail::terms(p);
    const double r = steady_detail::checked_denominator(t);
    const DoubleDouble g = t.big_gamma;
    const DoubleDouble num =
        t.n2 * g * (t.s * t.g1g2 * DoubleDouble(t.delta) + t.gdiff * g * DoubleDouble(t.big_omega));
    return num.value() / r;
}

/// <s2+ s2-> - <s1+ s1-> in the steady state:
///   2 N Gamma (g1 + g2) [Delta Omega + (g1 - g2)(1+2N) Gamma] / R
inline double analytic_pop_diff(const SystemParams& p) {
    const auto t = steady_detail::terms(p);
    const double r = steady_detail::checked_denominator(t);
    const DoubleDouble g = t.big_gamma;
    const DoubleDouble num = t.n2 * g * t.gsum *
                             (DoubleDouble(t.delta) * DoubleDouble(t.big_omega) - t.gdiff * t.s * g);
    return num.value() / r;
}

/// Steady excitation current 2 Omega Im<s2+ s1-> from the closed form.
inline double analytic_current(const SystemParams& p) {
    return 2.0 * couplings(p).big_omega * analytic_coherence_im(p);
}

struct EnergyBalance {
    double lhs = 0.0;       ///< 2 Omega Im<s2+ s1->
    double rhs = 0.0;       ///< kappa/2 (<s2+ s2-> - <s1+ s1->)
    double kappa = 0.0;
    [[nodiscard]] double residual() const { return lhs - rhs; }
};

/// Both sides of the equal-linewidth energy balance, evaluated on the
/// numerically solved steady state. Requires gamma1 == gamma2.
inline EnergyBalance energy_balance(const SystemParams& p) {
    if (p.gamma1 != p.gamma2) {
        throw DomainError("energy balance identity holds only for gamma1 == gamma2");
    }
    const Couplings c = couplings(p);
    const BlochState x = steady_state_reduced(build_reduced_system(p));
    EnergyBalance e;
    e.kappa = kappa(p.gamma1, p.n_photon);
    e.lhs = 2.0 * c.big_omega * x.coherence().imag();
    e.rhs = 0.5 * e.kappa * 0.5 * (x.sz2() - x.sz1());
    return e;
}

inline double energy_balance_residual(const SystemParams& p) { return energy_balance(p).residual(); }

struct SteadyReport {
    BlochState x_inf;
    DensityMatrix rho_inf;
    Couplings couplings;
    double analytic_coherence_im = 0.0;
    double analytic_pop_diff = 0.0;
    double r_denominator = 0.0;
    double current = 0.0;                   ///< 2 Omega analytic_coherence_im
    std::optional<double> balance_residual;  ///< only when gamma1 == gamma2
};

inline SteadyReport steady_report(const SystemParams& p) {
    SteadyReport r;
    r.couplings = couplings(p);
    r.x_inf = steady_state_reduced(build_reduced_system(p));
    r.rho_inf = steady_state_full(build_generator(p));
    r.analytic_coherence_im = analytic_coherence_im(p);
    r.analytic_pop_diff = analytic_pop_diff(p);
    r.r_denominator = analytic_r(p);
    r.current = 2.0 * r.couplings.big_omega * r.analytic_coherence_im;
    if (p.gamma1 == p.gamma2) r.balance_residual = energy_balance_residual(p);
    return r;
}

}  // namespace dimer
