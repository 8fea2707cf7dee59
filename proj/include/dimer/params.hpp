#pragma once

// Physical parameters of the dipole-coupled dimer and the retarded coupling
// constants derived from them. All rates are expressed in units of gamma1.

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "dimer/errors.hpp"

namespace dimer {

/// Radius below which the radial kernels are evaluated by Taylor series.
inline constexpr double kSeriesCrossover = 0.5;

/// Tolerance on the Gram-matrix eigenvalues when checking realizability.
inline constexpr double kRealizabilityTolerance = 1e-12;

/// Dimer geometry stored as the inner products the couplings depend on.
struct Geometry {
    double xi = 0.02;  ///< effective distance omega0 * r12 / c
    double f1 = 0.0;   ///< d1 . r12
    double f2 = 0.0;   ///< d2 . r12
    double dd = 1.0;   ///< d1 . d2

    /// Parallel dipoles at equal angle to the connecting axis.
    static Geometry parallel(double xi, double f) { return {xi, f, f, 1.0}; }

    /// Builds the inner products from (not necessarily normalized) vectors.
    static Geometry from_vectors(double xi, const std::array<double, 3>& d1,
                                 const std::array<double, 3>& d2,
                                 const std::array<double, 3>& r12) {
        const Eigen::Vector3d u1(d1[0], d1[1], d1[2]);
        const Eigen::Vector3d u2(d2[0], d2[1], d2[2]);
        const Eigen::Vector3d ur(r12[0], r12[1], r12[2]);
        if (u1.norm() == 0.0 || u2.norm() == 0.0 || ur.norm() == 0.0) {
            throw DomainError("geometry vectors must be non-zero");
        }
        const Eigen::Vector3d n1 = u1.normalized();
        const Eigen::Vector3d n2 = u2.normalized();
        const Eigen::Vector3d nr = ur.normalized();
        return {xi, n1.dot(nr), n2.dot(nr), n1.dot(n2)};
    }

    /// The Gram matrix of (d1, d2, r12) must be positive semidefinite.
    [[nodiscard]] bool realizable(double tol = kRealizabilityTolerance) const {
        if (std::abs(f1) > 1.0 + tol || std::abs(f2) > 1.0 + tol || std::abs(dd) > 1.0 + tol) {
            return false;
        }
        Eigen::Matrix3d gram;
        gram << 1.0, dd, f1,
                dd, 1.0, f2,
                f1, f2, 1.0;
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(gram, Eigen::EigenvaluesOnly);
        return eig.eigenvalues().minCoeff() >= -tol;
    }

    void validate() const {
        if (!std::isfinite(xi) || xi < 0.0) {
            throw DomainError("effective distance xi must be finite and non-negative");
        }
        if (!realizable()) {
            throw DomainError("geometry (f1, f2, dd) is not realizable by unit vectors");
        }
    }

    bool operator==(const Geometry&) const = default;
};

/// Molecular rates, detuning and drive strength, all in units of gamma1.
struct SystemParams {
    double gamma1 = 1.0;
    double gamma2 = 0.9999;
    double delta = 0.0;     ///< omega1 - omega2
    double n_photon = 0.0;  ///< mean thermal photon number N(omega0)
    Geometry geometry;
    /// Forces the collective decay rate to zero regardless of geometry.
    bool zero_collective_decay = false;

    void validate() const {
        if (!(gamma1 > 0.0) || !std::isfinite(gamma1)) throw DomainError("gamma1 must be positive");
        if (!(gamma2 > 0.0) || !std::isfinite(gamma2)) throw DomainError("gamma2 must be positive");
        if (!std::isfinite(delta)) throw DomainError("detuning must be finite");
        if (!(n_photon >= 0.0) || !std::isfinite(n_photon)) {
            throw DomainError("mean photon number must be non-negative");
        }
        geometry.validate();
    }

    bool operator==(const SystemParams&) const = default;
};

/// Collective decay rate and coherent exchange rate.
struct Couplings {
    double big_gamma = 0.0;
    double big_omega = 0.0;

    /// The complex dipole-dipole coupling T = Gamma + i Omega.
    [[nodiscard]] std::complex<double> t() const { return {big_gamma, big_omega}; }
};

namespace detail {

// Coefficient tables for the even power series of the radial kernels.
// Sixteen terms keep the truncation error below 1e-30 up to xi = 1.
inline constexpr int kSeriesTerms = 16;

inline double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

template <typename Coefficient>
double even_series(double xi, Coefficient&& coefficient) {
    const double x2 = xi * xi;
    double sum = 0.0;
    for (int n = kSeriesTerms - 1; n >= 0; --n) {
        sum = sum * x2 + coefficient(n);
    }
    return sum;
}

inline double sign(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// sin(xi)/xi
inline double far_sine_direct(double xi) { return std::sin(xi) / xi; }
inline double far_sine_series(double xi) {
    return even_series(xi, [](int n) { return sign(n) / factorial(2 * n + 1); });
}

// cos(xi)/xi^2 - sin(xi)/xi^3, which tends to -1/3.
inline double near_gamma_direct(double xi) {
    return std::cos(xi) / (xi * xi) - std::sin(xi) / (xi * xi * xi);
}
inline double near_gamma_series(double xi) {
    // sum_{n>=1} (-1)^n 2n/(2n+1)! xi^(2n-2), re-indexed from m = n - 1
    return even_series(xi, [](int m) {
        const int n = m + 1;
        return sign(n) * (2.0 * n) / factorial(2 * n + 1);
    });
}

// xi * cos(xi), the far-field Omega kernel cos(xi)/xi scaled by xi^2.
inline double far_cosine_scaled_direct(double xi) { return xi * std::cos(xi); }
inline double far_cosine_scaled_series(double xi) {
    return xi * even_series(xi, [](int n) { return sign(n) / factorial(2 * n); });
}

// xi^3 (sin(xi)/xi^2 + cos(xi)/xi^3) = xi sin(xi) + cos(xi).
inline double near_omega_scaled_direct(double xi) { return xi * std::sin(xi) + std::cos(xi); }
inline double near_omega_scaled_series(double xi) {
    return even_series(xi, [](int n) { return sign(n) * (1.0 - 2.0 * n) / factorial(2 * n); });
}

inline double angular_far(const Geometry& g) { return g.dd - g.f1 * g.f2; }
inline double angular_near(const Geometry& g) { return g.dd - 3.0 * g.f1 * g.f2; }

inline void check_rates(double gamma1, double gamma2) {
    if (!(gamma1 > 0.0) || !(gamma2 > 0.0) || !std::isfinite(gamma1) || !std::isfinite(gamma2)) {
        throw DomainError("decay rates must be positive and finite");
    }
}

enum class KernelPath { automatic, direct, series };

inline double gamma_kernel(double xi, const Geometry& g, KernelPath path) {
    const bool series = path == KernelPath::series ||
                        (path == KernelPath::automatic && xi < kSeriesCrossover);
    const double far = series ? far_sine_series(xi) : far_sine_direct(xi);
    const double near = series ? near_gamma_series(xi) : near_gamma_direct(xi);
    return angular_far(g) * far + angular_near(g) * near;
}

// Returns xi^3 * (bracket of the Omega formula); divided by xi^3 by the caller.
inline double omega_kernel_scaled(double xi, const Geometry& g, KernelPath path) {
    const bool series = path == KernelPath::series ||
                        (path == KernelPath::automatic && xi < kSeriesCrossover);
    const double far = series ? far_cosine_scaled_series(xi) : far_cosine_scaled_direct(xi);
    const double near = series ? near_omega_scaled_series(xi) : near_omega_scaled_direct(xi);
    return -angular_far(g) * xi * far + angular_near(g) * near;
}

inline double coupling_gamma(const Geometry& g, double gamma1, double gamma2, KernelPath path) {
    check_rates(gamma1, gamma2);
    g.validate();
    return 1.5 * std::sqrt(gamma1 * gamma2) * gamma_kernel(g.xi, g, path);
}

inline double coupling_omega(const Geometry& g, double gamma1, double gamma2, KernelPath path) {
    check_rates(gamma1, gamma2);
    if (g.xi == 0.0) throw SingularityError("Omega diverges as xi^-3 at xi = 0");
    g.validate();
    const double xi3 = g.xi * g.xi * g.xi;
    return 1.5 * std::sqrt(gamma1 * gamma2) * omega_kernel_scaled(g.xi, g, path) / xi3;
}

}  // namespace detail

/// Collective decay rate Gamma(xi). Finite at xi = 0, where it equals
/// sqrt(gamma1 gamma2) d1.d2.
inline double coupling_gamma(const Geometry& g, double gamma1, double gamma2) {
    return detail::coupling_gamma(g, gamma1, gamma2, detail::KernelPath::automatic);
}

/// Coherent exchange rate Omega(xi); requires xi > 0.
inline double coupling_omega(const Geometry& g, double gamma1, double gamma2) {
    return detail::coupling_omega(g, gamma1, gamma2, detail::KernelPath::automatic);
}

/// Static dipole-dipole shift V_dd / hbar in units of gamma1: the xi^-3 part of Omega.
inline double static_vdd_limit(const Geometry& g, double gamma1, double gamma2) {
    detail::check_rates(gamma1, gamma2);
    if (g.xi == 0.0) throw SingularityError("static dipole-dipole energy diverges at xi = 0");
    g.validate();
    return 1.5 * std::sqrt(gamma1 * gamma2) * detail::angular_near(g) / (g.xi * g.xi * g.xi);
}

/// Bose-Einstein occupation of a thermal mode at the given wavelength.
inline double photon_number_from_temperature(double wavelength_nm, double temperature_k) {
    if (!(wavelength_nm > 0.0) || !(temperature_k > 0.0)) {
        throw DomainError("wavelength and temperature must be positive");
    }
    constexpr double planck = 6.62607015e-34;      // J s
    constexpr double light_speed = 299792458.0;    // m / s
    constexpr double boltzmann = 1.380649e-23;     // J / K
    const double x = planck * light_speed / (wavelength_nm * 1e-9 * boltzmann * temperature_k);
    return 1.0 / std::expm1(x);
}

/// Population relaxation rate 2 gamma (1 + 2N).
inline double kappa(double gamma, double n_photon) {
    if (!(gamma > 0.0)) throw DomainError("decay rate must be positive");
    if (!(n_photon >= 0.0)) throw DomainError("mean photon number must be non-negative");
    return 2.0 * gamma * (1.0 + 2.0 * n_photon);
}

/// Couplings for a parameter set, honouring the collective-decay override.
inline Couplings couplings(const SystemParams& p) {
    p.validate();
    Couplings c;
    c.big_gamma = p.zero_collective_decay ? 0.0 : coupling_gamma(p.geometry, p.gamma1, p.gamma2);
    c.big_omega = coupling_omega(p.geometry, p.gamma1, p.gamma2);
    return c;
}

}  // namespace dimer
