#pragma once

// Full master-equation generator acting on the 4x4 two-molecule density
// matrix. This is the brute-force reference against which the reduced
// equations of motion are checked.

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "dimer/errors.hpp"
#include "dimer/observables.hpp"
#include "dimer/operators.hpp"
#include "dimer/params.hpp"

namespace dimer {

/// Default tolerance for density-matrix invariants.
inline constexpr double kStateTolerance = 1e-10;

struct DensityMatrix {
    Matrix4c rho = Matrix4c::Zero();

    [[nodiscard]] double hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }
    [[nodiscard]] double trace_error() const { return std::abs(rho.trace() - Complex(1.0)); }
    [[nodiscard]] double min_eigenvalue() const {
        const Matrix4c h = 0.5 * (rho + rho.adjoint());
        const Eigen::SelfAdjointEigenSolver<Matrix4c> eig(h, Eigen::EigenvaluesOnly);
        return eig.eigenvalues().minCoeff();
    }
    [[nodiscard]] double purity() const { return (rho * rho).trace().real(); }

    void validate(double tol = kStateTolerance) const {
        if (!rho.allFinite()) throw ValidationError("density matrix has non-finite entries");
        if (hermiticity_error() >= tol) throw ValidationError("density matrix is not Hermitian");
        if (trace_error() >= tol) throw ValidationError("density matrix trace differs from one");
        if (min_eigenvalue() < -tol) throw ValidationError("density matrix is not positive semidefinite");
    }
};

/// Vectorized (column-major) master-equation superoperator.
struct Generator {
    Matrix16c superop = Matrix16c::Zero();
    Couplings couplings;

    [[nodiscard]] Vector16c apply(const Vector16c& v) const { return superop * v; }
    [[nodiscard]] Matrix4c apply(const Matrix4c& rho) const { return ops::unvec(superop * ops::vec(rho)); }
};

/// Rates entering the generator. Unlike SystemParams, zero rates are allowed,
/// which gives access to the Hamiltonian-only and decoupled limits.
struct GeneratorTerms {
    double gamma1 = 1.0;
    double gamma2 = 1.0;
    double delta = 0.0;
    double n_photon = 0.0;
    Couplings couplings;

    static GeneratorTerms from(const SystemParams& p) { return {p.gamma1, p.gamma2, p.delta, p.n_photon, dimer::couplings(p)}; }
};

/// Assembles the generator term by term:
///   detuning commutators  i Delta/2 (-1)^k [s_k+ s_k-, rho]
///   exchange commutators  -i Omega [s_k+ s_l-, rho]
///   pumping               gamma_k N {[s_k+, rho s_k-] + [s_k+ rho, s_k-]}
///   decay                 gamma_k (1+N) {[s_k-, rho s_k+] + [s_k- rho, s_k+]}
///   collective decay      Gamma {[s_k-, rho s_l+] + [s_k- rho, s_l+]}
/// summed over k != l. The collective term carries no thermal factor.
inline Generator build_generator(const GeneratorTerms& terms) {
    using ops::Molecule;
    for (double r : {terms.gamma1, terms.gamma2, terms.n_photon}) {
        if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("generator rates must be finite and non-negative");
    }
    const Couplings& c = terms.couplings;
    const Complex i(0.0, 1.0);
    const double gammas[2] = {terms.gamma1, terms.gamma2};
    const Molecule mol[2] = {Molecule::first, Molecule::second};

    Generator g;
    g.couplings = c;
    for (int k = 0; k < 2; ++k) {
        const int l = 1 - k;
        const Matrix4c sp_k = ops::raising(mol[k]);
        const Matrix4c sm_k = ops::lowering(mol[k]);
        const Matrix4c sp_l = ops::raising(mol[l]);
        const Matrix4c sm_l = ops::lowering(mol[l]);
        const double parity = (k == 0) ? -1.0 : 1.0;  // (-1)^k with k = 1, 2

        g.superop += (i * terms.delta / 2.0 * parity) * ops::commutator(sp_k * sm_k);
        g.superop += (-i * c.big_omega) * ops::commutator(sp_k * sm_l);
        g.superop += (gammas[k] * terms.n_photon) * ops::dissipator(sp_k, sm_k);
        g.superop += (gammas[k] * (1.0 + terms.n_photon)) * ops::dissipator(sm_k, sp_k);
        g.superop += c.big_gamma * ops::dissipator(sm_k, sp_l);
    }
    return g;
}

inline Generator build_generator(const SystemParams& p) { return build_generator(GeneratorTerms::from(p)); }

inline DensityMatrix ground_state_rho() {
    DensityMatrix d;
    d.rho(0, 0) = 1.0;
    return d;
}

inline ObservableSet observables_from_rho(const DensityMatrix& d, const Couplings& c,
                                          double tol = kStateTolerance) {
    d.validate(tol);
    const Matrix4c& r = d.rho;
    ObservableSet o;
    o.coherence = r(1, 2);  // <e1 g2| rho |g1 e2>
    o.current = 2.0 * c.big_omega * o.coherence.imag();
    o.pop1 = (r(1, 1) + r(3, 3)).real();
    o.pop2 = (r(2, 2) + r(3, 3)).real();
    o.zz = (r(0, 0) - r(1, 1) - r(2, 2) + r(3, 3)).real();
    return o;
}

}  // namespace dimer
