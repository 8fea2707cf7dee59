#pragma once

// Equations of motion for operator expectation values.
//
// The fifteen expectation values Q = (s1-, s1+, s1z, s2-, s2+, s2z, s1-s2-,
// s1-s2+, s1-s2z, s1+s2-, s1+s2+, s1+s2z, s1zs2-, s1zs2+, s1zs2z) obey a
// closed affine system d<Q>/dt = M <Q> + b which splits into four uncoupled
// blocks. The block holding the populations and the intermolecular
// coherence is written out by hand in build_reduced_system(); the full
// system is derived from the master-equation generator so the two can be
// checked against each other.

#include <array>
#include <cmath>
#include <complex>
#include <string_view>

#include <Eigen/Dense>

#include "dimer/errors.hpp"
#include "dimer/liouvillian.hpp"
#include "dimer/observables.hpp"
#include "dimer/operators.hpp"
#include "dimer/params.hpp"

namespace dimer {

using Vector5c = Eigen::Matrix<Complex, 5, 1>;
using Matrix5c = Eigen::Matrix<Complex, 5, 5>;
using Vector15c = Eigen::Matrix<Complex, 15, 1>;
using Matrix15c = Eigen::Matrix<Complex, 15, 15>;

/// x = (<s1z>, <s2z>, <s2+ s1->, <s1+ s2->, <s1z s2z>).
struct BlochState {
    Vector5c x = Vector5c::Zero();

    [[nodiscard]] double sz1() const { return x(0).real(); }
    [[nodiscard]] double sz2() const { return x(1).real(); }
    [[nodiscard]] Complex coherence() const { return x(2); }
    [[nodiscard]] double zz() const { return x(4).real(); }

    /// Largest deviation from the realness / conjugation constraints.
    [[nodiscard]] double structure_error() const {
        double e = std::abs(x(0).imag());
        e = std::max(e, std::abs(x(1).imag()));
        e = std::max(e, std::abs(x(4).imag()));
        e = std::max(e, std::abs(x(3) - std::conj(x(2))));
        return e;
    }

    void validate(double tol = 1e-10) const {
        if (!x.allFinite()) throw ValidationError("Bloch state has non-finite entries");
        if (structure_error() >= tol) {
            throw ValidationError("Bloch state violates realness or conjugation symmetry");
        }
        for (int i : {0, 1, 4}) {
            if (std::abs(x(i).real()) > 1.0 + tol) throw ValidationError("Bloch component outside [-1, 1]");
        }
    }
};

/// dx/dt = A x + L for the population/coherence block.
struct ReducedSystem {
    Matrix5c a = Matrix5c::Zero();
    Vector5c l = Vector5c::Zero();
};

inline ReducedSystem build_reduced_system(const SystemParams& p) {
    const Couplings c = couplings(p);
    const double k1 = kappa(p.gamma1, p.n_photon);
    const double k2 = kappa(p.gamma2, p.n_photon);
    const Complex t = c.t();
    const Complex tc = std::conj(t);
    const Complex i(0.0, 1.0);
    const double g = c.big_gamma;
    const double kbar = 0.5 * (k1 + k2);

    ReducedSystem s;
    // clang-format off
    s.a << -k1,           0.0,           -2.0 * tc,      -2.0 * t,      0.0,
           0.0,           -k2,           -2.0 * t,       -2.0 * tc,     0.0,
           t / 2.0,       tc / 2.0,      -kbar - i * p.delta, 0.0,      g,
           tc / 2.0,      t / 2.0,       0.0,      -kbar + i * p.delta, g,
           -2.0 * p.gamma2, -2.0 * p.gamma1, 4.0 * g,   4.0 * g,       -k1 - k2;
    // clang-format on
    s.l << -2.0 * p.gamma1, -2.0 * p.gamma2, 0.0, 0.0, 0.0;
    return s;
}

/// Both molecules in their ground states.
inline BlochState initial_state_ground() {
    BlochState s;
    s.x << -1.0, -1.0, 0.0, 0.0, 1.0;
    return s;
}

inline ObservableSet observables_from_bloch(const BlochState& s, const Couplings& c) {
    ObservableSet o;
    o.coherence = s.x(2);
    o.current = 2.0 * c.big_omega * s.x(2).imag();
    o.pop1 = 0.5 * (1.0 + s.x(0).real());
    o.pop2 = 0.5 * (1.0 + s.x(1).real());
    o.zz = s.x(4).real();
    return o;
}

/// The four uncoupled groups of the fifteen-variable system.
enum class Subsystem : int {
    double_coherence = 0,  ///< (i)   s1-s2-, s1+s2+
    lowering = 1,          ///< (ii)  s1-, s2-, s1-s2z, s1zs2-
    raising = 2,           ///< (iii) s1+, s2+, s1+s2z, s1zs2+
    exchange = 3,          ///< (iv)  s1z, s2z, s2+s1-, s1+s2-, s1zs2z
};

namespace bloch_detail {

enum class Site { minus, plus, z, id };

struct QEntry {
    std::string_view name;
    Site first;
    Site second;
    Subsystem group;
};

// Order of the expectation-value vector Q.
inline constexpr std::array<QEntry, 15> kQ = {{
    {"s1-", Site::minus, Site::id, Subsystem::lowering},
    {"s1+", Site::plus, Site::id, Subsystem::raising},
    {"s1z", Site::z, Site::id, Subsystem::exchange},
    {"s2-", Site::id, Site::minus, Subsystem::lowering},
    {"s2+", Site::id, Site::plus, Subsystem::raising},
    {"s2z", Site::id, Site::z, Subsystem::exchange},
    {"s1-s2-", Site::minus, Site::minus, Subsystem::double_coherence},
    {"s1-s2+", Site::minus, Site::plus, Subsystem::exchange},
    {"s1-s2z", Site::minus, Site::z, Subsystem::lowering},
    {"s1+s2-", Site::plus, Site::minus, Subsystem::exchange},
    {"s1+s2+", Site::plus, Site::plus, Subsystem::double_coherence},
    {"s1+s2z", Site::plus, Site::z, Subsystem::raising},
    {"s1zs2-", Site::z, Site::minus, Subsystem::lowering},
    {"s1zs2+", Site::z, Site::plus, Subsystem::raising},
    {"s1zs2z", Site::z, Site::z, Subsystem::exchange},
}};

// Positions in Q of the reduced vector x.
inline constexpr std::array<int, 5> kReducedIndex = {2, 5, 7, 9, 14};

inline Matrix2c site_operator(Site s) {
    switch (s) {
        case Site::minus: return ops::lowering2();
        case Site::plus: return ops::lowering2().adjoint();
        case Site::z: return ops::pauli_z2();
        case Site::id: return Matrix2c::Identity();
    }
    return Matrix2c::Identity();
}

inline Matrix4c q_operator(const QEntry& q) {
    return ops::embed(site_operator(q.first), ops::Molecule::first) *
           ops::embed(site_operator(q.second), ops::Molecule::second);
}

}  // namespace bloch_detail

struct FullBlochSystem {
    Matrix15c m = Matrix15c::Zero();
    Vector15c b = Vector15c::Zero();
    std::array<Subsystem, 15> partition{};

    [[nodiscard]] std::array<int, 4> block_sizes() const {
        std::array<int, 4> sizes{};
        for (Subsystem s : partition) ++sizes[static_cast<int>(s)];
        return sizes;
    }

    /// Largest |m_ij| linking variables of different subsystems.
    [[nodiscard]] double off_block_magnitude() const {
        double worst = 0.0;
        for (int i = 0; i < 15; ++i)
            for (int j = 0; j < 15; ++j)
                if (partition[i] != partition[j]) worst = std::max(worst, std::abs(m(i, j)));
        return worst;
    }

    /// The exchange block in the ordering of ReducedSystem.
    [[nodiscard]] ReducedSystem exchange_block() const {
        ReducedSystem r;
        for (int i = 0; i < 5; ++i) {
            const int qi = bloch_detail::kReducedIndex[i];
            r.l(i) = b(qi);
            for (int j = 0; j < 5; ++j) r.a(i, j) = m(qi, bloch_detail::kReducedIndex[j]);
        }
        return r;
    }

    [[nodiscard]] static std::string_view variable_name(int i) { return bloch_detail::kQ.at(i).name; }
};

/// Derives d<Q_j>/dt = Tr(L^dagger(Q_j) rho) from the generator and expands
/// L^dagger(Q_j) in the Hilbert-Schmidt orthogonal basis {1, Q_1..Q_15}.
inline FullBlochSystem build_full_bloch_system(const SystemParams& p) {
    using bloch_detail::kQ;
    const Generator gen = build_generator(p);

    // <O> = Tr(O rho) = vec(O^T) . vec(rho); the time derivative is the row
    // vec(O^T)^T S, i.e. the functional of the operator X with vec(X^T) = S^T vec(O^T).
    auto heisenberg = [&](const Matrix4c& o) -> Matrix4c {
        const Vector16c w = gen.superop.transpose() * ops::vec(o.transpose());
        return ops::unvec(w).transpose();
    };
    // Coefficient of basis operator B in X: Tr(B^dagger X) / Tr(B^dagger B).
    auto project = [](const Matrix4c& basis, const Matrix4c& x) -> Complex {
        return (basis.adjoint() * x).trace() / (basis.adjoint() * basis).trace();
    };

    std::array<Matrix4c, 15> q;
    for (int j = 0; j < 15; ++j) q[j] = bloch_detail::q_operator(kQ[j]);

    FullBlochSystem sys;
    for (int j = 0; j < 15; ++j) {
        sys.partition[j] = kQ[j].group;
        const Matrix4c x = heisenberg(q[j]);
        sys.b(j) = project(ops::identity(), x);
        Matrix4c rebuilt = sys.b(j) * ops::identity();
        for (int k = 0; k < 15; ++k) {
            sys.m(j, k) = project(q[k], x);
            rebuilt += sys.m(j, k) * q[k];
        }
        const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
        if ((rebuilt - x).cwiseAbs().maxCoeff() > 1e-12 * scale) {
            throw ConsistencyError("Heisenberg-picture operator not spanned by the Q basis");
        }
    }

    const double scale = std::max(1.0, sys.m.cwiseAbs().maxCoeff());
    if (sys.off_block_magnitude() > 1e-13 * scale) {
        throw ConsistencyError("fifteen-variable system is not block diagonal under its partition");
    }
    for (int j = 0; j < 15; ++j) {
        if (sys.partition[j] != Subsystem::exchange && std::abs(sys.b(j)) > 1e-13 * scale) {
            throw ConsistencyError("drive term outside the exchange subsystem");
        }
    }
    return sys;
}

}  // namespace dimer
