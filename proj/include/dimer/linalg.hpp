#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "dimer/compensated.hpp"
#include "dimer/errors.hpp"

namespace dimer {

/// Systems whose 2-norm condition number exceeds this are treated as singular.
inline constexpr double kDegeneracyCondition = 1e12;

/// Working precision of the matrix exponential. Observables such as
/// 2 Omega Im<s2+ s1-> multiply a tiny coherence by a rate of order 1e5, so
/// rounding errors of a double-precision exponential are visible in them.
using Extended = long double;

template <typename Scalar>
struct ExtendedScalar {
    using type = Extended;
};
template <typename Real>
struct ExtendedScalar<std::complex<Real>> {
    using type = std::complex<Extended>;
};

template <typename Derived>
using ExtendedMatrix = Eigen::Matrix<typename ExtendedScalar<typename Derived::Scalar>::type, Derived::RowsAtCompileTime,
                                     Derived::ColsAtCompileTime>;

/// Matrix exponential by Schur-Parlett. Unlike scaling and squaring, whose
/// error is of order eps ||A t|| in every entry, the Schur form keeps well
/// separated eigenvalue clusters apart, so a weakly excited fast mode is not
/// swamped by rounding from the strongly excited slow ones.
template <typename Derived>
typename Derived::PlainObject expm_schur(const Eigen::MatrixBase<Derived>& a) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    return a.matrixFunction(Eigen::internal::stem_function_exp<std::complex<Real>>);
}

/// Matrix exponential in extended precision.
template <typename Derived>
ExtendedMatrix<Derived> expm_extended(const Eigen::MatrixBase<Derived>& a) {
    using Target = typename ExtendedScalar<typename Derived::Scalar>::type;
    const ExtendedMatrix<Derived> ext = a.template cast<Target>();
    return expm_schur(ext);
}

/// Matrix exponential, evaluated in extended precision and rounded.
template <typename Derived>
typename Derived::PlainObject expm(const Eigen::MatrixBase<Derived>& a) {
    return expm_extended(a).template cast<typename Derived::Scalar>();
}

template <typename Derived>
double condition_number(const Eigen::MatrixBase<Derived>& a) {
    const Eigen::JacobiSVD<typename Derived::PlainObject> svd(a);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

template <typename Matrix, typename Vector>
struct RefinedSolution {
    Vector x;
    double scaled_residual = 0.0;  ///< |b - A x| / (|A| |x| + |b|), infinity norms
    int iterations = 0;
};

/// Solves A x = b by partial-pivot LU followed by iterative refinement with
/// residuals accumulated in double-double. Converges to a componentwise
/// accurate solution as long as cond(A) * eps < 1.
template <typename Matrix, typename Vector>
RefinedSolution<Matrix, Vector> refined_solve(const Matrix& a, const Vector& b, int max_iterations = 10) {
    const Eigen::PartialPivLU<Matrix> lu(a);
    RefinedSolution<Matrix, Vector> out;
    out.x = lu.solve(b);
    const Vector neg_b = -b;
    for (int it = 0; it < max_iterations; ++it) {
        // r = b - A x
        const Vector r = -accurate_residual(a, out.x, neg_b);
        const Vector dx = lu.solve(r);
        out.x += dx;
        out.iterations = it + 1;
        // Stop once every real and imaginary part has stopped moving.
        constexpr double eps = std::numeric_limits<double>::epsilon();
        bool converged = true;
        for (Eigen::Index i = 0; i < dx.size() && converged; ++i) {
            converged = std::abs(dx(i).real()) <= eps * std::abs(out.x(i).real()) &&
                        std::abs(dx(i).imag()) <= eps * std::abs(out.x(i).imag());
        }
        if (converged) break;
    }
    const Vector r = -accurate_residual(a, out.x, neg_b);
    const double scale = a.cwiseAbs().rowwise().sum().maxCoeff() * out.x.template lpNorm<Eigen::Infinity>() +
                         b.template lpNorm<Eigen::Infinity>();
    out.scaled_residual = scale > 0.0 ? r.template lpNorm<Eigen::Infinity>() / scale : 0.0;
    return out;
}

}  // namespace dimer
