#pragma once

// Error-free transformations and a minimal double-double type.
//
// Used wherever the result of a short sum or dot product must be correct to
// roughly twice the working precision: residuals for iterative refinement and
// the closed-form steady-state polynomials, whose terms cancel strongly when
// the coherent exchange rate dwarfs the decay rates.

#include <cmath>
#include <complex>

#include <Eigen/Core>

namespace dimer {

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DoubleDouble() = default;
    constexpr DoubleDouble(double v) : hi(v) {}  // NOLINT(google-explicit-constructor)
    constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

    [[nodiscard]] double value() const { return hi + lo; }
};

/// Knuth's TwoSum: s + e == a + b exactly.
inline DoubleDouble two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double e = (a - (s - bb)) + (b - bb);
    return {s, e};
}

inline DoubleDouble fast_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

/// p + e == a * b exactly (requires a correctly rounded fma).
inline DoubleDouble two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b) {
    DoubleDouble s = two_sum(a.hi, b.hi);
    DoubleDouble t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = fast_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return fast_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(const DoubleDouble& a) { return {-a.hi, -a.lo}; }

inline DoubleDouble operator-(const DoubleDouble& a, const DoubleDouble& b) { return a + (-b); }

inline DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b) {
    DoubleDouble p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return fast_two_sum(p.hi, p.lo);
}

inline DoubleDouble& operator+=(DoubleDouble& a, const DoubleDouble& b) { return a = a + b; }
inline DoubleDouble& operator-=(DoubleDouble& a, const DoubleDouble& b) { return a = a - b; }
inline DoubleDouble& operator*=(DoubleDouble& a, const DoubleDouble& b) { return a = a * b; }

/// Complex accumulator with double-double real and imaginary parts.
struct ComplexAccumulator {
    DoubleDouble re;
    DoubleDouble im;

    void add(std::complex<double> v) {
        re += v.real();
        im += v.imag();
    }

    /// Adds a * b with both partial products formed exactly.
    void add_product(std::complex<double> a, std::complex<double> b) {
        re += two_prod(a.real(), b.real());
        re -= two_prod(a.imag(), b.imag());
        im += two_prod(a.real(), b.imag());
        im += two_prod(a.imag(), b.real());
    }

    [[nodiscard]] std::complex<double> value() const { return {re.value(), im.value()}; }
};

/// r = b + A x, evaluated in double-double and rounded once.
template <typename MatrixType, typename VectorType>
VectorType accurate_residual(const MatrixType& a, const VectorType& x, const VectorType& b) {
    VectorType r(b.size());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        ComplexAccumulator acc;
        acc.add(b(i));
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            acc.add_product(a(i, j), x(j));
        }
        r(i) = acc.value();
    }
    return r;
}

}  // namespace dimer
