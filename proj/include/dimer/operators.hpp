#pragma once

// Two-molecule operator algebra in the product basis
// {|g1 g2>, |e1 g2>, |g1 e2>, |e1 e2>}, i.e. index = i1 + 2 * i2 with
// i = 0 for the ground and 1 for the excited state.
//
// Superoperators act on column-major vectorized density matrices:
// vec(A X B) = (B^T kron A) vec(X).

#include <complex>

#include <Eigen/Dense>

namespace dimer {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix<Complex, 2, 2>;
using Matrix4c = Eigen::Matrix<Complex, 4, 4>;
using Vector16c = Eigen::Matrix<Complex, 16, 1>;
using Matrix16c = Eigen::Matrix<Complex, 16, 16>;

namespace ops {

enum class Molecule { first = 1, second = 2 };

inline Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
    Matrix4c out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return out;
}

inline Matrix16c kron(const Matrix4c& a, const Matrix4c& b) {
    Matrix16c out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
    return out;
}

/// Embeds a single-molecule operator. Molecule 1 is the fast index.
inline Matrix4c embed(const Matrix2c& op, Molecule m) {
    const Matrix2c id = Matrix2c::Identity();
    return m == Molecule::first ? kron(id, op) : kron(op, id);
}

inline Matrix2c lowering2() {
    Matrix2c s = Matrix2c::Zero();
    s(0, 1) = 1.0;  // |g><e|
    return s;
}

inline Matrix2c pauli_z2() {
    Matrix2c s = Matrix2c::Zero();
    s(0, 0) = -1.0;
    s(1, 1) = 1.0;  // |e><e| - |g><g|
    return s;
}

inline Matrix4c lowering(Molecule m) { return embed(lowering2(), m); }
inline Matrix4c raising(Molecule m) { return embed(lowering2().adjoint(), m); }
inline Matrix4c pauli_z(Molecule m) { return embed(pauli_z2(), m); }
inline Matrix4c identity() { return Matrix4c::Identity(); }

/// Column-major vectorization.
inline Vector16c vec(const Matrix4c& x) {
    Vector16c v;
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) v(4 * j + i) = x(i, j);
    return v;
}

inline Matrix4c unvec(const Vector16c& v) {
    Matrix4c x;
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) x(i, j) = v(4 * j + i);
    return x;
}

/// Superoperator of X -> A X.
inline Matrix16c left(const Matrix4c& a) { return kron(identity(), a); }

/// Superoperator of X -> X B.
inline Matrix16c right(const Matrix4c& b) { return kron(Matrix4c(b.transpose()), identity()); }

/// Superoperator of X -> [A, X].
inline Matrix16c commutator(const Matrix4c& a) { return left(a) - right(a); }

/// Superoperator of X -> [J, X K] + [J X, K] = 2 J X K - K J X - X K J.
inline Matrix16c dissipator(const Matrix4c& j, const Matrix4c& k) {
    const Matrix4c kj = k * j;
    return 2.0 * left(j) * right(k) - left(kj) - right(kj);
}

}  // namespace ops
}  // namespace dimer
