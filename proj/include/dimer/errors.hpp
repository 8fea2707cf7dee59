#pragma once

#include <stdexcept>
#include <string>

namespace dimer {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid physical input (non-positive rate, unrealizable geometry, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Evaluation at a point where the quantity diverges (Omega at xi = 0).
class SingularityError : public Error {
public:
    using Error::Error;
};

/// Singular or near-singular linear system; the steady state is not unique.
class DegeneracyError : public Error {
public:
    using Error::Error;
};

/// A generator failed an internal structural check. Indicates a bug.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Adaptive integration could not make progress.
class StiffnessError : public Error {
public:
    using Error::Error;
};

/// Not enough signal structure to fit an oscillation.
class EstimationError : public Error {
public:
    using Error::Error;
};

/// A state violates its invariants (trace, hermiticity, positivity, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace dimer
