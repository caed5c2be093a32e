#pragma once

#include <stdexcept>
#include <string>

namespace diffinc {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sign constraints on operator coefficients violated (e.g. a >= 0 or b <= 0).
struct InvalidSign : Error {
    using Error::Error;
};

/// Coefficient pair fails the positivity condition cos(pi/(T+1)) < -b/(2a).
struct AdmissibilityViolation : Error {
    using Error::Error;
};

/// Entries are not symmetric within bit equality.
struct NotSymmetric : Error {
    using Error::Error;
};

/// Symmetric factorization failed: the matrix is not positive definite.
struct NotPositiveDefinite : Error {
    using Error::Error;
};

/// Index or argument outside its documented range.
struct OutOfRange : Error {
    using Error::Error;
};

/// Vector length does not match the operator order.
struct DimensionMismatch : Error {
    using Error::Error;
};

/// Iterative eigenvalue sweep hit its cap without meeting the off-diagonal target.
struct ConvergenceFailure : Error {
    using Error::Error;
};

/// An operation needed a declared growth bound that the nonlinearity does not carry.
struct UndeclaredAsymptotics : Error {
    using Error::Error;
};

/// Sampling probe contradicts a declared growth bound.
struct InconsistentDeclaration : Error {
    using Error::Error;
};

/// A computation requiring verified hypotheses was invoked on a failing report.
struct HypothesisNotSatisfied : Error {
    using Error::Error;
};

/// The potential is nonpositive where a positive value is required.
struct NonpositivePotential : Error {
    using Error::Error;
};

/// Exhaustive lattice search requested beyond its supported order.
struct TooLarge : Error {
    using Error::Error;
};

/// Connecting path relaxed into a single basin: no separating barrier found.
struct PathCollapse : Error {
    using Error::Error;
};

/// Input file is not syntactically valid.
struct ParseError : Error {
    using Error::Error;
};

/// Input parsed but violates a semantic constraint.
struct ValidationError : Error {
    using Error::Error;
};

/// Closed-form cross-check disagreed with the generic computation; indicates a bug.
struct InternalError : Error {
    using Error::Error;
};

} // namespace diffinc
