#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace snumlab {

// Base class for every condition this library raises on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operands live in different model algebras (block layout or weights differ).
struct ShapeMismatchError : Error {
    using Error::Error;
};

// Scalar trace requested for an operator that is not trace class
// (an infinite-weight block carries a nonzero matrix).
struct InfiniteTraceError : Error {
    using Error::Error;
};

// Functional calculus asked for on an operand with an eigenvalue below the
// positivity tolerance.
struct NotPositiveError : Error {
    using Error::Error;
};

// The Jacobi eigensolver did not reach its off-diagonal threshold.
struct EigSolverError : Error {
    using Error::Error;
};

// Bad scalar argument: s <= 0, exponent p <= 1, and similar.
struct DomainError : Error {
    using Error::Error;
};

// The operation needs a tau-compact operand; singular value data cannot
// determine an operator whose distribution function is infinite at some
// positive threshold.
struct NonCompactError : Error {
    using Error::Error;
};

// An exhaustive oracle refused to run: the shape is beyond its size bound.
struct OracleSizeError : Error {
    using Error::Error;
};

// A complete flag cut cannot be realised: a fractional portion would fall on
// a non-diffuse block, or an interval endpoint is not an allocation boundary.
struct FlagError : Error {
    using Error::Error;
};

// An inverse or pseudo-inverse step met a (numerically) singular operand.
struct SingularOperandError : Error {
    using Error::Error;
};

// Factorisation precondition x x* <= lambda y y* fails; carries a witness
// direction along which the majorisation is violated.
struct MajorizationError : Error {
    int block = 0;
    double eigenvalue = 0.0;
    std::vector<std::complex<double>> witness;

    MajorizationError(const std::string& what, int block_index, double eig,
                      std::vector<std::complex<double>> direction)
        : Error(what), block(block_index), eigenvalue(eig), witness(std::move(direction)) {}
};

// A norm-equivalence check requires a strictly increasing symmetric norm.
struct NonStrictNormError : Error {
    using Error::Error;
};

// Input file or report syntax problem; message carries line/column.
struct ParseError : Error {
    using Error::Error;
};

}  // namespace snumlab
