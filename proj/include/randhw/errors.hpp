#pragma once

#include <stdexcept>
#include <string>

namespace rhw {

// Base class for all library errors so callers can catch everything in one go.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid numeric input (negative time, nonpositive strike, bad ordering, ...).
struct DomainError : Error {
    using Error::Error;
};

// Hankel moment matrix is not positive definite: the requested quadrature
// order exceeds what the moment sequence (or working precision) supports.
struct NotPositiveDefinite : Error {
    using Error::Error;
};

// Least-squares design matrix has deficient column rank (e.g. all abscissae equal).
struct RankDeficient : Error {
    using Error::Error;
};

struct NoBracket : Error {
    using Error::Error;
};

struct MaxIterations : Error {
    using Error::Error;
};

// Price outside no-arbitrage bounds, or no vol reproduces it within the bracket.
struct NoSolution : Error {
    using Error::Error;
};

struct CalibrationFailure : Error {
    using Error::Error;
};

// Lookup into a regression table (or similar container) for a key that was never built.
struct MissingEntry : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

} // namespace rhw
