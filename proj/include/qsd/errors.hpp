#pragma once

#include <stdexcept>

namespace qsd {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- input / structural validation (CLI exit code 2) ---------------------

struct ValidationError : Error {
    using Error::Error;
};
struct RowSumError : ValidationError {
    using ValidationError::ValidationError;
};
struct NegativeEntry : ValidationError {
    using ValidationError::ValidationError;
};
struct NotIrreducible : ValidationError {
    using ValidationError::ValidationError;
};
struct NotAperiodic : ValidationError {
    using ValidationError::ValidationError;
};
struct ParamOutOfRange : ValidationError {
    using ValidationError::ValidationError;
};
struct UnsupportedDimension : ValidationError {
    using ValidationError::ValidationError;
};

// --- method preconditions / numerical failures (CLI exit code 3) ---------

struct PreconditionError : Error {
    using Error::Error;
};
struct NotReversible : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct NonPositiveSpectrum : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct EigensolverFailure : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct ConvergenceFailure : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct NonPositiveEll : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct WindowTooShort : PreconditionError {
    using PreconditionError::PreconditionError;
};

// --- degenerate inputs (CLI exit code 4) ----------------------------------

struct DegenerateStart : Error {
    using Error::Error;
};
// The starting distribution already equals pi: no dominant coordinate exists.
struct StationaryStart : DegenerateStart {
    using DegenerateStart::DegenerateStart;
};
// Separation distance of the input is already zero.
struct AlreadyStationary : DegenerateStart {
    using DegenerateStart::DegenerateStart;
};

}  // namespace qsd
