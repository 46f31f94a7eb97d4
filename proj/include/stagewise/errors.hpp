#pragma once

#include <stdexcept>
#include <string>

namespace stagewise {

// Base class for every error raised by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input structure: missing columns, unparsable fields.
struct SchemaError : Error {
    using Error::Error;
};

// Structurally valid input violating a data invariant: non-monotone time,
// non-contiguous cycle indices, too-few samples, missing values.
struct IntegrityError : Error {
    using Error::Error;
};

// Caller violated an operation precondition (bad flag value, empty input).
struct UsageError : Error {
    using Error::Error;
};

// Matrix/vector shape mismatch.
struct DimensionError : Error {
    using Error::Error;
};

// Input carries no usable signal (constant series, too short to analyze).
struct DegenerateInputError : Error {
    using Error::Error;
};

// A matrix required to be invertible / positive definite is not.
struct SingularityError : Error {
    using Error::Error;
};

// Numeric argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

// The analysis cannot proceed on this data (e.g. no stationary subspace
// exists at any source count).
struct PipelineError : Error {
    using Error::Error;
};

} // namespace stagewise
