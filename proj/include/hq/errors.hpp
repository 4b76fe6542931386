#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hq {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input: non-finite values, out-of-range indices, bad parameters.
struct InvalidInputError : Error {
    using Error::Error;
};

/// An argument left the Garding cone required by the operation. Callers must
/// not silence this: loss of admissibility means loss of ellipticity.
struct AdmissibilityError : Error {
    using Error::Error;
};

/// An iterative numerical procedure failed to meet its contract.
struct NumericalError : Error {
    using Error::Error;
};

/// Linear solve did not meet the relative-residual contract.
struct LinearSolverError : NumericalError {
    using NumericalError::NumericalError;
};

/// Expression-language syntax or identifier error, with byte offset.
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t byte_offset)
        : Error(msg + " (at offset " + std::to_string(byte_offset) + ")"),
          offset(byte_offset) {}
    std::size_t offset;
};

/// Expression evaluation hit a domain fault (log/sqrt of a negative number,
/// division by zero, non-finite result); offset points at the faulting node.
struct EvalDomainError : Error {
    EvalDomainError(const std::string& msg, std::size_t byte_offset)
        : Error(msg + " (at offset " + std::to_string(byte_offset) + ")"),
          offset(byte_offset) {}
    std::size_t offset;
};

/// Problem-configuration error (bad key, violated constraint, unreadable file).
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace hq
