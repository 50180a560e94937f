#pragma once

#include <stdexcept>
#include <string>

namespace hcube {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument is outside the domain of the operation (bad index, wrong size).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// The input violates a hypothesis of the operation (not a matching,
/// overlapping M and F, too many faults, even distance, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The two-path operation was asked to pin xy in the one configuration
/// where no such pair of spanning paths exists.
class ExceptionalCaseError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// Something that is guaranteed to exist was not found. Always a bug.
class InternalInvariantError : public Error {
public:
    using Error::Error;
};

/// The search ran out of nodes before reaching a verdict.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

/// Operation is not provided for these parameters.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// The recomputed exception catalog disagrees with the expected counts
/// or with a previously exported copy.
class CatalogMismatch : public Error {
public:
    using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace hcube
