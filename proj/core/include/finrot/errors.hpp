#pragma once

#include <stdexcept>
#include <string>

namespace finrot {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument values: out-of-range labels, parity violations,
/// mismatched representations.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Failure to read or write a file.
class IoError : public Error {
public:
    using Error::Error;
};

/// A file was read but its contents are not in the expected format.
class FormatError : public Error {
public:
    using Error::Error;
};

/// An internal numerical invariant was violated (signals a bug, not bad input).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

}  // namespace finrot
