#pragma once

#include <stdexcept>
#include <string>

namespace cocite {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad input data: malformed rows, unknown ids, empty sources.
class DataError : public Error {
public:
    using Error::Error;
};

// Malformed ingestion input; carries the 1-based line number when known.
class IngestError : public DataError {
public:
    IngestError(const std::string& what, long line)
        : DataError(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

class NotFoundError : public DataError {
public:
    using DataError::DataError;
};

// Argument outside an operation's mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// Numerical failure: non-convergence, bracket failure, non-identifiable sample.
class NumericalError : public Error {
public:
    using Error::Error;
};

class NonIdentifiableError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace cocite
