#pragma once

#include <stdexcept>
#include <string>

namespace slratio {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (x outside [0, l], z <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid numerical parameter (grid too small, index out of the accurate range, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Malformed potential input. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// The adaptive integrator could not reach the requested end point.
class IntegrationFailure : public Error {
public:
    using Error::Error;
};

/// No positive bracket exists for the requested index: lambda_n <= 0 is likely.
class NegativeSpectrumSuspected : public Error {
public:
    NegativeSpectrumSuspected(int n, const std::string& what) : Error(what), index_(n) {}

    int index() const noexcept { return index_; }

private:
    int index_;
};

/// The potential does not satisfy the sign/shape hypothesis of a check.
class IneligiblePotential : public Error {
public:
    using Error::Error;
};

}  // namespace slratio
