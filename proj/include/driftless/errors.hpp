#pragma once

#include <stdexcept>
#include <string>

namespace driftless {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes of vectors/matrices do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A scalar argument violates an operation precondition (negative dt, a < 0, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of a function (Y_n at x <= 0).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Argument inside the domain but outside the supported evaluation window.
class RangeError : public Error {
public:
    using Error::Error;
};

/// The closed form is parametrized by theta0 != 0; theta0 == 0 has its own solution.
class DegenerateAttitudeError : public Error {
public:
    using Error::Error;
};

/// Analysis could not reach a verdict from the data it was given.
class InconclusiveError : public Error {
public:
    using Error::Error;
};

}  // namespace driftless
