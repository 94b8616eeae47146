#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace olab {

// Compact %g rendering for messages and labels.
inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class InvariantError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Raised when a hypothesis of an operation is not met. Carries the two
// compared quantities when the hypothesis is an inequality.
class PreconditionError : public Error {
public:
    PreconditionError(const std::string& what, double lhs = 0.0, double rhs = 0.0)
        : Error(what), lhs_(lhs), rhs_(rhs) {}
    double lhs() const noexcept { return lhs_; }
    double rhs() const noexcept { return rhs_; }

private:
    double lhs_;
    double rhs_;
};

}  // namespace olab
