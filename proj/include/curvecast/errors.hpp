#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace curvecast {

// Base for every error raised by the library. The CLI maps subclasses to
// exit codes, so keep the hierarchy flat and specific.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (x <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Caller broke a documented precondition (length mismatch, bad weight, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

// b1 == 0: the curve is flat at 100 and never reaches a target below it.
class FlatCurveError : public Error {
public:
    using Error::Error;
};

// Target accuracy at or above the asymptote.
class UnreachableTargetError : public Error {
public:
    using Error::Error;
};

// Every per-size mean sits at 100, so there is no deficit to fit.
class FlatDataError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

class BootstrapFailure : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace curvecast
