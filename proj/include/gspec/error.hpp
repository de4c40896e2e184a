#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gspec {

// Base class for every error raised by the library. Callers that only need
// "something went wrong" can catch this; the CLI maps subclasses onto exit
// codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (x outside [0,1],
// non-positive eigenvalue, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class UnsupportedDegreeError : public Error {
public:
    using Error::Error;
};

// Non-finite value met during numerical work.
class NumericError : public Error {
public:
    using Error::Error;
};

// Sample or matrix size below the minimum an operation accepts.
class SizeError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

// A graphon evaluated outside [0,1] while in strict range mode.
class GraphonRangeError : public Error {
public:
    using Error::Error;
};

// Kernel fails a structural requirement of the limit theorems.
class InvalidKernelError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

// Experiment configuration rejected before any work starts.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Failure inside one Monte Carlo replication; the message carries the
// replication index and the original error text.
class ReplicationError : public Error {
public:
    ReplicationError(std::size_t replication, const std::string& what)
        : Error("replication " + std::to_string(replication) + ": " + what), replication_(replication) {}

    std::size_t replication() const noexcept { return replication_; }

private:
    std::size_t replication_;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_residual)
        : Error(what), best_residual_(best_residual) {}

    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

}  // namespace gspec
