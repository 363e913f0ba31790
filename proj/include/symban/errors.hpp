#pragma once

#include <stdexcept>
#include <string>

namespace symban {

// Base for all library errors so callers can catch one type.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid arguments / preconditions.
struct ArgumentError : Error {
    using Error::Error;
};

struct DimensionMismatch : ArgumentError {
    using ArgumentError::ArgumentError;
};

// Partition construction.
struct OverlapError : ArgumentError {
    using ArgumentError::ArgumentError;
};
struct CoverageError : ArgumentError {
    using ArgumentError::ArgumentError;
};
struct NotIntervalError : ArgumentError {
    using ArgumentError::ArgumentError;
};

// Enumeration guard.
struct TooLargeError : Error {
    using Error::Error;
};

// Lattice coarsening.
struct NoCoarseningError : Error {
    using Error::Error;
};

// Model selection / regression.
struct EmptyPool : ArgumentError {
    using ArgumentError::ArgumentError;
};
struct EmptyModelList : ArgumentError {
    using ArgumentError::ArgumentError;
};
struct EmptyArmSet : ArgumentError {
    using ArgumentError::ArgumentError;
};

// Bandit phase configuration.
struct InvalidPhase : ArgumentError {
    using ArgumentError::ArgumentError;
};

// Environment generation.
struct InfeasibleSeparation : Error {
    using Error::Error;
};

// Harness.
struct ConfigError : Error {
    ConfigError(const std::string& field, const std::string& what)
        : Error("config error [" + field + "]: " + what), field(field) {}
    std::string field;
};
struct IoError : Error {
    using Error::Error;
};

}  // namespace symban
