#pragma once

#include <stdexcept>
#include <string>

namespace geotrack {

/// Base for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition was violated by the caller (dimension mismatch,
/// nonpositive step size, tangent vector based at the wrong point, ...).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Input left the mathematical domain of an operation (matrix not positive
/// definite, step size outside the admissible interval, rho >= 1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration: inconsistent constants, schedule prerequisites
/// violated, unknown keys or values.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A doubling-schedule period could not be constructed; carries the period index.
class ScheduleError : public ConfigError {
public:
    ScheduleError(int period_exponent, const std::string& what)
        : ConfigError("period m=" + std::to_string(period_exponent) + ": " + what),
          period_exponent_(period_exponent) {}
    int period_exponent() const { return period_exponent_; }

private:
    int period_exponent_;
};

/// An iterative solver or calibration loop failed to converge.
class SolverError : public Error {
public:
    using Error::Error;
};

/// Malformed input data (CSV parsing and similar).
class DataError : public Error {
public:
    using Error::Error;
};

/// Filesystem output failure.
class IoError : public Error {
public:
    using Error::Error;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw ContractViolation(message);
}

} // namespace geotrack
