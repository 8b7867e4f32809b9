#pragma once

#include <stdexcept>
#include <string>

namespace mvinterp {

/// Base class for every failure raised by the library. The CLI maps these to
/// exit code 1 with a JSON error object.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* kind() const noexcept { return "error"; }
};

class DimensionError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "dimension_mismatch"; }
};

class InvalidArgument : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "invalid_argument"; }
};

class CardinalityError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "cardinality_cap_exceeded"; }
};

class CoverageError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "generating_nodes_too_short"; }
};

/// Raised when a node set is not (numerically) unisolvent. Carries the
/// pivot-ratio estimate that triggered the rejection.
class SingularSystemError : public Error {
public:
    SingularSystemError(const std::string& what, double condition_estimate)
        : Error(what), condition_estimate_(condition_estimate) {}
    const char* kind() const noexcept override { return "singular_system"; }
    double condition_estimate() const noexcept { return condition_estimate_; }

private:
    double condition_estimate_;
};

}  // namespace mvinterp
