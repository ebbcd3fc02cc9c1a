#pragma once

#include <stdexcept>
#include <string>

namespace monocube {

/// Raised for contract violations: bad dimensions, empty sets, out-of-range
/// parameters, malformed descriptions.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an iterative solver fails to reach its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace monocube
