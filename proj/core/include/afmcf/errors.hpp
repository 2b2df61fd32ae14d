#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace afmcf {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Reference data violates the |lambda| < 1 admissibility condition.
/// Carries the offending maximum and the grid location where it occurs.
class AdmissibilityError : public Error {
public:
    AdmissibilityError(const std::string& what, double max_lambda, int i, int j)
        : Error(what), max_lambda(max_lambda), i(i), j(j) {}

    double max_lambda;
    int i;
    int j;
};

/// Iterative solver failed to reach the requested tolerance.
class SolverError : public Error {
public:
    SolverError(const std::string& what, std::vector<double> residual_history)
        : Error(what), residual_history(std::move(residual_history)) {}

    std::vector<double> residual_history;
};

/// I/O failure (missing file, bad header, truncated payload, non-finite data).
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

/// Bad command line / config file input.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

} // namespace afmcf
