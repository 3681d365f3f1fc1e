#pragma once

#include <stdexcept>
#include <string>

namespace fbtransfer {

// Bad user input (config files, CLI arguments, parameter ranges).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// API misuse or an upstream bug: preconditions between modules violated
// (mismatched grids, inconsistent gains, indefinite covariance).
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

// A numerical procedure failed to reach its tolerance.
struct NumericError : std::runtime_error {
    double achieved_tolerance;
    explicit NumericError(const std::string& what, double achieved = 0.0)
        : std::runtime_error(what), achieved_tolerance(achieved) {}
};

// A phase-space grid does not cover the state it is asked to hold.
struct CoverageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Trajectory integration diverged.
struct StabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Not enough data for a requested estimate.
struct StatisticsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fbtransfer
