#pragma once

#include <stdexcept>
#include <string>

namespace singlet {

// Base class for all library errors so callers can catch one type.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Resource guard tripped (sector index or basis size beyond the hard cap).
struct CapacityError : Error {
    using Error::Error;
};

// Operands live in different photon-number sectors.
struct DimensionError : Error {
    using Error::Error;
};

// Filter removed every component inside the truncation range.
struct DegenerateFilterError : Error {
    using Error::Error;
};

// Expectation value requested for an empty (all-filtered) sector.
struct UndefinedVisibilityError : Error {
    using Error::Error;
};

// Objective is flat; no angle optimum exists.
struct NoOptimumError : Error {
    using Error::Error;
};

// Invalid parameter combination (CLI or library level).
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace singlet
