#pragma once

#include <stdexcept>
#include <string>

namespace slimex {

// Bad user input: unknown ids, invalid pairings, malformed config.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Anything that goes wrong while stepping: NaN, positivity, solver failure.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace slimex
