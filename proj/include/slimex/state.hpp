#pragma once

#include "slimex/grid.hpp"

namespace slimex {

inline constexpr double kGravity = 9.81;

// Depth h and momentum V = h u on a shared grid.
struct SWEState {
    ScalarField h;
    ScalarField V;

    ScalarField velocity() const;
};

}  // namespace slimex
