#pragma once

#include "slimex/swe.hpp"

namespace slimex {

// Relaxation toward u = h / 2 with time scale epsilon. With froude_scaling the
// pressure weight becomes 1 / (2 epsilon), i.e. epsilon = Fr^2.
struct RelaxOptions {
    double epsilon = 1e-14;
    bool froude_scaling = false;

    // Grouped forms; none of them forms 1 / epsilon on its own.
    double gamma(double dt) const { return (epsilon + dt) / epsilon; }
    double inv_gamma(double dt) const { return epsilon / (epsilon + dt); }
    double dt_over_gamma_eps(double dt) const { return dt / (epsilon + dt); }
};

SweOptions relax_options(const RelaxOptions& r, SweOptions base = {});

SWEState slimexh_ap_step(const SWEState& s, double dt, const ButcherPair& tb, const RelaxOptions& r,
                         const SweOptions& base = {}, StepInfo* info = nullptr);
SWEState slimex_ap_step(const SWEState& s, double dt, const ButcherPair& tb, const RelaxOptions& r,
                        const SweOptions& base = {}, StepInfo* info = nullptr);
// Low-Froude relaxation system; needs froude_scaling and a stiffly accurate tableau.
SWEState low_froude_step(const SWEState& s, double dt, const ButcherPair& tb, const RelaxOptions& r,
                         const SweOptions& base = {}, StepInfo* info = nullptr);

// max |u - h / 2| over the cells.
double equilibrium_defect(const SWEState& s);

}  // namespace slimex
