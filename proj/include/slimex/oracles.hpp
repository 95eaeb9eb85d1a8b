#pragma once

#include <string>
#include <utility>

#include "slimex/state.hpp"

namespace slimex {

// Linear transport of a diffusing front; t is elapsed time, the profile is
// shifted in time by t0 so that the initial state is smooth.
struct Test1Params {
    double u = 0.1, alpha = 1e-3, x0 = -0.25, t0 = 1e-2;
};
double exact_test1(double x, double t, const Test1Params& p = {});

// Gaussian carried by u = k0 x.
double exact_test2(double x, double t, double k0 = 0.2);

// Separable solution of q_t - x q_x = alpha q_xx.
double exact_test3(double x, double t, double alpha = 0.1);

// Steady flow with u = 1 + a cos(pi x / 5) and h u^2 + g h^2 / 2 = -c.
struct SteadySWE {
    double h, u;
};
SteadySWE steady_swe(double x, double a = 5.0, double c = -1.0, double g = kGravity);

struct RiemannIC {
    std::string name;
    double hL, uL, hR, uR;
    double xd = 0.0;
    double t_final = 0.0;
    double x_left = -10.0, x_right = 10.0;
};

struct RiemannStar {
    double h, u;
    int iterations;
};

// Star state of the wet-bed shallow water Riemann problem.
RiemannStar swe_riemann_star(const RiemannIC& ic, double g = kGravity, double tol = 1e-12);

struct HU {
    double h, u;
};
HU swe_exact_riemann(const RiemannIC& ic, double x, double t, double g = kGravity);

// Inviscid Burgers with flux h^2 / 2.
double burgers_exact_riemann(double hL, double hR, double x, double t, double xd = 0.0);

// Reference for h_t + (h^2/2)_x = (h^2)_xx / 2 on a periodic grid: second-order
// finite differences, Crank-Nicolson in time, Newton with a cyclic tridiagonal solve.
ScalarField viscous_burgers_reference(const ScalarField& h0, double t_final, int n_steps);

struct Diagnostics {
    double mass, kinetic, potential, total_energy, cfl;
};
Diagnostics diagnostics(const SWEState& s, double dt, double g = kGravity);

double max_wave_speed(const SWEState& s, double g = kGravity);

}  // namespace slimex
