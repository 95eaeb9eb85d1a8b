#pragma once

#include <array>
#include <vector>

#include "slimex/grid.hpp"

namespace slimex {

// Parabola c0 + c1 xi + c2 xi^2 in xi = (x - x_i)/dx.
struct CellPoly {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
    double operator()(double xi) const { return c0 + xi * (c1 + xi * c2); }
    double average() const { return c0 + c2 / 12.0; }
};

struct CwenoParams {
    double w_central = 0.5, w_left = 0.25, w_right = 0.25;
    double eps = 1e-6;
    double eps_dx2 = 0.0;  // adds eps_dx2 * dx^2 * max|f|^2, which keeps order 3 at critical points
    int power = 2;
};

// Piecewise-parabolic CWENO3 reconstruction; values are read as cell averages.
struct Reconstruction {
    Grid1D grid;
    std::vector<CellPoly> polys;
    std::vector<std::array<double, 3>> weights;  // (central, left, right)
    std::vector<double> prefix;                  // prefix[k] = integral over cells < k

    double value_left(int i) const;
    double value_right(int i) const;
    double eval(double x) const;
    double deriv(int i) const { return polys.at(i).c1 / grid.dx; }
    double deriv2(int i) const { return 2.0 * polys.at(i).c2 / (grid.dx * grid.dx); }
    double integrate(double a, double b) const;

private:
    double antideriv(double x, int* cell) const;
};

Reconstruction cweno_reconstruct(const ScalarField& f, const CwenoParams& prm = {});

// Same polynomials with nonlinear weights taken from an earlier reconstruction,
// so the result is linear in f.
Reconstruction cweno_reconstruct_frozen(const ScalarField& f, const std::vector<std::array<double, 3>>& weights,
                                        const CwenoParams& prm = {});

// Cell averages of the smooth function through point values: q + (q[i+1] - 2 q[i] + q[i-1]) / 24.
ScalarField point_to_average(const ScalarField& f);

double poly_value_left(const Reconstruction& r, int i);
double poly_value_right(const Reconstruction& r, int i);
double poly_integrate(const Reconstruction& r, double a, double b);

}  // namespace slimex
