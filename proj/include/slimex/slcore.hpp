#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "slimex/grid.hpp"
#include "slimex/tableaux.hpp"

namespace slimex {

// Velocity u(x, t) for trajectory integration. Either a closed form (with
// optional analytic derivatives) or a cell field frozen in time and sampled
// by spline.
class VelocitySampler {
public:
    using Fn = std::function<double(double, double)>;

    static VelocitySampler analytic(Fn u, Fn ux = nullptr, Fn uxx = nullptr);
    static VelocitySampler discrete(const ScalarField& u);
    static VelocitySampler constant(double c);

    double u(double x, double t = 0.0) const;
    double ux(double x, double t = 0.0) const;
    double uxx(double x, double t = 0.0) const;

private:
    Fn u_, ux_, uxx_;
    std::shared_ptr<CubicSpline> spline_;
    double scale_ = 1.0;  // length used for numerical derivatives
};

struct FeetSet {
    Grid1D grid;
    std::vector<double> feet;
    double dt_L = 0.0;
};

// Explicit-tableau stages of dx/dt = -u from every cell centre over dt_L.
// hl[j][i] is the Lagrangian flux -u(x_E^(j)) for cell i.
struct TrajectoryStages {
    std::vector<std::vector<double>> hl;
    std::vector<double> foot;  // x + dt_L sum_j b_j hl[j]
};

TrajectoryStages rk_stages(const ButcherPair& tb, const Grid1D& g, double dt_L, const VelocitySampler& u,
                           double t = 0.0);

FeetSet rk_feet(const ButcherPair& tb, const Grid1D& g, double dt_L, const VelocitySampler& u, double t = 0.0);
FeetSet taylor_feet(int order, const Grid1D& g, double dt_L, const VelocitySampler& u, double t = 0.0);

ScalarField sl_apply(const ScalarField& q, const FeetSet& feet);

// The operator L(q, dt_L, u): explicit-RK feet and spline interpolation.
ScalarField sl_transport(const ScalarField& q, const ButcherPair& tb, double dt_L, const VelocitySampler& u,
                         double t = 0.0);

// Transport with a prescribed per-cell Lagrangian flux: q evaluated at x + tau * hl(x).
ScalarField sl_shift(const ScalarField& q, double tau, const std::vector<double>& hl);

double closure_residual(const ButcherPair& tb, const Grid1D& g, double dt_L, const VelocitySampler& u,
                        const ScalarField& q);

// Wraps a coordinate into the periodic domain; no-op for bounded grids.
double wrap(const Grid1D& g, double x);

}  // namespace slimex
