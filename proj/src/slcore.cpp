#include "slimex/slcore.hpp"

#include <cmath>
#include <string>

#include "slimex/errors.hpp"

namespace slimex {

VelocitySampler VelocitySampler::analytic(Fn u, Fn ux, Fn uxx) {
    VelocitySampler s;
    s.u_ = std::move(u);
    s.ux_ = std::move(ux);
    s.uxx_ = std::move(uxx);
    return s;
}

VelocitySampler VelocitySampler::discrete(const ScalarField& u) {
    VelocitySampler s;
    s.spline_ = std::make_shared<CubicSpline>(u);
    return s;
}

VelocitySampler VelocitySampler::constant(double c) {
    return analytic([c](double, double) { return c; }, [](double, double) { return 0.0; },
                    [](double, double) { return 0.0; });
}

double VelocitySampler::u(double x, double t) const { return spline_ ? (*spline_)(x) : u_(x, t); }

double VelocitySampler::ux(double x, double t) const {
    if (spline_) return spline_->deriv(x);
    if (ux_) return ux_(x, t);
    const double h = 1e-5 * scale_;
    return (u_(x + h, t) - u_(x - h, t)) / (2 * h);
}

double VelocitySampler::uxx(double x, double t) const {
    if (spline_) return spline_->deriv2(x);
    if (uxx_) return uxx_(x, t);
    const double h = 1e-4 * scale_;
    return (u_(x + h, t) - 2 * u_(x, t) + u_(x - h, t)) / (h * h);
}

double wrap(const Grid1D& g, double x) {
    if (g.boundary != Boundary::Periodic) return x;
    const double L = g.length();
    double s = std::fmod(x - g.x_left, L);
    if (s < 0) s += L;
    return g.x_left + s;
}

TrajectoryStages rk_stages(const ButcherPair& tb, const Grid1D& g, double dt_L, const VelocitySampler& u,
                           double t) {
    const int n = g.n_cells, s = tb.s;
    TrajectoryStages out;
    out.hl.assign(s, std::vector<double>(n));
    out.foot.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x0 = g.x(i);
        for (int k = 0; k < s; ++k) {
            double xk = x0;
            for (int j = 0; j < k; ++j) xk += dt_L * tb.a_tilde[k][j] * out.hl[j][i];
            if (!std::isfinite(xk))
                throw NumericalError("non-finite trajectory position in cell " + std::to_string(i));
            out.hl[k][i] = -u.u(wrap(g, xk), t + tb.c_tilde[k] * dt_L);
        }
        double xf = x0;
        for (int k = 0; k < s; ++k) xf += dt_L * tb.b[k] * out.hl[k][i];
        if (!std::isfinite(xf)) throw NumericalError("non-finite foot in cell " + std::to_string(i));
        out.foot[i] = wrap(g, xf);
    }
    return out;
}

FeetSet rk_feet(const ButcherPair& tb, const Grid1D& g, double dt_L, const VelocitySampler& u, double t) {
    return {g, rk_stages(tb, g, dt_L, u, t).foot, dt_L};
}

FeetSet taylor_feet(int order, const Grid1D& g, double dt_L, const VelocitySampler& u, double t) {
    if (order < 1 || order > 3) throw ConfigError("taylor_feet supports orders 1 to 3");
    FeetSet out{g, std::vector<double>(g.n_cells), dt_L};
    for (int i = 0; i < g.n_cells; ++i) {
        const double x = g.x(i);
        const double v = u.u(x, t);
        double xf = x - v * dt_L;
        if (order >= 2) xf += 0.5 * dt_L * dt_L * v * u.ux(x, t);
        if (order >= 3) {
            const double vx = u.ux(x, t);
            xf -= dt_L * dt_L * dt_L / 6.0 * v * (vx * vx + v * u.uxx(x, t));
        }
        out.feet[i] = wrap(g, xf);
    }
    return out;
}

ScalarField sl_apply(const ScalarField& q, const FeetSet& feet) {
    CubicSpline sp(q);
    ScalarField out(q.grid);
    for (int i = 0; i < q.size(); ++i) out.v[i] = sp(feet.feet[i]);
    return out;
}

ScalarField sl_transport(const ScalarField& q, const ButcherPair& tb, double dt_L, const VelocitySampler& u,
                         double t) {
    if (dt_L == 0.0) return q;
    return sl_apply(q, rk_feet(tb, q.grid, dt_L, u, t));
}

ScalarField sl_shift(const ScalarField& q, double tau, const std::vector<double>& hl) {
    if (tau == 0.0) return q;
    CubicSpline sp(q);
    ScalarField out(q.grid);
    for (int i = 0; i < q.size(); ++i) out.v[i] = sp(wrap(q.grid, q.grid.x(i) + tau * hl[i]));
    return out;
}

double closure_residual(const ButcherPair& tb, const Grid1D& /*g*/, double dt_L, const VelocitySampler& u,
                        const ScalarField& q) {
    const ScalarField there = sl_transport(q, tb, dt_L, u);
    const ScalarField back = sl_transport(there, tb, -dt_L, u);
    return norm_linf(q - back);
}

}  // namespace slimex
