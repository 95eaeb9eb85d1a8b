#include "slimex/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "slimex/errors.hpp"

namespace slimex {

ScalarField SWEState::velocity() const {
    ScalarField u(h.grid);
    for (int i = 0; i < h.size(); ++i) {
        if (!(h.v[i] > 1e-12)) throw NumericalError("non-positive depth in cell " + std::to_string(i));
        u.v[i] = V.v[i] / h.v[i];
    }
    return u;
}

double exact_test1(double x, double t, const Test1Params& p) {
    return 0.5 - 0.5 * std::erf((x - p.x0 - p.u * t) / std::sqrt(4.0 * p.alpha * (t + p.t0)));
}

double exact_test2(double x, double t, double k0) {
    const double y = x * std::exp(-k0 * t);
    return std::exp(-50.0 * y * y);
}

double exact_test3(double x, double t, double alpha) {
    const double g = -x - 0.5 * std::sqrt(2.0 * std::numbers::pi * alpha) * std::erf(x / std::sqrt(2.0 * alpha)) * x -
                     std::exp(-x * x / (2.0 * alpha)) * alpha;
    return std::exp(t) * g;
}

SteadySWE steady_swe(double x, double a, double c, double g) {
    const double u = 1.0 + a * std::cos(std::numbers::pi * x / 5.0);
    const double u2 = u * u;
    // Positive root of (g/2) h^2 + u^2 h + c = 0.
    const double h = (std::sqrt(u2 * u2 - 2.0 * g * c) - u2) / g;
    return {h, u};
}

namespace {

double depth_fn(double h, double hk, double g, double* df) {
    if (h > hk) {
        const double ge = std::sqrt(0.5 * g * (h + hk) / (h * hk));
        *df = ge - g * (h - hk) / (4.0 * h * h * ge);
        return (h - hk) * ge;
    }
    const double c = std::sqrt(g * h);
    *df = g / c;
    return 2.0 * (c - std::sqrt(g * hk));
}

}  // namespace

RiemannStar swe_riemann_star(const RiemannIC& ic, double g, double tol) {
    if (!(ic.hL > 0 && ic.hR > 0)) throw ConfigError("Riemann states need positive depth");
    const double cL = std::sqrt(g * ic.hL), cR = std::sqrt(g * ic.hR);
    const double du = ic.uR - ic.uL;
    if (du >= 2.0 * (cL + cR)) throw NumericalError("Riemann data generates a dry region");

    auto f = [&](double h, double* df) {
        double dl, dr;
        const double v = depth_fn(h, ic.hL, g, &dl) + depth_fn(h, ic.hR, g, &dr) + du;
        *df = dl + dr;
        return v;
    };

    double h = std::pow(0.5 * (cL + cR) - 0.25 * du, 2) / g;
    int it = 0;
    bool ok = false;
    for (; it < 50; ++it) {
        double df;
        const double fv = f(h, &df);
        double hn = h - fv / df;
        if (!(hn > 0) || !std::isfinite(hn)) break;
        const double change = std::abs(hn - h) / (0.5 * (hn + h));
        h = hn;
        if (change < tol) {
            ok = true;
            ++it;
            break;
        }
    }
    if (!ok) {
        // f is increasing in h; bracket and bisect.
        double lo = 1e-14, hi = std::max(ic.hL, ic.hR), df;
        while (f(hi, &df) < 0) hi *= 2;
        for (it = 0; it < 200 && (hi - lo) > tol * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (f(mid, &df) < 0 ? lo : hi) = mid;
        }
        h = 0.5 * (lo + hi);
    }
    double dl, dr;
    const double u = 0.5 * (ic.uL + ic.uR) + 0.5 * (depth_fn(h, ic.hR, g, &dr) - depth_fn(h, ic.hL, g, &dl));
    return {h, u, it};
}

HU swe_exact_riemann(const RiemannIC& ic, double x, double t, double g) {
    if (t <= 0) return x <= ic.xd ? HU{ic.hL, ic.uL} : HU{ic.hR, ic.uR};
    const RiemannStar st = swe_riemann_star(ic, g);
    const double S = (x - ic.xd) / t;
    const double cL = std::sqrt(g * ic.hL), cR = std::sqrt(g * ic.hR), cs = std::sqrt(g * st.h);
    if (S <= st.u) {
        if (st.h > ic.hL) {
            const double q = std::sqrt(0.5 * (st.h + ic.hL) * st.h / (ic.hL * ic.hL));
            return S < ic.uL - cL * q ? HU{ic.hL, ic.uL} : HU{st.h, st.u};
        }
        if (S < ic.uL - cL) return {ic.hL, ic.uL};
        if (S > st.u - cs) return {st.h, st.u};
        const double u = (ic.uL + 2 * cL + 2 * S) / 3.0;
        const double c = (ic.uL + 2 * cL - S) / 3.0;
        return {c * c / g, u};
    }
    if (st.h > ic.hR) {
        const double q = std::sqrt(0.5 * (st.h + ic.hR) * st.h / (ic.hR * ic.hR));
        return S > ic.uR + cR * q ? HU{ic.hR, ic.uR} : HU{st.h, st.u};
    }
    if (S > ic.uR + cR) return {ic.hR, ic.uR};
    if (S < st.u + cs) return {st.h, st.u};
    const double u = (ic.uR - 2 * cR + 2 * S) / 3.0;
    const double c = (-ic.uR + 2 * cR + S) / 3.0;
    return {c * c / g, u};
}

double burgers_exact_riemann(double hL, double hR, double x, double t, double xd) {
    if (t <= 0) return x <= xd ? hL : hR;
    const double xi = (x - xd) / t;
    if (hL > hR) return xi < 0.5 * (hL + hR) ? hL : hR;
    if (xi <= hL) return hL;
    if (xi >= hR) return hR;
    return xi;
}

namespace {

// Cyclic tridiagonal solve (a: sub, b: diag, c: super; a[0] and c[n-1] wrap) by Sherman-Morrison.
std::vector<double> solve_cyclic(std::vector<double> a, std::vector<double> b, std::vector<double> c,
                                 std::vector<double> r) {
    const int n = static_cast<int>(b.size());
    const double alpha = c[n - 1], beta = a[0];
    const double gam = -b[0];
    b[0] -= gam;
    b[n - 1] -= alpha * beta / gam;
    auto thomas = [&](std::vector<double> d) {
        std::vector<double> cp(n), x(n);
        double m = b[0];
        cp[0] = c[0] / m;
        d[0] /= m;
        for (int i = 1; i < n; ++i) {
            m = b[i] - a[i] * cp[i - 1];
            if (m == 0.0) throw NumericalError("singular tridiagonal system");
            cp[i] = c[i] / m;
            d[i] = (d[i] - a[i] * d[i - 1]) / m;
        }
        x[n - 1] = d[n - 1];
        for (int i = n - 2; i >= 0; --i) x[i] = d[i] - cp[i] * x[i + 1];
        return x;
    };
    std::vector<double> u(n, 0.0);
    u[0] = gam;
    u[n - 1] = alpha;
    const std::vector<double> x = thomas(std::move(r));
    const std::vector<double> z = thomas(u);
    const double f = (x[0] + beta * x[n - 1] / gam) / (1.0 + z[0] + beta * z[n - 1] / gam);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = x[i] - f * z[i];
    return out;
}

}  // namespace

ScalarField viscous_burgers_reference(const ScalarField& h0, double t_final, int n_steps) {
    const Grid1D& g = h0.grid;
    if (g.boundary != Boundary::Periodic) throw ConfigError("viscous Burgers reference needs a periodic grid");
    if (n_steps < 1) throw ConfigError("viscous Burgers reference needs at least one step");
    const int n = g.n_cells;
    const double dx = g.dx, dt = t_final / n_steps;
    auto L = [&](const std::vector<double>& h) {
        std::vector<double> f(n), out(n);
        for (int i = 0; i < n; ++i) {
            const double a = h[i], b = h[(i + 1) % n];
            f[i] = 0.25 * (a * a + b * b) - 0.5 * (b * b - a * a) / dx;  // flux at i + 1/2
        }
        for (int i = 0; i < n; ++i) out[i] = (f[i] - f[(i - 1 + n) % n]) / dx;
        return out;
    };
    std::vector<double> h = h0.v;
    for (int step = 0; step < n_steps; ++step) {
        const std::vector<double> Ln = L(h);
        std::vector<double> x = h;
        for (int it = 0; it < 50; ++it) {
            const std::vector<double> Lx = L(x);
            std::vector<double> r(n), a(n), b(n), c(n);
            double rn = 0.0;
            for (int i = 0; i < n; ++i) {
                r[i] = -(x[i] - h[i] + 0.5 * dt * (Lx[i] + Ln[i]));
                rn = std::max(rn, std::abs(r[i]));
                const double hm = x[(i - 1 + n) % n], h0i = x[i], hp = x[(i + 1) % n];
                a[i] = -0.5 * dt * (0.5 * hm + hm / dx) / dx;
                b[i] = 1.0 + dt * h0i / (dx * dx);
                c[i] = 0.5 * dt * (0.5 * hp - hp / dx) / dx;
            }
            if (rn < 1e-12) break;
            const std::vector<double> d = solve_cyclic(a, b, c, r);
            for (int i = 0; i < n; ++i) x[i] += d[i];
        }
        h = std::move(x);
    }
    return ScalarField(g, h);
}

double max_wave_speed(const SWEState& s, double g) {
    double m = 0.0;
    for (int i = 0; i < s.h.size(); ++i) {
        const double h = s.h.v[i];
        m = std::max(m, std::abs(s.V.v[i] / h) + std::sqrt(g * h));
    }
    return m;
}

Diagnostics diagnostics(const SWEState& s, double dt, double g) {
    Diagnostics d{};
    const double dx = s.h.grid.dx;
    for (int i = 0; i < s.h.size(); ++i) {
        const double h = s.h.v[i], V = s.V.v[i];
        d.mass += h;
        d.kinetic += 0.5 * V * V / h;
        d.potential += 0.5 * g * h * h;
    }
    d.mass *= dx;
    d.kinetic *= dx;
    d.potential *= dx;
    d.total_energy = d.kinetic + d.potential;
    d.cfl = dt * max_wave_speed(s, g) / dx;
    return d;
}

}  // namespace slimex
