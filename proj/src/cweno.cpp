#include "slimex/cweno.hpp"

#include <algorithm>
#include <cmath>

#include "slimex/errors.hpp"

namespace slimex {

namespace {

struct Candidates {
    double q0, sl, sr, p00, p01, p02;
};

Candidates candidates(const ScalarField& f, int i, const CwenoParams& prm) {
    const double qm = f.ghost(i - 1), q0 = f.v[i], qp = f.ghost(i + 1);
    const double sl = q0 - qm, sr = qp - q0;
    const double sc = 0.5 * (qp - qm);
    const double d2 = qp - 2 * q0 + qm;
    // Optimal parabola matching three averages; P0 removes the linear parts.
    const double opt0 = q0 - d2 / 24.0, opt1 = sc, opt2 = 0.5 * d2;
    return {q0,
            sl,
            sr,
            (opt0 - prm.w_left * q0 - prm.w_right * q0) / prm.w_central,
            (opt1 - prm.w_left * sl - prm.w_right * sr) / prm.w_central,
            opt2 / prm.w_central};
}

Reconstruction blend(const ScalarField& f, std::vector<std::array<double, 3>> weights, const CwenoParams& prm) {
    const int n = f.size();
    Reconstruction r;
    r.grid = f.grid;
    r.polys.resize(n);
    r.prefix.assign(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        const Candidates c = candidates(f, i, prm);
        const auto [a0, al, ar] = weights[i];
        CellPoly p;
        p.c0 = a0 * c.p00 + (al + ar) * c.q0;
        p.c1 = a0 * c.p01 + al * c.sl + ar * c.sr;
        p.c2 = a0 * c.p02;
        r.polys[i] = p;
        r.prefix[i + 1] = r.prefix[i] + f.grid.dx * p.average();
    }
    r.weights = std::move(weights);
    return r;
}

}  // namespace

Reconstruction cweno_reconstruct(const ScalarField& f, const CwenoParams& prm) {
    const int n = f.size();
    if (n < 5) throw ConfigError("CWENO needs at least 5 cells");
    auto ipow = [&](double x) {
        double out = 1.0;
        for (int k = 0; k < prm.power; ++k) out *= x;
        return out;
    };
    double scale = 0.0;
    for (double v : f.v) scale = std::max(scale, v * v);
    const double eps = prm.eps + prm.eps_dx2 * f.grid.dx * f.grid.dx * scale;
    std::vector<std::array<double, 3>> w(n);
    for (int i = 0; i < n; ++i) {
        const Candidates c = candidates(f, i, prm);
        const double b0 = c.p01 * c.p01 + 13.0 / 3.0 * c.p02 * c.p02;
        const double bl = c.sl * c.sl, br = c.sr * c.sr;
        double a0 = prm.w_central / ipow(eps + b0);
        double al = prm.w_left / ipow(eps + bl);
        double ar = prm.w_right / ipow(eps + br);
        const double sum = a0 + al + ar;
        w[i] = {a0 / sum, al / sum, ar / sum};
    }
    return blend(f, std::move(w), prm);
}

Reconstruction cweno_reconstruct_frozen(const ScalarField& f, const std::vector<std::array<double, 3>>& weights,
                                        const CwenoParams& prm) {
    if (static_cast<int>(weights.size()) != f.size()) throw ConfigError("frozen CWENO weights do not match the field");
    return blend(f, weights, prm);
}

ScalarField point_to_average(const ScalarField& f) {
    const int n = f.size();
    ScalarField out = f;
    if (n < 3) return out;
    const bool per = f.grid.boundary == Boundary::Periodic;
    for (int i = 0; i < n; ++i) {
        int c = i;
        if (!per) c = std::clamp(i, 1, n - 2);  // one-sided second difference at the ends
        const double d2 = f.v[(c + 1) % n] - 2.0 * f.v[c] + f.v[(c - 1 + n) % n];
        out.v[i] += d2 / 24.0;
    }
    return out;
}

double Reconstruction::value_left(int i) const { return polys.at(i)(-0.5); }
double Reconstruction::value_right(int i) const { return polys.at(i)(0.5); }

double Reconstruction::eval(double x) const {
    const int n = grid.n_cells;
    double s = x - grid.x_left;
    if (grid.boundary == Boundary::Periodic) {
        s = std::fmod(s, grid.length());
        if (s < 0) s += grid.length();
    }
    int k = static_cast<int>(std::floor(s / grid.dx));
    if (k < 0) return polys[0](-0.5);
    if (k >= n) return polys[n - 1](0.5);
    return polys[k](s / grid.dx - k - 0.5);
}

// Antiderivative from x_left; periodic extension adds whole-period totals and
// bounded grids continue with the end-cell averages.
double Reconstruction::antideriv(double x, int* cell) const {
    const int n = grid.n_cells;
    const double L = grid.length();
    const double total = prefix[n];
    double s = x - grid.x_left;
    double shift = 0.0;
    if (grid.boundary == Boundary::Periodic) {
        const double per = std::floor(s / L);
        s -= per * L;
        shift = per * total;
    } else {
        if (s < -L || s > 2 * L) throw NumericalError("integration bound outside the domain");
        if (s < 0) {
            *cell = -1;
            return s * polys[0].average();
        }
        if (s > L) {
            *cell = n;
            return total + (s - L) * polys[n - 1].average();
        }
    }
    int k = static_cast<int>(std::floor(s / grid.dx));
    if (k >= n) k = n - 1;
    if (k < 0) k = 0;
    const double xi = s / grid.dx - k - 0.5;
    const CellPoly& p = polys[k];
    const double local = grid.dx * (p.c0 * (xi + 0.5) + p.c1 * 0.5 * (xi * xi - 0.25) +
                                    p.c2 * (xi * xi * xi + 0.125) / 3.0);
    *cell = k;
    return shift + prefix[k] + local;
}

double Reconstruction::integrate(double a, double b) const {
    if (a == b) return 0.0;
    if (a > b) return -integrate(b, a);
    int ka = 0, kb = 0;
    const double fa = antideriv(a, &ka);
    const double fb = antideriv(b, &kb);
    if (ka == kb && ka >= 0 && ka < grid.n_cells && b - a < grid.dx) {
        // Same cell: evaluate the local primitive difference directly.
        const double xa = grid.x(ka);
        double sa = a, sb = b;
        if (grid.boundary == Boundary::Periodic) {
            const double L = grid.length();
            const double off = std::floor((a - grid.x_left) / L) * L;
            sa -= off;
            sb -= off;
        }
        const CellPoly& p = polys[ka];
        auto prim = [&](double xi) { return p.c0 * xi + p.c1 * 0.5 * xi * xi + p.c2 * xi * xi * xi / 3.0; };
        return grid.dx * (prim((sb - xa) / grid.dx) - prim((sa - xa) / grid.dx));
    }
    return fb - fa;
}

double poly_value_left(const Reconstruction& r, int i) { return r.value_left(i); }
double poly_value_right(const Reconstruction& r, int i) { return r.value_right(i); }
double poly_integrate(const Reconstruction& r, double a, double b) { return r.integrate(a, b); }

}  // namespace slimex
