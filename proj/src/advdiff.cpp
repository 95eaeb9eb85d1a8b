#include "slimex/advdiff.hpp"

#include <cmath>
#include <sstream>

#include "slimex/errors.hpp"
#include "slimex/krylov.hpp"

namespace slimex {

DiffusionSolve diffusion_stage_solve(const ScalarField& rhs, double coeff, double alpha) {
    DiffusionSolve out;
    if (coeff == 0.0) {
        out.q_I = rhs;
        out.H_I = alpha == 0.0 ? ScalarField(rhs.grid) : alpha * fd_dxx(rhs);
        return out;
    }
    const Grid1D g = rhs.grid;
    LinearOperator A;
    A.n = g.n_cells;
    A.symmetric = g.boundary == Boundary::Periodic;
    A.apply = [g, coeff](const Vec& x, Vec& y) {
        fd_dxx_into(g, x, y);
        for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] - coeff * y[i];
    };
    SolveResult r = solve_linear(A, rhs.v);
    out.q_I = ScalarField(g, std::move(r.x));
    out.H_I = alpha * fd_dxx(out.q_I);
    out.iterations = r.iterations;
    return out;
}

namespace {

double row_sum(const std::vector<double>& r, int upto) {
    double s = 0.0;
    for (int k = 0; k < upto; ++k) s += r[k];
    return s;
}

void axpy(ScalarField& y, double a, const ScalarField& x) {
    for (int i = 0; i < y.size(); ++i) y.v[i] += a * x.v[i];
}

ScalarField at_points(const ScalarField& q, const std::vector<double>& x) {
    return ScalarField(q.grid, spline_interpolate(q, x));
}

}  // namespace

ScalarField step_algorithm0(const ScalarField& q, const AdvDiffProblem& p, double t, double dt) {
    const ButcherPair& tb = p.tb;
    const int s = tb.s;
    const TrajectoryStages st = rk_stages(tb, q.grid, dt, p.velocity, t);
    std::vector<ScalarField> HI;
    for (int i = 0; i < s; ++i) {
        ScalarField qs = q;
        for (int j = 0; j < i; ++j) {
            qs = sl_shift(qs, tb.a[i][j] * dt, st.hl[j]);
            axpy(qs, dt * tb.a[i][j], HI[j]);
        }
        const ScalarField rhs = sl_shift(qs, tb.a[i][i] * dt, st.hl[i]);
        HI.push_back(diffusion_stage_solve(rhs, tb.a[i][i] * dt * p.alpha, p.alpha).H_I);
    }
    // The final combine is one more stage with weights b.
    ScalarField out = q;
    for (int j = 0; j < s; ++j) {
        out = sl_shift(out, tb.b[j] * dt, st.hl[j]);
        axpy(out, dt * tb.b[j], HI[j]);
    }
    return out;
}

ScalarField step_algorithm1(const ScalarField& q, const AdvDiffProblem& p, double t, double dt) {
    const ButcherPair& tb = p.tb;
    const int s = tb.s;
    auto L = [&](const ScalarField& f, double frac) {
        if (std::abs(frac) < 1e-14) return f;
        return sl_transport(f, tb, frac * dt, p.velocity, t);
    };
    std::vector<ScalarField> HI;
    for (int i = 0; i < s; ++i) {
        ScalarField qs = q;
        for (int j = 0; j < i; ++j) {
            // qs sits at fraction sum_{r<j} a_ir; the flux of stage j at c_j.
            const double w = row_sum(tb.a[j], j + 1) - row_sum(tb.a[i], j);
            ScalarField qt = L(qs, w);
            axpy(qt, dt * tb.a[i][j], HI[j]);
            qs = L(qt, tb.a[i][j] - w);
        }
        const ScalarField rhs = L(qs, tb.a[i][i]);
        HI.push_back(diffusion_stage_solve(rhs, tb.a[i][i] * dt * p.alpha, p.alpha).H_I);
    }
    ScalarField qs = q;
    for (int i = 0; i < s; ++i) {
        const double w = row_sum(tb.a[i], i + 1) - row_sum(tb.b, i);
        ScalarField qt = L(qs, w);
        axpy(qt, dt * tb.b[i], HI[i]);
        qs = L(qt, tb.b[i] - w);
    }
    return qs;
}

ScalarField step_algorithm2(const ScalarField& q, const AdvDiffProblem& p, double t, double dt) {
    const ButcherPair& tb = p.tb;
    const int s = tb.s;
    const Grid1D& g = q.grid;
    const TrajectoryStages st = rk_stages(tb, g, dt, p.velocity, t);
    std::vector<ScalarField> HI;
    for (int i = 0; i < s; ++i) {
        std::vector<double> xs(g.n_cells);
        for (int k = 0; k < g.n_cells; ++k) {
            double x = g.x(k);
            for (int j = 0; j < i; ++j) x += tb.a[i][j] * dt * st.hl[j][k];
            xs[k] = wrap(g, x);
        }
        ScalarField qs = at_points(q, xs);
        const double level = row_sum(tb.a[i], i);
        for (int j = 0; j < i; ++j) {
            if (tb.a[i][j] == 0.0) continue;
            const double w = row_sum(tb.a[j], j + 1) - level;
            axpy(qs, dt * tb.a[i][j], sl_shift(HI[j], -w * dt, st.hl[j]));
        }
        const ScalarField rhs = sl_shift(qs, tb.a[i][i] * dt, st.hl[i]);
        HI.push_back(diffusion_stage_solve(rhs, tb.a[i][i] * dt * p.alpha, p.alpha).H_I);
    }
    ScalarField out = at_points(q, st.foot);
    for (int i = 0; i < s; ++i) {
        if (tb.b[i] == 0.0) continue;
        const double w = row_sum(tb.a[i], i + 1) - row_sum(tb.b, s);
        axpy(out, dt * tb.b[i], sl_shift(HI[i], -w * dt, st.hl[i]));
    }
    return out;
}

AdvDiffResult run_advdiff(const AdvDiffProblem& p) {
    if (p.alpha < 0) throw ConfigError("diffusion coefficient must be non-negative");
    if (!(p.t_final > p.t0)) throw ConfigError("t_final must exceed t0");
    if (p.n_steps < 0) throw ConfigError("n_steps must be non-negative");
    AdvDiffResult res;
    res.q = p.q0;
    const double dt = p.n_steps > 0 ? (p.t_final - p.t0) / p.n_steps : 0.0;
    const double dx = p.grid.dx;
    if (p.n_steps > 0 && !(dx * dx * dx * dx < dt * dt * dt)) {
        std::ostringstream os;
        os << "spatial error may dominate: dx^4 = " << dx * dx * dx * dx << " >= dt^3 = " << dt * dt * dt;
        res.warnings.push_back(os.str());
    }
    auto record = [&](int step, double t) {
        StepRecord r{step, t, 0.0, 0.0, integral(res.q)};
        if (p.exact) {
            const ScalarField ex = ScalarField::sample(p.grid, [&](double x) { return p.exact(x, t); });
            const ScalarField e = res.q - ex;
            r.l2 = norm_l2(e);
            r.linf = norm_linf(e);
        }
        res.history.push_back(r);
    };
    record(0, p.t0);
    double t = p.t0;
    for (int n = 0; n < p.n_steps; ++n) {
        switch (p.algorithm) {
            case Algorithm::Alg0: res.q = step_algorithm0(res.q, p, t, dt); break;
            case Algorithm::Alg1: res.q = step_algorithm1(res.q, p, t, dt); break;
            case Algorithm::Alg2: res.q = step_algorithm2(res.q, p, t, dt); break;
        }
        t = p.t0 + (n + 1) * dt;
        if (!res.q.all_finite()) throw NumericalError("non-finite solution at step " + std::to_string(n + 1));
        record(n + 1, t);
    }
    res.l2 = res.history.back().l2;
    res.linf = res.history.back().linf;
    return res;
}

}  // namespace slimex
