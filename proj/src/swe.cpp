#include "slimex/swe.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <string>

#include "slimex/errors.hpp"
#include "slimex/krylov.hpp"

namespace slimex {

namespace {

// Mesh-scaled regularization so smooth extrema of V do not trigger the one-sided stencils.
const CwenoParams kCweno{.eps_dx2 = 100};

bool periodic(const Grid1D& g) { return g.boundary == Boundary::Periodic; }

void close_periodic(const Grid1D& g, Flux& f) {
    if (periodic(g)) f[0] = f[g.n_cells];
}

Flux zero_flux(const Grid1D& g) { return Flux(g.n_cells + 1, 0.0); }

void flux_axpy(Flux& y, double a, const Flux& x) {
    for (size_t k = 0; k < y.size(); ++k) y[k] += a * x[k];
}

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
    ScalarField out(a.grid);
    for (int i = 0; i < a.size(); ++i) out.v[i] = a.v[i] * b.v[i];
    return out;
}

void field_axpy(ScalarField& y, double a, const ScalarField& x) {
    for (int i = 0; i < y.size(); ++i) y.v[i] += a * x.v[i];
}

// Interface maximum of a cell quantity; k indexes the interface between cells k-1 and k.
std::vector<double> interface_max(const ScalarField& c) {
    const int n = c.size();
    std::vector<double> out(n + 1);
    for (int k = 0; k <= n; ++k) out[k] = std::max(c.ghost(k - 1), c.ghost(k));
    return out;
}

PressureRule resolve_rule(PressureRule r, int order) {
    if (r != PressureRule::Auto) return r;
    return order >= 3 ? PressureRule::Kepler : PressureRule::Midpoint;
}

}  // namespace

Flux flux_d1(const ScalarField& q) {
    const int n = q.size();
    Flux f(n + 1);
    for (int k = 0; k <= n; ++k)
        f[k] = (-q.ghost(k + 1) + 7.0 * q.ghost(k) + 7.0 * q.ghost(k - 1) - q.ghost(k - 2)) / 12.0;
    close_periodic(q.grid, f);
    return f;
}

Flux flux_d2(const ScalarField& q) {
    const int n = q.size();
    Flux f(n + 1);
    const double dx = q.grid.dx;
    for (int k = 0; k <= n; ++k)
        f[k] = (-q.ghost(k + 1) + 15.0 * q.ghost(k) - 15.0 * q.ghost(k - 1) + q.ghost(k - 2)) / (12.0 * dx);
    close_periodic(q.grid, f);
    return f;
}

ScalarField flux_divergence(const Grid1D& g, const Flux& f) {
    ScalarField out(g);
    for (int i = 0; i < g.n_cells; ++i) out.v[i] = (f[i + 1] - f[i]) / g.dx;
    return out;
}

ScalarField CKSeries::at(double tau) const {
    ScalarField out(grid);
    const bool clamp = lo.size() == h.size() && hi.size() == h.size();
    for (int i = 0; i < grid.n_cells; ++i) {
        out.v[i] = h[i] + tau * (ht[i] + 0.5 * tau * htt[i]);
        if (clamp) out.v[i] = std::clamp(out.v[i], lo[i], hi[i]);
    }
    return out;
}

CKSeries ck_predictor(const SWEState& s, double kappa, bool zero_rates) {
    const int n = s.h.size();
    CKSeries c{s.h.grid, s.h.v, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), {}, {}};
    if (zero_rates) return c;
    // The Taylor series is meaningless across jumps; keep it inside the range of nearby data.
    const int radius = 2;
    c.lo.resize(n);
    c.hi.resize(n);
    for (int i = 0; i < n; ++i) {
        double a = s.h.v[i], b = s.h.v[i];
        for (int k = -radius; k <= radius; ++k) {
            int j = i + k;
            if (periodic(s.h.grid)) j = (j % n + n) % n;
            else j = std::clamp(j, 0, n - 1);
            a = std::min(a, s.h.v[j]);
            b = std::max(b, s.h.v[j]);
        }
        c.lo[i] = a;
        c.hi[i] = b;
    }
    const ScalarField u = s.velocity();
    const Reconstruction rv = cweno_reconstruct(s.V, kCweno);
    ScalarField G(s.h.grid);
    for (int i = 0; i < n; ++i) G.v[i] = u.v[i] * s.V.v[i] + kappa * s.h.v[i] * s.h.v[i];
    const Reconstruction rg = cweno_reconstruct(G, kCweno);
    for (int i = 0; i < n; ++i) {
        c.ht[i] = -rv.deriv(i);
        c.htt[i] = rg.deriv2(i);
    }
    return c;
}

double eval_h_squared(const CKSeries& series, double tau, double x) {
    const double h = CubicSpline(series.at(tau))(x);
    return h * h;
}

std::vector<double> foot_displacement(const ScalarField& u, double tau) {
    const ScalarField ux = fd_dx(u), uxx = fd_dxx(u);
    std::vector<double> d(u.size());
    for (int i = 0; i < u.size(); ++i) {
        const double v = u.v[i], vx = ux.v[i];
        d[i] = v * tau - 0.5 * tau * tau * v * vx + tau * tau * tau / 6.0 * v * (vx * vx + v * uxx.v[i]);
    }
    return d;
}

ScalarField pressure_integral(const CKSeries& series, const ScalarField& u, double tau, PressureRule rule,
                              double kappa) {
    ScalarField P(series.grid);
    if (rule == PressureRule::Off || tau == 0.0) return P;
    if (rule == PressureRule::Auto) throw ConfigError("pressure rule must be resolved before integration");
    const Grid1D& g = series.grid;
    const ScalarField hh = series.at(0.5 * tau);
    const CubicSpline sh(hh);
    const std::vector<double> dh = foot_displacement(u, 0.5 * tau);
    auto half = [&](int i) {
        const double hf = sh(g.x(i) - dh[i]);
        return hh.v[i] * hh.v[i] - hf * hf;
    };
    if (rule == PressureRule::Midpoint) {
        for (int i = 0; i < g.n_cells; ++i) P.v[i] = kappa * tau * half(i);
        return P;
    }
    // Kepler: the node at t^{n+1} has x^L = x_i and contributes nothing.
    const CubicSpline s0(series.at(0.0));
    const std::vector<double> d0 = foot_displacement(u, tau);
    for (int i = 0; i < g.n_cells; ++i) {
        const double hf = s0(g.x(i) - d0[i]);
        const double start = series.h[i] * series.h[i] - hf * hf;
        P.v[i] = kappa * tau * (start / 6.0 + 2.0 * half(i) / 3.0);
    }
    return P;
}

ScalarField conservative_H(const Reconstruction& q, const std::vector<double>& disp, const ScalarField* pressure) {
    const Grid1D& g = q.grid;
    ScalarField H(g);
    for (int i = 0; i < g.n_cells; ++i) {
        const double x = g.x(i);
        H.v[i] = disp[i] == 0.0 ? 0.0 : q.integrate(x - disp[i], x);
        if (pressure) H.v[i] -= pressure->v[i];
    }
    return H;
}

Flux conservative_flux(const ScalarField& H, const Reconstruction& q, const std::vector<double>& speed, double tau) {
    const Grid1D& g = H.grid;
    const int n = g.n_cells;
    const Reconstruction rh = cweno_reconstruct(H, kCweno);
    Flux f(n + 1);
    for (int k = 0; k <= n; ++k) {
        if (!periodic(g) && (k == 0 || k == n)) {
            f[k] = k == 0 ? rh.value_left(0) : rh.value_right(n - 1);
            continue;
        }
        const int l = (k - 1 + n) % n, r = k % n;
        const double hm = rh.value_right(l), hp = rh.value_left(r);
        const double qm = q.value_right(l), qp = q.value_left(r);
        // Dissipation length capped at one cell; longer ones amplify the grid mode at CFL > 1.
        const double len = std::min(speed[k] * tau, g.dx);
        f[k] = 0.5 * (hp + hm) - 0.5 * len * (qp - qm);
    }
    close_periodic(g, f);
    return f;
}

ScalarField conservative_F(const ScalarField& q_n, const ScalarField& H, const std::vector<double>& speed, double tau) {
    const Flux f = conservative_flux(H, cweno_reconstruct(q_n, kCweno), speed, tau);
    return q_n - flux_divergence(q_n.grid, f);
}

namespace {

// Everything a step needs from t^n.
struct StepContext {
    Grid1D g;
    SWEState s0;
    ScalarField u;
    SweOptions opt;
    PressureRule rule;
    double kappa;
    Reconstruction rec_h, rec_V;
    CKSeries ck;
    std::vector<double> speed_u, speed_V, lambda;
    std::map<double, Flux> cache_V, cache_h;

    Flux sl_flux(double tau, bool momentum) {
        auto& cache = momentum ? cache_V : cache_h;
        if (tau == 0.0) return zero_flux(g);
        auto it = cache.find(tau);
        if (it != cache.end()) return it->second;
        const std::vector<double> d = foot_displacement(u, tau);
        Flux f;
        if (momentum) {
            ScalarField P(g);
            if (rule != PressureRule::Off) P = pressure_integral(ck, u, tau, rule, kappa);
            f = conservative_flux(conservative_H(rec_V, d, &P), rec_V, speed_V, tau);
        } else {
            f = conservative_flux(conservative_H(rec_h, d), rec_h, speed_u, tau);
        }
        cache.emplace(tau, f);
        return f;
    }

    // LLF dissipation flux -lambda/2 (h+ - h-) with CWENO weights frozen at t^n.
    Flux visc_flux(const ScalarField& x) const {
        const int n = g.n_cells;
        Flux f = zero_flux(g);
        if (!opt.viscosity) return f;
        const Reconstruction r = cweno_reconstruct_frozen(x, rec_h.weights, kCweno);
        for (int k = 0; k <= n; ++k) {
            if (!periodic(g) && (k == 0 || k == n)) continue;
            const int l = (k - 1 + n) % n, rr = k % n;
            f[k] = -0.5 * lambda[k] * (r.value_left(rr) - r.value_right(l));
        }
        close_periodic(g, f);
        return f;
    }
};

StepContext make_context(const SWEState& s, const ButcherPair& tb, const SweOptions& opt, const ScalarField* u_traj) {
    if (opt.low_froude && !(opt.epsilon > 0.0 && std::isfinite(opt.epsilon)))
        throw ConfigError("low-Froude mode needs a finite positive epsilon");
    if (!(opt.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    StepContext c;
    c.g = s.h.grid;
    c.s0 = s;
    c.u = u_traj ? *u_traj : s.velocity();
    c.opt = opt;
    c.kappa = opt.low_froude ? 0.5 / opt.epsilon : 0.5 * opt.g;
    // The low-Froude pressure is O(1/epsilon) and stays entirely implicit.
    c.rule = opt.low_froude ? PressureRule::Off : resolve_rule(opt.pressure, tb.order_p);
    c.rec_h = cweno_reconstruct(point_to_average(s.h), kCweno);
    c.rec_V = cweno_reconstruct(point_to_average(s.V), kCweno);
    if (c.rule != PressureRule::Off) c.ck = ck_predictor(s, c.kappa, opt.steady_source);
    ScalarField au(c.g), lam(c.g);
    // In the low-Froude limit the implicit pressure already acts as diffusion; the
    // O(1/Fr) gravity speed would swamp it, so the dissipation uses |u| alone.
    const double g_eff = opt.low_froude ? 0.0 : opt.g;
    for (int i = 0; i < c.g.n_cells; ++i) {
        au.v[i] = std::abs(c.u.v[i]);
        lam.v[i] = au.v[i] + std::sqrt(g_eff * s.h.v[i]);
    }
    c.speed_u = interface_max(au);
    c.speed_V = c.speed_u;
    c.lambda = interface_max(lam);
    return c;
}

void check_positive(const ScalarField& h) {
    for (int i = 0; i < h.size(); ++i)
        if (!(h.v[i] > 0.0)) throw NumericalError("non-positive depth in cell " + std::to_string(i));
}

}  // namespace

namespace {

// One step with trajectories from u_traj (u^n when null).
SWEState imex_step_impl(const SWEState& s, double dt, const ButcherPair& tb, SweScheme scheme, const SweOptions& opt,
                        const ScalarField* u_traj, StepInfo* info) {
    StepContext c = make_context(s, tb, opt, u_traj);
    const Grid1D& g = c.g;
    const int st = tb.s;
    const bool relax = std::isfinite(opt.epsilon);
    const ScalarField& h0 = s.h;
    const ScalarField& V0 = s.V;

    std::vector<ScalarField> Kh, KV;   // stage rates of the implicit partition
    std::vector<Flux> Fh;              // stage h fluxes, rate units
    int iterations = 0;

    for (int i = 0; i < st; ++i) {
        const double tau = tb.a[i][i] * dt;
        if (!(tau > 0.0)) throw ConfigError("SWE stepping needs a nonzero implicit diagonal");
        // 1/gamma and dt/(gamma eps) in grouped form so that eps = 1e-14 stays finite.
        const double inv_gamma = relax ? opt.epsilon / (opt.epsilon + tau) : 1.0;
        const double src = relax ? tau / (opt.epsilon + tau) : 0.0;

        ScalarField hE = h0, hs = h0, Vs = V0;
        for (int j = 0; j < i; ++j) {
            field_axpy(hE, dt * tb.a_tilde[i][j], Kh[j]);
            field_axpy(hs, dt * tb.a[i][j], Kh[j]);
            field_axpy(Vs, dt * tb.a[i][j], KV[j]);
        }
        const ScalarField RV = Vs - flux_divergence(g, c.sl_flux(tb.c[i] * dt, true));

        ScalarField hI(g), y(g);
        Flux fh = zero_flux(g);
        if (scheme == SweScheme::SLIMEX) {
            // Continuity is transported explicitly; only dissipation is implicit.
            const ScalarField Rh = hs - flux_divergence(g, c.sl_flux(tb.c[i] * dt, false));
            hE = hE - flux_divergence(g, c.sl_flux(tb.c_tilde[i] * dt, false));
            if (opt.steady_source) {
                hI = h0;
            } else if (opt.viscosity) {
                LinearOperator A;
                A.n = g.n_cells;
                A.symmetric = false;
                A.apply = [&](const Vec& x, Vec& out) {
                    const ScalarField xf(g, x);
                    const ScalarField d = flux_divergence(g, c.visc_flux(xf));
                    for (int k = 0; k < g.n_cells; ++k) out[k] = x[k] + tau * d.v[k];
                };
                const SolveResult r = solve_linear(A, Rh.v, opt.solver_tol);
                iterations += r.iterations;
                fh = c.visc_flux(ScalarField(g, r.x));
                for (double& v : fh) v *= tau;
                hI = Rh - flux_divergence(g, fh);
            } else {
                hI = Rh;
            }
            // Stage rate for h holds the implicit dissipation only.
            ScalarField k = (1.0 / tau) * (hI - Rh);
            for (double& v : fh) v /= tau;
            Kh.push_back(std::move(k));
            Fh.push_back(fh);
            y = hadamard(hE, hI);
        } else {
            ScalarField hsol = hs;
            if (!opt.steady_source) {
                const double c2 = tau * tau * inv_gamma * c.kappa;
                const double c1 = 0.5 * tau * src;
                auto op_flux = [&](const ScalarField& x) {
                    const ScalarField p = hadamard(hE, x);
                    Flux f = c.visc_flux(x);
                    for (double& v : f) v *= tau;
                    flux_axpy(f, -c2, flux_d2(p));
                    if (c1 != 0.0) flux_axpy(f, c1, flux_d1(p));
                    return f;
                };
                const Flux fR = flux_d1(RV);
                const ScalarField rhs = hs - (tau * inv_gamma) * flux_divergence(g, fR);
                LinearOperator A;
                A.n = g.n_cells;
                A.symmetric = false;
                A.apply = [&](const Vec& x, Vec& out) {
                    const ScalarField d = flux_divergence(g, op_flux(ScalarField(g, x)));
                    for (int k = 0; k < g.n_cells; ++k) out[k] = x[k] + d.v[k];
                };
                const SolveResult r = solve_linear(A, rhs.v, opt.solver_tol);
                iterations += r.iterations;
                hsol = ScalarField(g, r.x);
                // Rebuild h_I from fluxes so that mass telescopes exactly.
                fh = op_flux(hsol);
                flux_axpy(fh, tau * inv_gamma, fR);
            }
            hI = hs - flux_divergence(g, fh);
            for (double& v : fh) v /= tau;
            Kh.push_back((1.0 / tau) * (hI - hs));
            Fh.push_back(fh);
            y = hadamard(hE, hsol);
        }

        ScalarField VI = inv_gamma * RV;
        field_axpy(VI, -tau * inv_gamma * c.kappa, flux_divergence(g, flux_d1(y)));
        if (src != 0.0) field_axpy(VI, 0.5 * src, y);
        KV.push_back((1.0 / tau) * (VI - RV));
    }

    SWEState out;
    out.h = h0;
    out.V = V0 - flux_divergence(g, c.sl_flux(dt, true));
    double outflow = 0.0;
    if (scheme == SweScheme::SLIMEX && !opt.steady_source) {
        const Flux fd = c.sl_flux(dt, false);
        out.h = out.h - flux_divergence(g, fd);
        outflow += fd[g.n_cells] - fd[0];
    }
    for (int i = 0; i < st; ++i) {
        field_axpy(out.h, dt * tb.b[i], Kh[i]);
        field_axpy(out.V, dt * tb.b[i], KV[i]);
        outflow += dt * tb.b[i] * (Fh[i][g.n_cells] - Fh[i][0]);
    }
    if (!out.h.all_finite() || !out.V.all_finite()) throw NumericalError("non-finite SWE state");
    check_positive(out.h);
    if (info) {
        info->mass_outflow = outflow;
        info->krylov_iterations = iterations;
    }
    return out;
}

}  // namespace

SWEState swe_imex_step(const SWEState& s, double dt, const ButcherPair& tb, SweScheme scheme, const SweOptions& opt,
                       StepInfo* info) {
    if (!(dt > 0.0)) throw ConfigError("time step must be positive");
    // With relaxation the feet follow the velocity relaxed over dt, which tends to
    // h/2 in the stiff limit even when the stored V is off equilibrium.
    const bool relax = std::isfinite(opt.epsilon) && !opt.low_froude;
    const double keep_u = relax ? opt.epsilon / (opt.epsilon + dt) : 1.0;
    auto traj_velocity = [&](const SWEState& q) {
        ScalarField u = q.velocity();
        if (relax) {
            u = keep_u * u;
            field_axpy(u, 0.5 * dt / (opt.epsilon + dt), q.h);
        }
        return u;
    };
    const ScalarField u0 = traj_velocity(s);
    SWEState out = imex_step_impl(s, dt, tb, scheme, opt, &u0, info);
    if (opt.trajectory == Trajectory::Frozen) return out;

    // Solve w = (u^n + u^{n+1}(w)) / 2 by Jacobian-free Newton. Plain fixed-point
    // iteration diverges once the advective Courant number exceeds one.
    const Grid1D& g = s.h.grid;
    const int n = g.n_cells;
    auto residual = [&](const ScalarField& w, SWEState* keep) {
        SWEState t = imex_step_impl(s, dt, tb, scheme, opt, &w, nullptr);
        ScalarField r = w - 0.5 * (u0 + traj_velocity(t));
        if (keep) *keep = std::move(t);
        return r;
    };
    ScalarField w = 0.5 * (u0 + traj_velocity(out));
    ScalarField r = residual(w, &out);
    double rn = norm2(r.v);
    int newton = 0;
    for (; newton < opt.newton_max; ++newton) {
        const double wn = norm2(w.v);
        if (rn <= opt.newton_tol * (wn + 1.0)) break;
        LinearOperator J;
        J.n = n;
        J.symmetric = false;
        J.apply = [&](const Vec& v, Vec& y) {
            y.assign(n, 0.0);
            const double vn = norm2(v);
            if (vn == 0.0) return;
            const double eps = 1e-7 * (1.0 + wn) / vn;
            ScalarField wp = w;
            for (int i = 0; i < n; ++i) wp.v[i] += eps * v[i];
            const ScalarField rp = residual(wp, nullptr);
            for (int i = 0; i < n; ++i) y[i] = (rp.v[i] - r.v[i]) / eps;
        };
        Vec rhs(n);
        for (int i = 0; i < n; ++i) rhs[i] = -r.v[i];
        Vec dw;
        try {
            dw = bicgstab_solve(J, rhs, 1e-4, 60).x;
        } catch (const NumericalError&) {
            break;  // keep the last iterate
        }
        // Backtrack until the residual drops; trial steps may leave the admissible set.
        bool accepted = false;
        for (double lam = 1.0; lam >= 1.0 / 16.0 && !accepted; lam *= 0.5) {
            ScalarField wt = w;
            for (int i = 0; i < n; ++i) wt.v[i] += lam * dw[i];
            try {
                const ScalarField rt = residual(wt, nullptr);
                const double rtn = norm2(rt.v);
                if (rtn < rn) {
                    w = std::move(wt);
                    r = rt;
                    rn = rtn;
                    accepted = true;
                }
            } catch (const NumericalError&) {
            }
        }
        if (!accepted) break;
    }
    out = imex_step_impl(s, dt, tb, scheme, opt, &w, info);
    if (info) info->newton_iterations = newton;
    return out;
}

SWEState slimexh_step(const SWEState& s, double dt, const ButcherPair& tb, const SweOptions& opt, StepInfo* info) {
    return swe_imex_step(s, dt, tb, SweScheme::SLIMEXH, opt, info);
}

SWEState slimex_step(const SWEState& s, double dt, const ButcherPair& tb, const SweOptions& opt, StepInfo* info) {
    return swe_imex_step(s, dt, tb, SweScheme::SLIMEX, opt, info);
}

int steps_for_cfl(const SWEState& s, double cfl, double t_final, double g) {
    if (!(cfl > 0.0)) throw ConfigError("CFL must be positive");
    const double dt = cfl * s.h.grid.dx / max_wave_speed(s, g);
    return std::max(1, static_cast<int>(std::ceil(t_final / dt - 1e-12)));
}

SweResult run_swe(const SWEState& init, const SweRun& run) {
    if (!(run.t_final > 0.0)) throw ConfigError("t_final must be positive");
    SweResult res;
    res.state = init;
    res.steps = run.n_steps > 0 ? run.n_steps : steps_for_cfl(init, run.cfl, run.t_final, run.opt.g);
    res.dt = run.t_final / res.steps;
    auto record = [&](double t) {
        const ScalarField u = res.state.velocity();
        double defect = 0.0;
        for (int i = 0; i < u.size(); ++i) defect = std::max(defect, std::abs(u.v[i] - 0.5 * res.state.h.v[i]));
        res.rows.push_back({t, diagnostics(res.state, res.dt, run.opt.g), defect});
    };
    record(0.0);
    res.mass0 = res.rows.front().d.mass;
    for (int n = 0; n < res.steps; ++n) {
        StepInfo info;
        res.state = swe_imex_step(res.state, res.dt, run.tb, run.scheme, run.opt, &info);
        res.outflow += info.mass_outflow;
        record((n + 1) * res.dt);
    }
    res.mass_drift_rel = std::abs(res.rows.back().d.mass - res.mass0 + res.outflow) / std::abs(res.mass0);
    return res;
}

void write_state_csv(std::ostream& os, const SWEState& s) {
    const ScalarField u = s.velocity();
    os.precision(17);
    os << "x,h,u,V\n";
    for (int i = 0; i < s.h.size(); ++i)
        os << s.h.grid.x(i) << ',' << s.h.v[i] << ',' << u.v[i] << ',' << s.V.v[i] << '\n';
}

void write_diagnostics_csv(std::ostream& os, const std::vector<DiagRow>& rows, bool relax_column) {
    os.precision(17);
    os << "time,mass,kinetic,potential,total_energy,CFL";
    if (relax_column) os << ",u_minus_h_over_2_Linf";
    os << '\n';
    for (const DiagRow& r : rows) {
        os << r.time << ',' << r.d.mass << ',' << r.d.kinetic << ',' << r.d.potential << ',' << r.d.total_energy
           << ',' << r.d.cfl;
        if (relax_column) os << ',' << r.relax_defect;
        os << '\n';
    }
}

SWEState lake_at_rest(const Grid1D& g, double depth) { return {ScalarField(g, depth), ScalarField(g, 0.0)}; }

}  // namespace slimex
