#include "slimex/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "slimex/errors.hpp"

namespace slimex {

namespace {

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double true_residual(const LinearOperator& A, const Vec& x, const Vec& b) {
    Vec ax(b.size());
    A.apply(x, ax);
    double s = 0.0;
    for (size_t i = 0; i < b.size(); ++i) s += (ax[i] - b[i]) * (ax[i] - b[i]);
    return std::sqrt(s);
}

[[noreturn]] void fail(const char* who, int it, double res) {
    std::ostringstream os;
    os << who << " did not converge after " << it << " iterations, residual " << res;
    throw NumericalError(os.str());
}

}  // namespace

double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

SolveResult cg_solve(const LinearOperator& A, const Vec& b, double tol, int max_iter) {
    const int n = static_cast<int>(b.size());
    if (max_iter < 0) max_iter = 10 * n;
    SolveResult out;
    out.method = "cg";
    out.x.assign(n, 0.0);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) return out;
    const double target = tol * bnorm;

    Vec r = b, p = b, ap(n);
    double rr = dot(r, r);
    for (int it = 1; it <= max_iter; ++it) {
        A.apply(p, ap);
        const double pap = dot(p, ap);
        if (!(pap > 0.0)) {
            out.breakdown = true;
            out.iterations = it;
            out.residual = true_residual(A, out.x, b);
            return out;
        }
        const double alpha = rr / pap;
        for (int i = 0; i < n; ++i) {
            out.x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        const double rr_new = dot(r, r);
        out.iterations = it;
        if (std::sqrt(rr_new) <= target) {
            out.residual = true_residual(A, out.x, b);
            return out;
        }
        const double beta = rr_new / rr;
        rr = rr_new;
        for (int i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    fail("cg", max_iter, true_residual(A, out.x, b));
}

SolveResult bicgstab_solve(const LinearOperator& A, const Vec& b, double tol, int max_iter) {
    const int n = static_cast<int>(b.size());
    if (max_iter < 0) max_iter = 10 * n;
    SolveResult out;
    out.method = "bicgstab";
    out.x.assign(n, 0.0);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) return out;
    const double target = tol * bnorm;

    Vec r = b, rhat = b, p(n, 0.0), v(n, 0.0), s(n), t(n);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    int restarts = 0;
    // On breakdown restart from the true residual with a fresh shadow vector.
    auto restart = [&]() {
        if (++restarts > 5) return false;
        A.apply(out.x, t);
        for (int i = 0; i < n; ++i) r[i] = b[i] - t[i];
        // Perturb the shadow so the restart does not repeat the same breakdown.
        std::mt19937 rng(static_cast<unsigned>(restarts));
        std::uniform_real_distribution<double> U(0.5, 1.5);
        for (int i = 0; i < n; ++i) rhat[i] = r[i] * U(rng);
        std::fill(p.begin(), p.end(), 0.0);
        std::fill(v.begin(), v.end(), 0.0);
        rho = alpha = omega = 1.0;
        return true;
    };
    for (int it = 1; it <= max_iter; ++it) {
        const double rho_new = dot(rhat, r);
        if (std::abs(rho_new) <= 1e-30 * dot(r, r) || rho_new == 0.0) {
            if (norm2(r) <= target || !restart()) break;
            continue;
        }
        const double beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for (int i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        A.apply(p, v);
        const double rv = dot(rhat, v);
        if (std::abs(rv) <= 1e-30 * std::abs(rho) || !std::isfinite(rho / rv)) {
            if (!restart()) break;
            continue;
        }
        alpha = rho / rv;
        for (int i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        out.iterations = it;
        if (norm2(s) <= target) {
            for (int i = 0; i < n; ++i) out.x[i] += alpha * p[i];
            out.residual = true_residual(A, out.x, b);
            if (out.residual <= 10 * target) return out;
            r = s;
            continue;
        }
        A.apply(s, t);
        const double tt = dot(t, t);
        omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
        for (int i = 0; i < n; ++i) {
            out.x[i] += alpha * p[i] + omega * s[i];
            r[i] = s[i] - omega * t[i];
        }
        if (norm2(r) <= target) {
            out.residual = true_residual(A, out.x, b);
            if (out.residual <= 10 * target) return out;
        }
        if (omega == 0.0 && !restart()) break;
    }
    fail("bicgstab", out.iterations, true_residual(A, out.x, b));
}

SolveResult solve_linear(const LinearOperator& A, const Vec& b, double tol, int max_iter) {
    if (A.symmetric) {
        try {
            SolveResult r = cg_solve(A, b, tol, max_iter);
            if (!r.breakdown && r.residual <= 10 * tol * norm2(b)) return r;
        } catch (const NumericalError&) {
        }
    }
    return bicgstab_solve(A, b, tol, max_iter);
}

}  // namespace slimex
