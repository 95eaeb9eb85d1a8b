#include "slimex/grid.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "slimex/errors.hpp"

namespace slimex {

Grid1D::Grid1D(double xl, double xr, int n, Boundary bc)
    : x_left(xl), x_right(xr), n_cells(n), dx((xr - xl) / n), boundary(bc) {
    if (n < 5) throw ConfigError("grid needs at least 5 cells");
    if (!(xr > xl)) throw ConfigError("grid bounds must satisfy x_left < x_right");
}

std::vector<double> Grid1D::centers() const {
    std::vector<double> out(n_cells);
    for (int i = 0; i < n_cells; ++i) out[i] = x(i);
    return out;
}

ScalarField::ScalarField(const Grid1D& g, std::vector<double> vals) : grid(g), v(std::move(vals)) {
    if (static_cast<int>(v.size()) != g.n_cells)
        throw ConfigError("field length does not match grid");
}

double ScalarField::ghost(int i) const {
    const int n = size();
    if (i >= 0 && i < n) return v[i];
    switch (grid.boundary) {
        case Boundary::Periodic: return v[((i % n) + n) % n];
        case Boundary::Extrapolate: return i < 0 ? v[0] : v[n - 1];
        case Boundary::Linear:
            if (i < 0) return v[0] + i * (v[1] - v[0]);
            return v[n - 1] + (i - n + 1) * (v[n - 1] - v[n - 2]);
    }
    return 0.0;
}

bool ScalarField::all_finite() const {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

ScalarField fd_dx(const ScalarField& f) {
    ScalarField out(f.grid);
    const double s = 1.0 / (12.0 * f.grid.dx);
    for (int i = 0; i < f.size(); ++i)
        out.v[i] = (-f.ghost(i + 2) + 8 * f.ghost(i + 1) - 8 * f.ghost(i - 1) + f.ghost(i - 2)) * s;
    return out;
}

void fd_dxx_into(const Grid1D& g, const std::vector<double>& in, std::vector<double>& out) {
    const int n = g.n_cells;
    const double s = 1.0 / (12.0 * g.dx * g.dx);
    out.resize(n);
    auto at = [&](int i) -> double {
        if (i >= 0 && i < n) return in[i];
        switch (g.boundary) {
            case Boundary::Periodic: return in[((i % n) + n) % n];
            case Boundary::Extrapolate: return i < 0 ? in[0] : in[n - 1];
            case Boundary::Linear:
                if (i < 0) return in[0] + i * (in[1] - in[0]);
                return in[n - 1] + (i - n + 1) * (in[n - 1] - in[n - 2]);
        }
        return 0.0;
    };
    for (int i = 0; i < n; ++i) {
        if (i >= 2 && i < n - 2)
            out[i] = (-in[i + 2] + 16 * in[i + 1] - 30 * in[i] + 16 * in[i - 1] - in[i - 2]) * s;
        else
            out[i] = (-at(i + 2) + 16 * at(i + 1) - 30 * at(i) + 16 * at(i - 1) - at(i - 2)) * s;
    }
}

ScalarField fd_dxx(const ScalarField& f) {
    ScalarField out(f.grid);
    fd_dxx_into(f.grid, f.v, out.v);
    return out;
}

// ---- cubic spline ---------------------------------------------------------

namespace {

// Thomas algorithm; a = sub, b = diag, c = super. d is overwritten.
void thomas(std::vector<double> a, std::vector<double> b, std::vector<double> c, std::vector<double>& d) {
    const int n = static_cast<int>(d.size());
    for (int i = 1; i < n; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    d[n - 1] /= b[n - 1];
    for (int i = n - 2; i >= 0; --i) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
}

// Cyclic tridiagonal with constant stencil (1, 4, 1), via Sherman-Morrison.
void cyclic_141(std::vector<double>& d) {
    const int n = static_cast<int>(d.size());
    const double gamma = -4.0;
    std::vector<double> a(n, 1.0), b(n, 4.0), c(n, 1.0);
    b[0] -= gamma;
    b[n - 1] -= 1.0 * 1.0 / gamma;
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = 1.0;
    thomas(a, b, c, d);
    thomas(a, b, c, u);
    const double fact = (d[0] + d[n - 1] / gamma) / (1.0 + u[0] + u[n - 1] / gamma);
    for (int i = 0; i < n; ++i) d[i] -= fact * u[i];
}

}  // namespace

CubicSpline::CubicSpline(const ScalarField& f) : grid_(f.grid), n_(f.size()), f_(f.v), m_(f.size()) {
    const int n = n_;
    const double h2 = grid_.dx * grid_.dx;
    if (grid_.boundary == Boundary::Periodic) {
        for (int i = 0; i < n; ++i)
            m_[i] = 6.0 * (f_[(i + 1) % n] - 2 * f_[i] + f_[(i + n - 1) % n]) / h2;
        cyclic_141(m_);
        return;
    }
    // Not-a-knot: M0 = 2M1 - M2 and M_{n-1} = 2M_{n-2} - M_{n-3}; substituting
    // turns the first and last interior rows into 6 M = r.
    const int m = n - 2;
    std::vector<double> a(m, 1.0), b(m, 4.0), c(m, 1.0), d(m);
    for (int i = 1; i <= m; ++i) d[i - 1] = 6.0 * (f_[i + 1] - 2 * f_[i] + f_[i - 1]) / h2;
    b[0] = 6.0;
    c[0] = 0.0;
    b[m - 1] = 6.0;
    a[m - 1] = 0.0;
    thomas(a, b, c, d);
    for (int i = 1; i <= m; ++i) m_[i] = d[i - 1];
    m_[0] = 2 * m_[1] - m_[2];
    m_[n - 1] = 2 * m_[n - 2] - m_[n - 3];
}

CubicSpline::Loc CubicSpline::locate(double x) const {
    const double h = grid_.dx;
    const double x0 = grid_.x(0);
    if (grid_.boundary == Boundary::Periodic) {
        const double L = grid_.length();
        double s = std::fmod(x - x0, L);
        if (s < 0) s += L;
        int k = static_cast<int>(std::floor(s / h));
        if (k > n_ - 1) k = n_ - 1;
        if (k < 0) k = 0;
        return {k, s / h - k, 0};
    }
    const double xn = grid_.x(n_ - 1);
    const double far = 10.0 * grid_.length();
    if (grid_.boundary == Boundary::Extrapolate && (x < grid_.x_left - far || x > grid_.x_right + far))
        throw NumericalError("spline query outside the domain");
    if (x < x0) return {0, 0.0, -1};
    if (x > xn) return {n_ - 2, 1.0, +1};
    int k = static_cast<int>(std::floor((x - x0) / h));
    if (k > n_ - 2) k = n_ - 2;
    if (k < 0) k = 0;
    return {k, (x - x0) / h - k, 0};
}

double CubicSpline::eval_seg(int k, double t) const {
    const double A = 1.0 - t, B = t;
    const double h2 = grid_.dx * grid_.dx;
    return A * node(k) + B * node(k + 1) + ((A * A * A - A) * m(k) + (B * B * B - B) * m(k + 1)) * h2 / 6.0;
}

double CubicSpline::deriv_seg(int k, double t) const {
    const double A = 1.0 - t, B = t;
    const double h = grid_.dx;
    return (node(k + 1) - node(k)) / h + (-(3 * A * A - 1) * m(k) + (3 * B * B - 1) * m(k + 1)) * h / 6.0;
}

double CubicSpline::operator()(double x) const {
    const Loc l = locate(x);
    if (l.side == 0) {
        // Queries that land on a node up to round-off return the node value.
        if (l.t < 1e-13) return node(l.k);
        if (l.t > 1.0 - 1e-13) return node(l.k + 1);
        return eval_seg(l.k, l.t);
    }
    const double xe = l.side < 0 ? grid_.x(0) : grid_.x(n_ - 1);
    const double fe = l.side < 0 ? f_[0] : f_[n_ - 1];
    if (grid_.boundary == Boundary::Extrapolate) return fe;
    return fe + deriv_seg(l.k, l.t) * (x - xe);
}

double CubicSpline::deriv(double x) const {
    const Loc l = locate(x);
    if (l.side != 0 && grid_.boundary == Boundary::Extrapolate) return 0.0;
    return deriv_seg(l.k, l.t);
}

double CubicSpline::deriv2(double x) const {
    const Loc l = locate(x);
    if (l.side != 0) return 0.0;
    return (1.0 - l.t) * m(l.k) + l.t * m(l.k + 1);
}

std::vector<double> spline_interpolate(const ScalarField& f, const std::vector<double>& xq) {
    CubicSpline s(f);
    std::vector<double> out(xq.size());
    for (size_t i = 0; i < xq.size(); ++i) out[i] = s(xq[i]);
    return out;
}

void write_field_csv(std::ostream& os, const ScalarField& f) {
    os << "x,value\n" << std::setprecision(17);
    for (int i = 0; i < f.size(); ++i) os << f.grid.x(i) << ',' << f.v[i] << '\n';
}

double norm_l1(const ScalarField& e) {
    double acc = 0.0;
    for (double x : e.v) acc += std::abs(x);
    return acc * e.grid.dx;
}

double norm_l2(const ScalarField& e) {
    double acc = 0.0;
    for (double x : e.v) acc += x * x;
    return std::sqrt(acc * e.grid.dx);
}

double norm_linf(const ScalarField& e) {
    double acc = 0.0;
    for (double x : e.v) acc = std::max(acc, std::abs(x));
    return acc;
}

double integral(const ScalarField& f) {
    double acc = 0.0;
    for (double x : f.v) acc += x;
    return acc * f.grid.dx;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    ScalarField out(a.grid);
    for (int i = 0; i < a.size(); ++i) out.v[i] = a.v[i] - b.v[i];
    return out;
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    ScalarField out(a.grid);
    for (int i = 0; i < a.size(); ++i) out.v[i] = a.v[i] + b.v[i];
    return out;
}

ScalarField operator*(double s, const ScalarField& a) {
    ScalarField out(a.grid);
    for (int i = 0; i < a.size(); ++i) out.v[i] = s * a.v[i];
    return out;
}

}  // namespace slimex
