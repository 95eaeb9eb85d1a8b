#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace slimex {

// periodic: wrap. extrapolate: ghosts copy the end value and out-of-range
// queries clamp. linear: ghosts and out-of-range queries follow the end slope,
// used where the data is linear in the far field (inflow boundaries).
enum class Boundary { Periodic, Extrapolate, Linear };

struct Grid1D {
    double x_left = 0.0;
    double x_right = 1.0;
    int n_cells = 0;
    double dx = 0.0;
    Boundary boundary = Boundary::Periodic;

    Grid1D() = default;
    Grid1D(double xl, double xr, int n, Boundary bc);

    double x(int i) const { return x_left + (i + 0.5) * dx; }
    double length() const { return x_right - x_left; }
    std::vector<double> centers() const;
};

struct ScalarField {
    Grid1D grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const Grid1D& g, double fill = 0.0) : grid(g), v(g.n_cells, fill) {}
    ScalarField(const Grid1D& g, std::vector<double> vals);

    template <class F>
    static ScalarField sample(const Grid1D& g, F&& f) {
        ScalarField out(g);
        for (int i = 0; i < g.n_cells; ++i) out.v[i] = f(g.x(i));
        return out;
    }

    int size() const { return static_cast<int>(v.size()); }
    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }

    // Value with ghost handling for indices in [-2, n+1].
    double ghost(int i) const;

    bool all_finite() const;
};

// Fourth-order central differences.
ScalarField fd_dx(const ScalarField& f);
ScalarField fd_dxx(const ScalarField& f);
void fd_dxx_into(const Grid1D& g, const std::vector<double>& in, std::vector<double>& out);

// C2 cubic spline through cell-centre values. Not-a-knot ends for bounded
// grids, periodic closure otherwise.
class CubicSpline {
public:
    CubicSpline() = default;
    explicit CubicSpline(const ScalarField& f);

    double operator()(double x) const;
    double deriv(double x) const;
    double deriv2(double x) const;
    const Grid1D& grid() const { return grid_; }

private:
    // Maps x to a segment index and local coordinate; returns false when x
    // lies outside the node range under a bounded policy (side set to -1/+1).
    struct Loc {
        int k;
        double t;
        int side;
    };
    Loc locate(double x) const;
    double eval_seg(int k, double t) const;
    double deriv_seg(int k, double t) const;
    double node(int k) const { return f_[k % n_]; }
    double m(int k) const { return m_[k % n_]; }

    Grid1D grid_;
    int n_ = 0;
    std::vector<double> f_;
    std::vector<double> m_;
};

std::vector<double> spline_interpolate(const ScalarField& f, const std::vector<double>& xq);

void write_field_csv(std::ostream& os, const ScalarField& f);

// Discrete norms over a grid: L1 = dx sum|e|, L2 = sqrt(dx sum e^2), Linf.
double norm_l1(const ScalarField& e);
double norm_l2(const ScalarField& e);
double norm_linf(const ScalarField& e);
double integral(const ScalarField& f);

ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);

}  // namespace slimex
