#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "slimex/errors.hpp"
#include "slimex/grid.hpp"

using namespace slimex;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

TEST_CASE("grid geometry and guards") {
    const Grid1D g(-1.0, 1.0, 10, Boundary::Periodic);
    CHECK(g.dx == doctest::Approx(0.2));
    CHECK(g.x(0) == doctest::Approx(-0.9));
    CHECK(g.centers().size() == 10u);
    CHECK_THROWS_AS(Grid1D(0.0, 1.0, 4, Boundary::Periodic), ConfigError);
    CHECK_THROWS_AS(Grid1D(1.0, 0.0, 10, Boundary::Periodic), ConfigError);
    CHECK_THROWS_AS(ScalarField(g, std::vector<double>(3, 0.0)), ConfigError);
}

TEST_CASE("fd stencils vanish on constants") {
    for (Boundary bc : {Boundary::Periodic, Boundary::Extrapolate}) {
        const ScalarField f(Grid1D(0.0, 1.0, 16, bc), 3.5);
        CHECK(max_abs(fd_dx(f).v) == 0.0);
        CHECK(max_abs(fd_dxx(f).v) == 0.0);
    }
}

TEST_CASE("fd stencils are exact on low-degree polynomials in the interior") {
    const Grid1D g(-1.0, 2.0, 30, Boundary::Extrapolate);
    const ScalarField cube = ScalarField::sample(g, [](double x) { return x * x * x; });
    const ScalarField sq = ScalarField::sample(g, [](double x) { return x * x; });
    const ScalarField d1 = fd_dx(cube), d2 = fd_dxx(sq);
    for (int i = 2; i < g.n_cells - 2; ++i) {
        CHECK(d1[i] == doctest::Approx(3.0 * g.x(i) * g.x(i)).epsilon(1e-12));
        CHECK(d2[i] == doctest::Approx(2.0).epsilon(1e-11));
    }
}

TEST_CASE("fd stencils converge at fourth order") {
    double prev1 = 0.0, prev2 = 0.0;
    for (int n : {64, 128, 256}) {
        const Grid1D g(0.0, 2.0, n, Boundary::Periodic);
        const ScalarField f = ScalarField::sample(g, [](double x) { return std::sin(kPi * x); });
        double e1 = 0.0, e2 = 0.0;
        const ScalarField d1 = fd_dx(f), d2 = fd_dxx(f);
        for (int i = 0; i < n; ++i) {
            e1 = std::max(e1, std::abs(d1[i] - kPi * std::cos(kPi * g.x(i))));
            e2 = std::max(e2, std::abs(d2[i] + kPi * kPi * std::sin(kPi * g.x(i))));
        }
        if (prev1 > 0.0) {
            CHECK(std::log2(prev1 / e1) > 3.8);
            CHECK(std::log2(prev2 / e2) > 3.8);
        }
        prev1 = e1;
        prev2 = e2;
    }
}

TEST_CASE("second derivative of a Gaussian converges at fourth order") {
    double prev = 0.0;
    for (int n : {100, 200, 400}) {
        const Grid1D g(-6.0, 6.0, n, Boundary::Extrapolate);
        const ScalarField f = ScalarField::sample(g, [](double x) { return std::exp(-x * x); });
        const ScalarField d2 = fd_dxx(f);
        double e = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = g.x(i);
            e = std::max(e, std::abs(d2[i] - (4.0 * x * x - 2.0) * std::exp(-x * x)));
        }
        if (prev > 0.0) CHECK(std::log2(prev / e) > 3.8);
        prev = e;
    }
}

TEST_CASE("fd stencils are linear and the periodic first derivative telescopes") {
    const Grid1D g(0.0, 1.0, 40, Boundary::Periodic);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    ScalarField a(g), b(g);
    for (int i = 0; i < g.n_cells; ++i) {
        a[i] = U(rng);
        b[i] = U(rng);
    }
    const ScalarField lhs1 = fd_dx(2.0 * a + (-3.0) * b), rhs1 = 2.0 * fd_dx(a) + (-3.0) * fd_dx(b);
    const ScalarField lhs2 = fd_dxx(2.0 * a + (-3.0) * b), rhs2 = 2.0 * fd_dxx(a) + (-3.0) * fd_dxx(b);
    CHECK(norm_linf(lhs1 - rhs1) < 1e-11);
    CHECK(norm_linf(lhs2 - rhs2) < 1e-8);
    double sum = 0.0;
    for (double v : fd_dx(a).v) sum += v * g.dx;
    CHECK(std::abs(sum) < 1e-13);
}

TEST_CASE("spline interpolates nodes and reproduces cubics") {
    const Grid1D g(-1.0, 1.0, 20, Boundary::Extrapolate);
    auto cubic = [](double x) { return 1.0 - 2.0 * x + 0.5 * x * x + 0.75 * x * x * x; };
    const ScalarField f = ScalarField::sample(g, cubic);
    const std::vector<double> nodes = g.centers();
    const std::vector<double> at_nodes = spline_interpolate(f, nodes);
    for (int i = 0; i < g.n_cells; ++i) CHECK(at_nodes[i] == doctest::Approx(f[i]).epsilon(1e-14));

    std::vector<double> xq;
    for (int k = 0; k <= 50; ++k) xq.push_back(g.x(0) + k * (g.x(g.n_cells - 1) - g.x(0)) / 50.0);
    const std::vector<double> vals = spline_interpolate(f, xq);
    for (std::size_t k = 0; k < xq.size(); ++k) CHECK(std::abs(vals[k] - cubic(xq[k])) < 1e-12);
}

TEST_CASE("periodic spline converges at fourth order") {
    double prev = 0.0;
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(0.0, 2.0 * kPi);
    std::vector<double> xq(200);
    for (double& x : xq) x = U(rng);
    for (int n : {32, 64, 128}) {
        const Grid1D g(0.0, 2.0 * kPi, n, Boundary::Periodic);
        const ScalarField f = ScalarField::sample(g, [](double x) { return std::sin(x); });
        const std::vector<double> v = spline_interpolate(f, xq);
        double e = 0.0;
        for (std::size_t k = 0; k < xq.size(); ++k) e = std::max(e, std::abs(v[k] - std::sin(xq[k])));
        if (prev > 0.0) CHECK(std::log2(prev / e) > 3.7);
        prev = e;
    }
}

TEST_CASE("periodic spline wraps and bounded spline rejects far queries") {
    const Grid1D gp(0.0, 1.0, 16, Boundary::Periodic);
    const ScalarField fp = ScalarField::sample(gp, [](double x) { return std::cos(2.0 * kPi * x); });
    const CubicSpline sp(fp);
    CHECK(sp(0.3 + 1.0) == doctest::Approx(sp(0.3)).epsilon(1e-13));
    CHECK(sp(0.3 - 2.0) == doctest::Approx(sp(0.3)).epsilon(1e-13));

    const Grid1D gb(0.0, 1.0, 16, Boundary::Extrapolate);
    const CubicSpline sb(ScalarField(gb, 1.0));
    CHECK_THROWS_AS(sb(100.0), NumericalError);
}

TEST_CASE("norms") {
    const Grid1D g(0.0, 1.0, 10, Boundary::Periodic);
    ScalarField e(g, 0.0);
    e[3] = -2.0;
    CHECK(norm_l1(e) == doctest::Approx(0.2));
    CHECK(norm_l2(e) == doctest::Approx(std::sqrt(0.4)));
    CHECK(norm_linf(e) == 2.0);
    CHECK(integral(ScalarField(g, 3.0)) == doctest::Approx(3.0));
}
