#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "slimex/cweno.hpp"

using namespace slimex;

namespace {

constexpr double kPi = std::numbers::pi;

// Exact cell averages of sin(2 pi x).
ScalarField sine_averages(const Grid1D& g) {
    ScalarField f(g);
    const double k = 2.0 * kPi;
    for (int i = 0; i < g.n_cells; ++i) {
        const double a = g.x(i) - 0.5 * g.dx, b = a + g.dx;
        f[i] = (std::cos(k * a) - std::cos(k * b)) / (k * g.dx);
    }
    return f;
}

ScalarField step_field(const Grid1D& g) {
    return ScalarField::sample(g, [](double x) { return x < 0.3 ? 1.0 : (x < 0.7 ? 0.0 : 1.0); });
}

}  // namespace

TEST_CASE("constant data gives constant polynomials") {
    const Grid1D g(0.0, 1.0, 16, Boundary::Periodic);
    const Reconstruction r = cweno_reconstruct(ScalarField(g, 1.75));
    for (const CellPoly& p : r.polys) {
        CHECK(p.c0 == doctest::Approx(1.75).epsilon(1e-15));
        CHECK(std::abs(p.c1) < 1e-15);
        CHECK(std::abs(p.c2) < 1e-15);
    }
    for (int i = 0; i < g.n_cells; ++i) {
        CHECK(poly_value_left(r, i) == doctest::Approx(1.75).epsilon(1e-15));
        CHECK(poly_value_right(r, i) == doctest::Approx(1.75).epsilon(1e-15));
    }
}

TEST_CASE("linear data is reproduced exactly") {
    const Grid1D g(-1.0, 2.0, 30, Boundary::Linear);
    const ScalarField f = ScalarField::sample(g, [](double x) { return x; });
    const Reconstruction r = cweno_reconstruct(f);
    for (int i = 0; i < g.n_cells; ++i) {
        CHECK(r.polys[i].c0 == doctest::Approx(g.x(i)).epsilon(1e-13));
        CHECK(r.polys[i].c1 == doctest::Approx(g.dx).epsilon(1e-12));
        CHECK(std::abs(r.polys[i].c2) < 1e-13);
        CHECK(poly_value_right(r, i) == doctest::Approx(g.x(i) + 0.5 * g.dx).epsilon(1e-13));
        CHECK(poly_value_left(r, i) == doctest::Approx(g.x(i) - 0.5 * g.dx).epsilon(1e-13));
    }
}

TEST_CASE("step data stays within its range at every interface") {
    const Grid1D g(0.0, 1.0, 50, Boundary::Periodic);
    const ScalarField f = step_field(g);
    const Reconstruction r = cweno_reconstruct(f);
    const double lo = *std::min_element(f.v.begin(), f.v.end());
    const double hi = *std::max_element(f.v.begin(), f.v.end());
    for (int i = 0; i < g.n_cells; ++i) {
        for (double v : {poly_value_left(r, i), poly_value_right(r, i)}) {
            CHECK(v >= lo - 1e-12);
            CHECK(v <= hi + 1e-12);
        }
    }
}

TEST_CASE("weights are convex and cell integrals conserve the data") {
    const Grid1D g(0.0, 1.0, 64, Boundary::Periodic);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> U(0.0, 3.0);
    ScalarField rnd(g);
    for (double& v : rnd.v) v = U(rng);
    for (const ScalarField& f : {rnd, step_field(g), sine_averages(g)}) {
        const Reconstruction r = cweno_reconstruct(f);
        for (int i = 0; i < g.n_cells; ++i) {
            double sum = 0.0;
            for (double w : r.weights[i]) {
                CHECK(w >= 0.0);
                CHECK(w <= 1.0);
                sum += w;
            }
            CHECK(std::abs(sum - 1.0) <= 1e-14);
            const double a = g.x_left + i * g.dx;
            CHECK(std::abs(poly_integrate(r, a, a + g.dx) - f[i] * g.dx) <= 1e-12);
            CHECK(std::abs(r.polys[i].average() - f[i]) <= 1e-12);
        }
    }
}

TEST_CASE("interface values converge at third order on smooth data") {
    // A mesh-scaled regularization keeps the central weight at the extrema of
    // the sine; with the fixed eps = 1e-6 alone the order drops to 2 there.
    CwenoParams prm;
    prm.eps_dx2 = 100.0;
    double prev_err = 0.0, prev_jump = 0.0;
    for (int n : {40, 80, 160, 320}) {
        const Grid1D g(0.0, 1.0, n, Boundary::Periodic);
        const Reconstruction r = cweno_reconstruct(sine_averages(g), prm);
        double err = 0.0, jump = 0.0;
        for (int i = 0; i < n; ++i) {
            const double xr = g.x(i) + 0.5 * g.dx;
            err = std::max(err, std::abs(poly_value_right(r, i) - std::sin(2.0 * kPi * xr)));
            jump = std::max(jump, std::abs(poly_value_right(r, i) - poly_value_left(r, (i + 1) % n)));
        }
        if (prev_err > 0.0) {
            CAPTURE(n);
            CHECK(std::log2(prev_err / err) > 2.7);
            CHECK(std::log2(prev_jump / jump) > 2.7);
        }
        prev_err = err;
        prev_jump = jump;
    }
}

TEST_CASE("default parameters still converge at second order at smooth extrema") {
    double prev = 0.0;
    for (int n : {80, 160, 320}) {
        const Grid1D g(0.0, 1.0, n, Boundary::Periodic);
        const Reconstruction r = cweno_reconstruct(sine_averages(g));
        double err = 0.0;
        for (int i = 0; i < n; ++i)
            err = std::max(err, std::abs(poly_value_right(r, i) - std::sin(2.0 * kPi * (g.x(i) + 0.5 * g.dx))));
        if (prev > 0.0) CHECK(std::log2(prev / err) > 1.9);
        prev = err;
    }
}

TEST_CASE("piecewise integration") {
    const Grid1D g(0.0, 1.0, 20, Boundary::Periodic);
    const Reconstruction rc = cweno_reconstruct(ScalarField(g, 2.5));
    CHECK(poly_integrate(rc, 0.13, 0.77) == doctest::Approx(2.5 * 0.64).epsilon(1e-14));
    // periodic wrap across the right end
    CHECK(poly_integrate(rc, 0.9, 1.3) == doctest::Approx(2.5 * 0.4).epsilon(1e-14));

    const Reconstruction rs = cweno_reconstruct(sine_averages(g));
    CHECK(poly_integrate(rs, 0.37, 0.37) == 0.0);
    CHECK(poly_integrate(rs, 0.2, 0.61) == doctest::Approx(-poly_integrate(rs, 0.61, 0.2)).epsilon(1e-15));
    CHECK(std::abs(poly_integrate(rs, 0.0, 1.0)) < 1e-14);

    const Grid1D gl(-1.0, 2.0, 300, Boundary::Linear);
    const Reconstruction rl = cweno_reconstruct(ScalarField::sample(gl, [](double x) { return x; }));
    CHECK(poly_integrate(rl, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("frozen weights give a linear reconstruction") {
    const Grid1D g(0.0, 1.0, 32, Boundary::Periodic);
    const ScalarField a = step_field(g), b = sine_averages(g);
    const Reconstruction ref = cweno_reconstruct(a);
    const Reconstruction ra = cweno_reconstruct_frozen(a, ref.weights);
    const Reconstruction rb = cweno_reconstruct_frozen(b, ref.weights);
    const Reconstruction rab = cweno_reconstruct_frozen(2.0 * a + (-1.0) * b, ref.weights);
    for (int i = 0; i < g.n_cells; ++i) {
        CHECK(rab.polys[i].c0 == doctest::Approx(2.0 * ra.polys[i].c0 - rb.polys[i].c0).epsilon(1e-13));
        CHECK(rab.polys[i].c1 == doctest::Approx(2.0 * ra.polys[i].c1 - rb.polys[i].c1).epsilon(1e-12));
        CHECK(rab.polys[i].c2 == doctest::Approx(2.0 * ra.polys[i].c2 - rb.polys[i].c2).epsilon(1e-12));
        CHECK(ra.polys[i].c0 == ref.polys[i].c0);
    }
}

TEST_CASE("point values to cell averages") {
    const Grid1D g(0.0, 1.0, 10, Boundary::Periodic);
    ScalarField f(g, 0.0);
    f[4] = 24.0;
    const ScalarField a = point_to_average(f);
    CHECK(a[4] == doctest::Approx(22.0));
    CHECK(a[3] == doctest::Approx(1.0));
    CHECK(a[5] == doctest::Approx(1.0));
    CHECK(a[0] == 0.0);
}
