#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "slimex/errors.hpp"
#include "slimex/harness.hpp"
#include "slimex/relax.hpp"

using namespace slimex;

namespace {

constexpr double kPi = std::numbers::pi;

SWEState smooth_state(int n, double velocity_factor) {
    const Grid1D g(0.0, 1.0, n, Boundary::Periodic);
    SWEState s{ScalarField::sample(g, [](double x) { return 1.0 + 0.2 * std::sin(2.0 * kPi * x); }), ScalarField(g)};
    for (int i = 0; i < n; ++i) s.V[i] = velocity_factor * s.h[i] * s.h[i];
    return s;
}

double sum_dx(const ScalarField& f) {
    double s = 0.0;
    for (double v : f.v) s += v * f.grid.dx;
    return s;
}

}  // namespace

TEST_CASE("gamma algebra") {
    const double dt = 0.01;
    const RelaxOptions stiff{1e-14, false};
    CHECK(stiff.gamma(dt) >= 1.0);
    CHECK(std::abs(stiff.dt_over_gamma_eps(dt) - 1.0) <= 1e-10);
    CHECK(stiff.dt_over_gamma_eps(dt) <= 1.0 + 1e-12);
    CHECK(stiff.inv_gamma(dt) <= 1e-11);
    const RelaxOptions loose{1e30, false};
    CHECK(loose.gamma(dt) == 1.0);
    CHECK(loose.inv_gamma(dt) == 1.0);
    for (double eps : {1e-14, 1e-6, 1.0, 1e6}) {
        const RelaxOptions r{eps, false};
        CHECK(r.gamma(dt) >= 1.0);
        CHECK(r.dt_over_gamma_eps(dt) <= 1.0 + 1e-12);
        CHECK(r.inv_gamma(dt) + r.dt_over_gamma_eps(dt) == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("options are validated") {
    CHECK_THROWS_AS(relax_options(RelaxOptions{0.0, false}), ConfigError);
    CHECK_THROWS_AS(relax_options(RelaxOptions{-1.0, false}), ConfigError);
    const SweOptions o = relax_options(RelaxOptions{1e-3, true});
    CHECK(o.epsilon == 1e-3);
    CHECK(o.low_froude);
    const SWEState s = smooth_state(20, 0.5);
    CHECK_THROWS_AS(slimexh_ap_step(s, 0.01, make_tableau("sp111"), RelaxOptions{1e-3, true}), ConfigError);
    CHECK_THROWS_AS(low_froude_step(s, 0.01, make_tableau("sp111"), RelaxOptions{1e-3, false}), ConfigError);
    CHECK_THROWS_AS(low_froude_step(s, 0.01, make_tableau("ssp3433"), RelaxOptions{1e-3, true}), ConfigError);
}

TEST_CASE("very large epsilon reproduces the shallow water steps") {
    const SWEState s = smooth_state(50, 0.3);
    const RelaxOptions r{1e30, false};
    for (SchemeId id : all_schemes()) {
        const ButcherPair tb = make_tableau(id);
        const SWEState a = slimexh_ap_step(s, 0.01, tb, r), b = slimexh_step(s, 0.01, tb);
        const SWEState c = slimex_ap_step(s, 0.005, tb, r), d = slimex_step(s, 0.005, tb);
        CAPTURE(scheme_name(id));
        CHECK(norm_linf(a.h - b.h) <= 1e-10);
        CHECK(norm_linf(a.V - b.V) <= 1e-10);
        CHECK(norm_linf(c.h - d.h) <= 1e-10);
        CHECK(norm_linf(c.V - d.V) <= 1e-10);
    }
}

TEST_CASE("constant depth relaxes to the equilibrium momentum in one step") {
    const Grid1D g(0.0, 1.0, 30, Boundary::Periodic);
    const double c = 1.4, dt = 0.01, eps = 1e-14;
    const SWEState s{ScalarField(g, c), ScalarField::sample(g, [](double x) { return 0.3 + 0.1 * x; })};
    for (SchemeId id : {SchemeId::SP111, SchemeId::SASSP332}) {
        const ButcherPair tb = make_tableau(id);
        const SWEState a = slimexh_ap_step(s, dt, tb, RelaxOptions{eps, false});
        CAPTURE(scheme_name(id));
        CHECK(norm_linf(a.h - s.h) <= 1e-12);
        for (int i = 0; i < g.n_cells; ++i) CHECK(std::abs(a.V[i] - c * c / 2.0) <= 1e-10 * c * c);
        CHECK(equilibrium_defect(a) <= 1e-10);
    }
}

TEST_CASE("low-Froude mode keeps a constant depth steady") {
    const Grid1D g(0.0, 1.0, 30, Boundary::Periodic);
    const SWEState s{ScalarField(g, 0.8), ScalarField(g, 0.32)};
    const SWEState a = low_froude_step(s, 0.01, make_tableau("sassp332"), RelaxOptions{1e-14, true});
    CHECK(norm_linf(a.h - s.h) <= 1e-12);
    CHECK(norm_linf(a.V - s.V) <= 1e-12);
}

TEST_CASE("low-Froude mode with negligible relaxation is the scaled shallow water step") {
    // With eps huge the source vanishes and the pressure weight is g / 2 with g = 1 / eps.
    const SWEState s = smooth_state(40, 0.4);
    const double eps = 1e30;
    SweOptions plain;
    plain.g = 1.0 / eps;
    plain.pressure = PressureRule::Off;
    plain.viscosity = false;
    SweOptions lf_base;
    lf_base.viscosity = false;
    const ButcherPair tb = make_tableau("sassp332");
    const SWEState a = low_froude_step(s, 0.01, tb, RelaxOptions{eps, true}, lf_base);
    const SWEState b = slimexh_step(s, 0.01, tb, plain);
    CHECK(norm_linf(a.h - b.h) <= 1e-10);
    CHECK(norm_linf(a.V - b.V) <= 1e-10);
}

TEST_CASE("mass is conserved in stiff relaxation runs") {
    const SWEState init = smooth_state(100, 0.5);
    for (SchemeId id : {SchemeId::SASSP332, SchemeId::SSP3433}) {
        const ButcherPair tb = make_tableau(id);
        SweOptions o;
        o.viscosity = false;
        SWEState a = init, b = init;
        for (int k = 0; k < 5; ++k) {
            a = slimexh_ap_step(a, 0.004, tb, RelaxOptions{1e-14, false}, o);
            b = slimex_ap_step(b, 0.004, tb, RelaxOptions{1e-14, false}, o);
        }
        CAPTURE(scheme_name(id));
        CHECK(std::abs(sum_dx(a.h) - sum_dx(init.h)) <= 1e-12 * sum_dx(init.h));
        CHECK(std::abs(sum_dx(b.h) - sum_dx(init.h)) <= 1e-12 * sum_dx(init.h));
    }
}

TEST_CASE("B2 shock moves at the Rankine-Hugoniot speed") {
    RunConfig c;
    c.test_case = "b2";
    c.n_cells = 400;
    const RunReport r = run(c);
    const ScalarField& h = r.state.h;
    int k = 0;
    while (k + 1 < h.size() && !(h[k] >= 1.5 && h[k + 1] < 1.5)) ++k;
    const double x = h.grid.x(k) + h.grid.dx * (h[k] - 1.5) / (h[k] - h[k + 1]);
    CHECK(std::abs(x - 1.5 * 0.4) <= h.grid.dx);
    CHECK(r.mass_drift <= 1e-12);
}

TEST_CASE("B1 rarefaction error decreases under refinement") {
    double prev = 0.0;
    for (int n : {100, 200}) {
        RunConfig c;
        c.test_case = "b1";
        c.n_cells = n;
        const RunReport r = run(c);
        REQUIRE(r.has_error);
        if (prev > 0.0) CHECK(r.l1 < 0.75 * prev);
        prev = r.l1;
    }
}

TEST_CASE("low-Froude limit approaches the viscous Burgers reference") {
    double prev = 0.0;
    for (int n : {25, 50}) {
        RunConfig c;
        c.test_case = "lowfroude";
        c.n_cells = n;
        const RunReport r = run(c);
        REQUIRE(r.has_error);
        if (prev > 0.0) CHECK(r.linf < 0.4 * prev);
        prev = r.linf;
    }
}
