#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "slimex/advdiff.hpp"
#include "slimex/errors.hpp"
#include "slimex/harness.hpp"

using namespace slimex;

namespace {

constexpr double kPi = std::numbers::pi;

AdvDiffProblem periodic_problem(SchemeId id, double alpha, double u) {
    AdvDiffProblem p;
    p.grid = Grid1D(0.0, 1.0, 64, Boundary::Periodic);
    p.tb = make_tableau(id);
    p.alpha = alpha;
    p.velocity = VelocitySampler::constant(u);
    p.q0 = ScalarField::sample(p.grid, [](double x) { return std::exp(std::sin(2.0 * kPi * x)); });
    return p;
}

// Diagonally implicit RK for q_t = alpha q_xx with the same solver.
ScalarField implicit_rk_diffusion(const ScalarField& q, const ButcherPair& tb, double alpha, double dt) {
    std::vector<ScalarField> H;
    for (int i = 0; i < tb.s; ++i) {
        ScalarField rhs = q;
        for (int j = 0; j < i; ++j) rhs = rhs + (dt * tb.a[i][j]) * H[j];
        H.push_back(diffusion_stage_solve(rhs, tb.a[i][i] * dt * alpha, alpha).H_I);
    }
    ScalarField out = q;
    for (int i = 0; i < tb.s; ++i) out = out + (dt * tb.b[i]) * H[i];
    return out;
}

}  // namespace

TEST_CASE("diffusion stage solve") {
    const AdvDiffProblem p = periodic_problem(SchemeId::SP111, 0.1, 0.0);
    const double coeff = 0.01;
    const DiffusionSolve d = diffusion_stage_solve(p.q0, coeff, 0.1);
    CHECK(norm_linf(d.q_I - coeff * fd_dxx(d.q_I) - p.q0) <= 1e-10);
    CHECK(norm_linf(d.H_I - 0.1 * fd_dxx(d.q_I)) <= 1e-10);
    const DiffusionSolve z = diffusion_stage_solve(p.q0, 0.0, 0.0);
    CHECK(norm_linf(z.q_I - p.q0) == 0.0);
    CHECK(norm_linf(z.H_I) == 0.0);
}

TEST_CASE("zero velocity reduces Algorithms 1 and 2 to implicit RK diffusion") {
    for (SchemeId id : all_schemes()) {
        const AdvDiffProblem p = periodic_problem(id, 0.05, 0.0);
        const ScalarField ref = implicit_rk_diffusion(p.q0, p.tb, p.alpha, 0.02);
        CAPTURE(scheme_name(id));
        CHECK(norm_linf(step_algorithm1(p.q0, p, 0.0, 0.02) - ref) <= 1e-10);
        CHECK(norm_linf(step_algorithm2(p.q0, p, 0.0, 0.02) - ref) <= 1e-10);
    }
}

TEST_CASE("zero diffusion reduces Algorithm 2 to semi-Lagrangian transport") {
    for (SchemeId id : all_schemes()) {
        const AdvDiffProblem p = periodic_problem(id, 0.0, 0.7);
        const ScalarField sl = sl_transport(p.q0, p.tb, 0.03, p.velocity);
        CAPTURE(scheme_name(id));
        CHECK(norm_linf(step_algorithm2(p.q0, p, 0.0, 0.03) - sl) <= 1e-13);
        // Algorithm 1 moves the data through its stage fractions, each an interpolation.
        CHECK(norm_linf(step_algorithm1(p.q0, p, 0.0, 0.03) - sl) <= 1e-5);
    }
}

TEST_CASE("run_advdiff validates its inputs and warns about the spatial floor") {
    AdvDiffProblem p = periodic_problem(SchemeId::SP111, 0.01, 0.1);
    p.t_final = 0.1;
    p.n_steps = 1000;
    const AdvDiffResult r = run_advdiff(p);
    CHECK_FALSE(r.warnings.empty());
    CHECK(r.history.size() >= 2u);
    p.alpha = -1.0;
    CHECK_THROWS_AS(run_advdiff(p), ConfigError);
}

TEST_CASE("mass is conserved by Algorithm 2 on a periodic grid with constant velocity") {
    AdvDiffProblem p = periodic_problem(SchemeId::SASSP332, 0.01, 0.4);
    p.t_final = 0.2;
    p.n_steps = 10;
    const AdvDiffResult r = run_advdiff(p);
    CHECK(integral(r.q) == doctest::Approx(integral(p.q0)).epsilon(1e-10));
}

TEST_CASE("temporal order on the Gaussian test") {
    for (const char* alg : {"alg1", "alg2"}) {
        double prev = 0.0;
        for (int nt : {8, 16}) {
            RunConfig c;
            c.test_case = "test2";
            c.scheme = alg;
            c.tableau = "sassp332";
            c.n_steps = nt;
            const RunReport r = run(c);
            REQUIRE(r.has_error);
            if (prev > 0.0) {
                CAPTURE(alg);
                CHECK(std::log2(prev / r.l2) >= 1.7);
            }
            prev = r.l2;
        }
    }
}
