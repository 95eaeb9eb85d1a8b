#pragma once

#include <iosfwd>
#include <limits>
#include <vector>

#include "slimex/cweno.hpp"
#include "slimex/oracles.hpp"
#include "slimex/state.hpp"
#include "slimex/tableaux.hpp"

namespace slimex {

enum class PressureRule { Auto, Off, Midpoint, Kepler };
enum class SweScheme { SLIMEXH, SLIMEX };
// Frozen: feet from u^n. Centered: feet from (u^n + u^{n+1}) / 2, found by Newton iteration.
enum class Trajectory { Frozen, Centered };

struct SweOptions {
    PressureRule pressure = PressureRule::Auto;  // auto: midpoint for p <= 2, Kepler for p = 3
    bool viscosity = true;                       // implicit LLF dissipation in the continuity equation
    bool steady_source = false;                  // continuity source that keeps h fixed
    double g = kGravity;
    double epsilon = std::numeric_limits<double>::infinity();  // relaxation time; infinity disables it
    bool low_froude = false;                                   // pressure weight 1/(2 epsilon) instead of g/2
    double solver_tol = 1e-12;
    Trajectory trajectory = Trajectory::Centered;
    int newton_max = 4;
    double newton_tol = 1e-10;
};

// Interface fluxes f[k] at x_left + k dx, k = 0..n; the update is -(f[k+1] - f[k]) / dx.
using Flux = std::vector<double>;

Flux flux_d1(const ScalarField& q);  // fourth-order d/dx in flux form
Flux flux_d2(const ScalarField& q);  // fourth-order d2/dx2 in flux form
ScalarField flux_divergence(const Grid1D& g, const Flux& f);

// Cellwise Taylor series h + tau h_t + tau^2/2 h_tt from the Cauchy-Kovalevskaya procedure.
struct CKSeries {
    Grid1D grid;
    std::vector<double> h, ht, htt;
    std::vector<double> lo, hi;  // local range of h; at() clamps to it when set
    ScalarField at(double tau) const;
};

// kappa is the pressure weight (g/2). With zero_rates the series is frozen at h.
CKSeries ck_predictor(const SWEState& s, double kappa, bool zero_rates = false);
double eval_h_squared(const CKSeries& series, double tau, double x);

// Upstream displacement d with x^L = x - d after time tau for the frozen velocity field u.
std::vector<double> foot_displacement(const ScalarField& u, double tau);

// kappa * integral over [0, tau] of h^2(x_i) - h^2(x^L(t)) by the chosen rule.
ScalarField pressure_integral(const CKSeries& series, const ScalarField& u, double tau, PressureRule rule,
                              double kappa);

// H_i = integral of the reconstruction from x_i - d_i to x_i, minus the pressure integral if given.
ScalarField conservative_H(const Reconstruction& q, const std::vector<double>& disp,
                           const ScalarField* pressure = nullptr);

// LLF interface flux of H with dissipation 0.5 * s * tau * (q+ - q-).
Flux conservative_flux(const ScalarField& H, const Reconstruction& q, const std::vector<double>& speed, double tau);
ScalarField conservative_F(const ScalarField& q_n, const ScalarField& H, const std::vector<double>& speed, double tau);

struct StepInfo {
    double mass_outflow = 0.0;  // dt-weighted net mass flux through the boundaries
    int krylov_iterations = 0;
    int newton_iterations = 0;
};

SWEState swe_imex_step(const SWEState& s, double dt, const ButcherPair& tb, SweScheme scheme, const SweOptions& opt,
                       StepInfo* info = nullptr);
SWEState slimexh_step(const SWEState& s, double dt, const ButcherPair& tb, const SweOptions& opt = {},
                      StepInfo* info = nullptr);
SWEState slimex_step(const SWEState& s, double dt, const ButcherPair& tb, const SweOptions& opt = {},
                     StepInfo* info = nullptr);

struct DiagRow {
    double time;
    Diagnostics d;
    double relax_defect;  // max |u - h/2|
};

struct SweRun {
    SweScheme scheme = SweScheme::SLIMEXH;
    ButcherPair tb;
    SweOptions opt;
    double t_final = 0.0;
    double cfl = 2.0;    // used when n_steps == 0
    int n_steps = 0;
};

struct SweResult {
    SWEState state;
    std::vector<DiagRow> rows;
    double dt = 0.0;
    int steps = 0;
    double mass0 = 0.0, outflow = 0.0;
    double mass_drift_rel = 0.0;  // |m(T) - m(0) + outflow| / m(0)
};

// Fixed step: N = ceil(t_final / dt_cfl) from the initial wave speed, dt = t_final / N.
SweResult run_swe(const SWEState& init, const SweRun& run);
int steps_for_cfl(const SWEState& s, double cfl, double t_final, double g = kGravity);

void write_state_csv(std::ostream& os, const SWEState& s);
void write_diagnostics_csv(std::ostream& os, const std::vector<DiagRow>& rows, bool relax_column);

SWEState lake_at_rest(const Grid1D& g, double depth);

}  // namespace slimex
