#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "slimex/advdiff.hpp"
#include "slimex/oracles.hpp"
#include "slimex/swe.hpp"

namespace slimex {

enum class TestKind { AdvDiff, Swe, Relax };

struct CatalogEntry {
    std::string name;
    TestKind kind = TestKind::Swe;
    std::string summary;
    double x_left = 0.0, x_right = 1.0;
    Boundary boundary = Boundary::Periodic;
    double t_final = 0.0;
    int n_cells = 0;
    std::string scheme, tableau;
    double cfl = 0.0;    // default step rule when positive
    int n_steps = 0;     // otherwise
    double alpha = 0.0;  // advection-diffusion only
    std::optional<RiemannIC> riemann;
    double epsilon = std::numeric_limits<double>::infinity();
    bool froude_scaling = false;
    bool viscosity = true;
    bool steady_source = false;
    std::string error_field;  // quantity the oracle error is measured on
    std::string norm;         // norm used for orders: l1, l2 or linf
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry& find_test(const std::string& name);
void list_tests(std::ostream& os);

struct RunConfig {
    std::string test_case;
    std::string scheme;   // empty: catalog default
    std::string tableau;  // empty: catalog default
    int n_cells = 0;      // 0: catalog default
    std::optional<int> n_steps;
    std::optional<double> cfl;  // SWE: wave Courant number; advection-diffusion: alpha dt / dx^2
    std::optional<double> epsilon;
    std::optional<bool> froude_scaling;
    std::string pressure_integral = "auto";  // auto, midpoint, kepler, off
    std::optional<bool> viscosity;
    std::optional<double> t_final;
    std::string output_dir;
};

// Flat "key = value" text; '#' starts a comment. Unknown keys are rejected.
RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

// Fills catalog defaults and checks the pairing. Throws ConfigError.
RunConfig resolve(const RunConfig& cfg);

struct RunReport {
    RunConfig config;  // resolved
    int n_steps = 0;
    double dt = 0.0;
    bool has_error = false;
    double l1 = 0.0, l2 = 0.0, linf = 0.0;
    double mass_drift = 0.0;  // relative, boundary outflow included
    std::vector<double> x;
    ScalarField q;      // advection-diffusion solution
    SWEState state;     // SWE and relaxation solution
    std::vector<DiagRow> diagnostics;
    std::vector<StepRecord> history;
    std::vector<std::string> files, warnings;
};

RunReport run(const RunConfig& cfg);

enum class Refinement { HalveDt, HalveDx, CflList };

struct ConvergenceSpec {
    Refinement kind = Refinement::HalveDt;
    int levels = 5;
    std::vector<double> cfl_list;  // CflList
    std::vector<int> steps_list;   // optional explicit step counts for CflList
};

struct ConvergenceRow {
    int n_cells = 0, n_steps = 0;
    double cfl = 0.0, dt = 0.0, error = 0.0;
    std::optional<double> order;
};

struct OrderTable {
    std::string test_case, scheme, tableau, norm;
    std::vector<ConvergenceRow> rows;
    std::vector<std::string> files;
};

// Order between levels k and k+1 is log(e_k / e_{k+1}) / log(r_k).
std::vector<double> observed_orders(const std::vector<double>& errors, const std::vector<double>& ratios);

OrderTable converge(const RunConfig& base, const ConvergenceSpec& spec);

void write_orders_csv(std::ostream& os, const OrderTable& t);

// Output root: --out, else SLIMEX_OUTPUT_DIR, else empty (no files).
std::string output_root(const std::string& flag);

}  // namespace slimex
