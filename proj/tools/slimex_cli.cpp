#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "slimex/errors.hpp"
#include "slimex/harness.hpp"
#include "slimex/tableaux.hpp"

using namespace slimex;

namespace {

struct Flags {
    std::string config, test, scheme, tableau, nx, nt, cfl, eps, out, pressure, viscosity, froude, t_final;
};

void add_run_flags(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config, "key = value config file");
    app->add_option("--test", f.test, "catalog test case");
    app->add_option("--scheme", f.scheme, "alg0 alg1 alg2 slimexh slimex slimexh_ap slimex_ap");
    app->add_option("--tableau", f.tableau, "sp111 sassp332 ssp3433");
    app->add_option("--nx", f.nx, "number of cells");
    app->add_option("--nt", f.nt, "number of time steps");
    app->add_option("--cfl", f.cfl, "CFL number (alpha dt / dx^2 for advection-diffusion)");
    app->add_option("--eps", f.eps, "relaxation parameter");
    app->add_option("--out", f.out, "output directory");
    app->add_option("--pressure-integral", f.pressure, "auto midpoint kepler off");
    app->add_option("--viscosity", f.viscosity, "true or false");
    app->add_option("--froude-scaling", f.froude, "true or false");
    app->add_option("--t-final", f.t_final, "final time");
}

RunConfig build_config(const Flags& f) {
    RunConfig c = f.config.empty() ? RunConfig{} : load_config_file(f.config);
    const std::vector<std::pair<const char*, const std::string*>> given = {
        {"test", &f.test},         {"scheme", &f.scheme},          {"tableau", &f.tableau},
        {"nx", &f.nx},             {"eps", &f.eps},                {"pressure_integral", &f.pressure},
        {"viscosity", &f.viscosity}, {"froude_scaling", &f.froude}, {"t_final", &f.t_final}};
    for (const auto& [key, val] : given)
        if (!val->empty()) apply_setting(c, key, *val);
    // A step rule on the command line replaces the one from the file.
    if (!f.nt.empty() || !f.cfl.empty()) {
        c.n_steps.reset();
        c.cfl.reset();
    }
    if (!f.nt.empty()) apply_setting(c, "nt", f.nt);
    if (!f.cfl.empty()) apply_setting(c, "cfl", f.cfl);
    c.output_dir = output_root(f.out.empty() ? c.output_dir : f.out);
    return c;
}

void print_report(const RunReport& r) {
    const RunConfig& c = r.config;
    std::printf("test %s scheme %s tableau %s nx %d nt %d dt %.6e\n", c.test_case.c_str(), c.scheme.c_str(),
                c.tableau.c_str(), c.n_cells, r.n_steps, r.dt);
    if (r.has_error) std::printf("error L1 %.6e L2 %.6e Linf %.6e\n", r.l1, r.l2, r.linf);
    if (!r.diagnostics.empty()) std::printf("mass drift %.3e\n", r.mass_drift);
    for (const std::string& w : r.warnings) std::printf("warning: %s\n", w.c_str());
    for (const std::string& f : r.files) std::printf("wrote %s\n", f.c_str());
}

std::vector<double> split_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semi-Lagrangian IMEX solvers for advection-diffusion and shallow water"};
    app.require_subcommand(1);

    Flags run_flags, conv_flags;
    CLI::App* run_cmd = app.add_subcommand("run", "run one configuration");
    add_run_flags(run_cmd, run_flags);

    CLI::App* conv_cmd = app.add_subcommand("converge", "refinement study with observed orders");
    add_run_flags(conv_cmd, conv_flags);
    std::string refine = "halve_dt", cfl_list, steps_list;
    int levels = 5;
    conv_cmd->add_option("--refine", refine, "halve_dt, halve_dx or cfl_list");
    conv_cmd->add_option("--levels", levels, "number of levels for halving");
    conv_cmd->add_option("--cfl-list", cfl_list, "comma separated CFL numbers");
    conv_cmd->add_option("--steps-list", steps_list, "comma separated step counts for a CFL sweep");

    app.add_subcommand("list-tests", "print the test catalog");
    app.add_subcommand("validate-tableaux", "check order conditions and structure of every tableau");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand("list-tests")) {
            list_tests(std::cout);
            return 0;
        }
        if (app.got_subcommand("validate-tableaux")) {
            bool ok = true;
            for (SchemeId id : all_schemes()) {
                const std::vector<Violation> v = validate_tableau(make_tableau(id));
                std::printf("%s %s\n", scheme_name(id).c_str(), v.empty() ? "ok" : "FAILED");
                for (const Violation& x : v) std::printf("  %s (residual %.3e)\n", x.what.c_str(), x.residual);
                ok = ok && v.empty();
            }
            return ok ? 0 : 1;
        }
        if (app.got_subcommand("run")) {
            print_report(run(build_config(run_flags)));
            return 0;
        }
        ConvergenceSpec spec;
        spec.levels = levels;
        if (refine == "halve_dt") {
            spec.kind = Refinement::HalveDt;
        } else if (refine == "halve_dx") {
            spec.kind = Refinement::HalveDx;
        } else if (refine == "cfl_list") {
            spec.kind = Refinement::CflList;
            spec.cfl_list = split_doubles(cfl_list);
            for (double s : split_doubles(steps_list)) spec.steps_list.push_back(static_cast<int>(s));
        } else {
            throw ConfigError("unknown refinement '" + refine + "'");
        }
        const OrderTable t = converge(build_config(conv_flags), spec);
        write_orders_csv(std::cout, t);
        for (const std::string& f : t.files) std::printf("wrote %s\n", f.c_str());
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    }
}
