#include "slimex/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "slimex/errors.hpp"
#include "slimex/relax.hpp"

namespace slimex {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("bad number for " + key + ": '" + v + "'");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const int i = std::stoi(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError("bad integer for " + key + ": '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "off" || v == "0" || v == "no") return false;
    throw ConfigError("bad boolean for " + key + ": '" + v + "'");
}

CatalogEntry riemann_entry(const std::string& name, const std::string& summary, RiemannIC ic, TestKind kind) {
    CatalogEntry e;
    e.name = name;
    e.kind = kind;
    e.summary = summary;
    e.x_left = ic.x_left;
    e.x_right = ic.x_right;
    e.boundary = Boundary::Extrapolate;
    e.t_final = ic.t_final;
    e.n_cells = 400;
    e.error_field = "h";
    e.norm = "l1";
    e.riemann = std::move(ic);
    return e;
}

std::vector<CatalogEntry> build_catalog() {
    std::vector<CatalogEntry> c;
    CatalogEntry t1;
    t1.name = "test1";
    t1.kind = TestKind::AdvDiff;
    t1.summary = "diffusing front, u = 0.1, alpha = 1e-3";
    t1.x_left = -2.0;
    t1.x_right = 2.0;
    t1.boundary = Boundary::Extrapolate;
    t1.t_final = 0.3;
    t1.n_cells = 1000;
    t1.scheme = "alg2";
    t1.tableau = "sassp332";
    t1.n_steps = 16;
    t1.alpha = 1e-3;
    t1.error_field = "q";
    t1.norm = "l2";
    c.push_back(t1);

    CatalogEntry t2 = t1;
    t2.name = "test2";
    t2.summary = "Gaussian in u = 0.2 x, no diffusion";
    t2.x_left = -3.0;
    t2.x_right = 3.0;
    t2.t_final = 9.0;
    t2.alpha = 0.0;
    c.push_back(t2);

    CatalogEntry t3 = t1;
    t3.name = "test3";
    t3.summary = "u = -x, alpha = 0.1, separable exact solution";
    t3.x_left = -10.0;
    t3.x_right = 10.0;
    t3.boundary = Boundary::Linear;
    t3.t_final = 0.1;
    t3.alpha = 0.1;
    c.push_back(t3);

    CatalogEntry st;
    st.name = "swe_steady";
    st.kind = TestKind::Swe;
    st.summary = "steady flow u = 1 + 5 cos(pi x / 5) with compatible source";
    st.x_left = -10.0;
    st.x_right = 10.0;
    st.boundary = Boundary::Periodic;
    st.t_final = 0.2;
    st.n_cells = 50;
    st.scheme = "slimexh";
    st.tableau = "ssp3433";
    st.cfl = 2.0;
    st.viscosity = false;
    st.steady_source = true;
    st.error_field = "V";
    st.norm = "linf";
    c.push_back(st);

    CatalogEntry ga = st;
    ga.name = "swe_gaussian";
    ga.summary = "pressure wave from h = 1 + exp(-x^2), fluid at rest";
    ga.t_final = 1.2;
    ga.n_cells = 400;
    ga.viscosity = true;
    ga.steady_source = false;
    ga.error_field = "";
    ga.norm = "";
    c.push_back(ga);

    CatalogEntry rp1 = riemann_entry("rp1", "two rarefactions", {"rp1", 1.5, -1.0, 1.0, 2.0, 0.0, 1.0, -10.0, 10.0},
                                     TestKind::Swe);
    rp1.scheme = "slimexh";
    rp1.tableau = "ssp3433";
    rp1.cfl = 3.0;
    c.push_back(rp1);
    CatalogEntry rp2 = riemann_entry("rp2", "dam break, shock and rarefaction",
                                     {"rp2", 1.0, 0.0, 0.5, 0.0, 0.0, 1.5, -10.0, 10.0}, TestKind::Swe);
    rp2.scheme = "slimexh";
    rp2.tableau = "ssp3433";
    rp2.cfl = 2.0;
    c.push_back(rp2);

    for (auto [name, summary, ic] :
         {std::tuple{"b1", "stiff relaxation, Burgers rarefaction",
                     RiemannIC{"b1", 1.0, 0.0, 2.0, 0.0, 0.0, 0.3, -1.0, 1.0}},
          std::tuple{"b2", "stiff relaxation, Burgers shock", RiemannIC{"b2", 2.0, 0.0, 1.0, 0.0, 0.0, 0.4, -1.0, 1.0}}}) {
        CatalogEntry b = riemann_entry(name, summary, ic, TestKind::Relax);
        b.scheme = "slimexh_ap";
        b.tableau = "ssp3433";
        b.cfl = 4.0;
        b.epsilon = 1e-14;
        c.push_back(b);
    }

    CatalogEntry lf;
    lf.name = "lowfroude";
    lf.kind = TestKind::Relax;
    lf.summary = "low-Froude relaxation, h = 1 + 0.2 sin(2 pi x), viscous Burgers limit";
    lf.x_left = 0.0;
    lf.x_right = 1.0;
    lf.boundary = Boundary::Periodic;
    lf.t_final = 0.05;
    lf.n_cells = 100;
    lf.scheme = "slimexh_ap";
    lf.tableau = "sassp332";
    lf.cfl = 0.15;  // advective: max |u| dt / dx
    lf.epsilon = 1e-14;
    lf.froude_scaling = true;
    lf.error_field = "h";
    lf.norm = "linf";
    c.push_back(lf);

    CatalogEntry ap;
    ap.name = "ap_smooth";
    ap.kind = TestKind::Relax;
    ap.summary = "stiff relaxation, h = 1 + 0.2 sin(8 pi x), u = h / 2";
    ap.x_left = 0.0;
    ap.x_right = 1.0;
    ap.boundary = Boundary::Periodic;
    ap.t_final = 0.05;
    ap.n_cells = 400;
    ap.scheme = "slimexh_ap";
    ap.tableau = "sassp332";
    ap.cfl = 8.0;
    ap.epsilon = 1e-14;
    ap.viscosity = false;
    ap.error_field = "h";
    ap.norm = "linf";
    c.push_back(ap);
    return c;
}

bool is_advdiff_scheme(const std::string& s) { return s == "alg0" || s == "alg1" || s == "alg2"; }
bool is_swe_scheme(const std::string& s) { return s == "slimexh" || s == "slimex"; }
bool is_relax_scheme(const std::string& s) { return s == "slimexh_ap" || s == "slimex_ap"; }

Grid1D make_grid(const CatalogEntry& e, int n) { return Grid1D(e.x_left, e.x_right, n, e.boundary); }

AdvDiffProblem advdiff_problem(const CatalogEntry& e, const RunConfig& c) {
    AdvDiffProblem p;
    p.grid = make_grid(e, c.n_cells);
    p.tb = make_tableau(c.tableau);
    p.alpha = e.alpha;
    p.t_final = *c.t_final;
    p.algorithm = c.scheme == "alg0" ? Algorithm::Alg0 : c.scheme == "alg1" ? Algorithm::Alg1 : Algorithm::Alg2;
    if (e.name == "test1") {
        p.velocity = VelocitySampler::constant(0.1);
        p.exact = [](double x, double t) { return exact_test1(x, t); };
    } else if (e.name == "test2") {
        p.velocity = VelocitySampler::analytic([](double x, double) { return 0.2 * x; },
                                               [](double, double) { return 0.2; }, [](double, double) { return 0.0; });
        p.exact = [](double x, double t) { return exact_test2(x, t); };
    } else {
        p.velocity = VelocitySampler::analytic([](double x, double) { return -x; }, [](double, double) { return -1.0; },
                                               [](double, double) { return 0.0; });
        p.exact = [](double x, double t) { return exact_test3(x, t); };
    }
    p.q0 = ScalarField::sample(p.grid, [&](double x) { return p.exact(x, 0.0); });
    if (c.n_steps) {
        p.n_steps = *c.n_steps;
    } else {
        if (!(e.alpha > 0.0)) throw ConfigError(e.name + " has no diffusion; give nt instead of cfl");
        const double dt = *c.cfl * p.grid.dx * p.grid.dx / e.alpha;
        p.n_steps = std::max(1, static_cast<int>(std::ceil(p.t_final / dt - 1e-12)));
    }
    return p;
}

SWEState initial_state(const CatalogEntry& e, const Grid1D& g) {
    if (e.riemann) {
        const RiemannIC& ic = *e.riemann;
        auto side = [&](double x, double l, double r) { return x < ic.xd ? l : r; };
        return {ScalarField::sample(g, [&](double x) { return side(x, ic.hL, ic.hR); }),
                ScalarField::sample(g, [&](double x) { return side(x, ic.hL * ic.uL, ic.hR * ic.uR); })};
    }
    if (e.name == "swe_steady")
        return {ScalarField::sample(g, [](double x) { return steady_swe(x).h; }),
                ScalarField::sample(g, [](double x) {
                    const SteadySWE q = steady_swe(x);
                    return q.h * q.u;
                })};
    if (e.name == "swe_gaussian")
        return {ScalarField::sample(g, [](double x) { return 1.0 + std::exp(-x * x); }), ScalarField(g, 0.0)};
    if (e.name == "ap_smooth") {
        const ScalarField h = ScalarField::sample(g, [](double x) { return 1.0 + 0.2 * std::sin(8.0 * std::numbers::pi * x); });
        ScalarField V = h;
        for (double& v : V.v) v = 0.5 * v * v;
        return {h, V};
    }
    if (e.name == "lowfroude") {
        // Start on the low-Froude equilibrium V = h^2 / 2 - (h^2)_x / 2.
        const ScalarField h = ScalarField::sample(g, [](double x) { return 1.0 + 0.2 * std::sin(2.0 * std::numbers::pi * x); });
        const ScalarField hx = fd_dx(h);
        ScalarField V(g);
        for (int i = 0; i < g.n_cells; ++i) V.v[i] = 0.5 * h.v[i] * h.v[i] - h.v[i] * hx.v[i];
        return {h, V};
    }
    throw ConfigError("no initial state for " + e.name);
}

struct Errors {
    double l1, l2, linf;
};

Errors error_norms(const ScalarField& e) { return {norm_l1(e), norm_l2(e), norm_linf(e)}; }

// Cell averages of a fine periodic reference on the coarse grid.
ScalarField lowfroude_oracle(const CatalogEntry& e, const Grid1D& g, double t_final) {
    const int ratio = std::max(1, (3200 + g.n_cells - 1) / g.n_cells);
    const Grid1D gf = make_grid(e, g.n_cells * ratio);
    const ScalarField ref = viscous_burgers_reference(initial_state(e, gf).h, t_final, 2000);
    ScalarField out(g);
    for (int i = 0; i < g.n_cells; ++i) {
        double s = 0.0;
        for (int j = 0; j < ratio; ++j) s += ref.v[i * ratio + j];
        out.v[i] = s / ratio;
    }
    return out;
}

std::optional<ScalarField> swe_oracle(const CatalogEntry& e, const Grid1D& g, double t) {
    if (e.riemann) {
        const RiemannIC& ic = *e.riemann;
        if (e.kind == TestKind::Relax)
            return ScalarField::sample(g, [&](double x) { return burgers_exact_riemann(ic.hL, ic.hR, x, t, ic.xd); });
        return ScalarField::sample(g, [&](double x) { return swe_exact_riemann(ic, x, t).h; });
    }
    if (e.name == "swe_steady") return initial_state(e, g).V;
    if (e.name == "lowfroude") return lowfroude_oracle(e, g, t);
    return std::nullopt;
}

std::string tag_of(const RunConfig& c, int n_steps) {
    std::ostringstream os;
    os << c.test_case << '_' << c.scheme << '_' << c.tableau << "_nx" << c.n_cells << "_nt" << n_steps;
    return os.str();
}

std::ofstream open_csv(const std::string& dir, const std::string& name, std::vector<std::string>& files) {
    std::filesystem::create_directories(dir);
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write " + path);
    os.precision(17);
    files.push_back(path);
    return os;
}

SweOptions swe_options(const CatalogEntry& e, const RunConfig& c) {
    SweOptions o;
    o.viscosity = *c.viscosity;
    o.steady_source = e.steady_source;
    if (c.pressure_integral == "midpoint") o.pressure = PressureRule::Midpoint;
    if (c.pressure_integral == "kepler") o.pressure = PressureRule::Kepler;
    if (c.pressure_integral == "off") o.pressure = PressureRule::Off;
    if (e.kind == TestKind::Relax) {
        RelaxOptions r;
        r.epsilon = *c.epsilon;
        r.froude_scaling = *c.froude_scaling;
        o = relax_options(r, o);
    }
    return o;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> c = build_catalog();
    return c;
}

const CatalogEntry& find_test(const std::string& name) {
    for (const CatalogEntry& e : catalog())
        if (e.name == name) return e;
    throw ConfigError("unknown test case '" + name + "'");
}

void list_tests(std::ostream& os) {
    os << "name,kind,domain,t_final,n_cells,scheme,tableau,step_rule,initial_data\n";
    for (const CatalogEntry& e : catalog()) {
        os << e.name << ','
           << (e.kind == TestKind::AdvDiff ? "advdiff" : e.kind == TestKind::Swe ? "swe" : "relax") << ",["
           << e.x_left << ";" << e.x_right << "]," << e.t_final << ',' << e.n_cells << ',' << e.scheme << ','
           << e.tableau << ',';
        if (e.cfl > 0.0)
            os << "cfl=" << e.cfl;
        else
            os << "nt=" << e.n_steps;
        os << ",\"";
        if (e.riemann)
            os << "hL=" << e.riemann->hL << " uL=" << e.riemann->uL << " hR=" << e.riemann->hR
               << " uR=" << e.riemann->uR << " xd=" << e.riemann->xd;
        else
            os << e.summary;
        if (e.kind == TestKind::Relax)
            os << " eps=" << e.epsilon << (e.froude_scaling ? " froude_scaling" : "");
        os << "\"\n";
    }
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (key == "test" || key == "test_case") c.test_case = v;
    else if (key == "scheme") c.scheme = v;
    else if (key == "tableau") c.tableau = v;
    else if (key == "nx" || key == "n_cells") c.n_cells = parse_int(key, v);
    else if (key == "nt" || key == "n_steps") c.n_steps = parse_int(key, v);
    else if (key == "cfl") c.cfl = parse_double(key, v);
    else if (key == "eps" || key == "epsilon") c.epsilon = parse_double(key, v);
    else if (key == "froude_scaling") c.froude_scaling = parse_bool(key, v);
    else if (key == "pressure_integral") c.pressure_integral = v;
    else if (key == "viscosity") c.viscosity = parse_bool(key, v);
    else if (key == "t_final") c.t_final = parse_double(key, v);
    else if (key == "out" || key == "output_dir") c.output_dir = v;
    else throw ConfigError("unknown config key '" + key + "'");
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        apply_setting(c, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return c;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

RunConfig resolve(const RunConfig& in) {
    if (in.test_case.empty()) throw ConfigError("no test case given");
    const CatalogEntry& e = find_test(in.test_case);
    RunConfig c = in;
    if (c.scheme.empty()) c.scheme = e.scheme;
    if (c.tableau.empty()) c.tableau = e.tableau;
    make_tableau(c.tableau);  // validates the id
    if (c.n_cells == 0) c.n_cells = e.n_cells;
    if (c.n_cells < 5) throw ConfigError("nx must be at least 5");
    if (c.n_steps && c.cfl) throw ConfigError("give either nt or cfl, not both");
    if (!c.n_steps && !c.cfl) {
        if (e.cfl > 0.0)
            c.cfl = e.cfl;
        else
            c.n_steps = e.n_steps;
    }
    if (c.n_steps && *c.n_steps < 1) throw ConfigError("nt must be positive");
    if (c.cfl && !(*c.cfl > 0.0)) throw ConfigError("cfl must be positive");
    if (!c.t_final) c.t_final = e.t_final;
    if (!(*c.t_final > 0.0)) throw ConfigError("t_final must be positive");
    if (!c.viscosity) c.viscosity = e.viscosity;
    if (!c.froude_scaling) c.froude_scaling = e.froude_scaling;
    if (!c.epsilon) c.epsilon = e.epsilon;
    if (!(*c.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    const std::string& p = c.pressure_integral;
    if (p != "auto" && p != "midpoint" && p != "kepler" && p != "off")
        throw ConfigError("pressure_integral must be auto, midpoint, kepler or off");

    switch (e.kind) {
        case TestKind::AdvDiff:
            if (!is_advdiff_scheme(c.scheme))
                throw ConfigError("scheme '" + c.scheme + "' cannot run advection-diffusion test " + e.name);
            break;
        case TestKind::Swe:
            if (!is_swe_scheme(c.scheme))
                throw ConfigError("scheme '" + c.scheme + "' cannot run shallow water test " + e.name);
            if (in.epsilon && std::isfinite(*in.epsilon))
                throw ConfigError("epsilon belongs to the relaxation tests");
            break;
        case TestKind::Relax:
            if (!is_relax_scheme(c.scheme))
                throw ConfigError("scheme '" + c.scheme + "' cannot run relaxation test " + e.name);
            if (!std::isfinite(*c.epsilon) && *c.froude_scaling)
                throw ConfigError("froude_scaling needs a finite epsilon");
            if (*c.froude_scaling && c.scheme != "slimexh_ap")
                throw ConfigError("froude_scaling runs with slimexh_ap only");
            if (*c.froude_scaling && !make_tableau(c.tableau).stiffly_accurate())
                throw ConfigError("froude_scaling needs a stiffly accurate tableau");
            break;
    }
    return c;
}

RunReport run(const RunConfig& cfg) {
    RunReport rep;
    rep.config = resolve(cfg);
    const RunConfig& c = rep.config;
    const CatalogEntry& e = find_test(c.test_case);

    if (e.kind == TestKind::AdvDiff) {
        const AdvDiffProblem p = advdiff_problem(e, c);
        AdvDiffResult r = run_advdiff(p);
        rep.n_steps = p.n_steps;
        rep.dt = p.t_final / p.n_steps;
        rep.q = r.q;
        rep.history = r.history;
        rep.warnings = r.warnings;
        const ScalarField ex = ScalarField::sample(p.grid, [&](double x) { return p.exact(x, p.t_final); });
        const Errors er = error_norms(r.q - ex);
        rep.has_error = true;
        rep.l1 = er.l1;
        rep.l2 = er.l2;
        rep.linf = er.linf;
        rep.x = p.grid.centers();
        if (!c.output_dir.empty()) {
            const std::string tag = tag_of(c, rep.n_steps);
            std::ofstream os = open_csv(c.output_dir, "solution_" + tag + ".csv", rep.files);
            os << "x,q,q_exact\n";
            for (int i = 0; i < p.grid.n_cells; ++i) os << rep.x[i] << ',' << r.q.v[i] << ',' << ex.v[i] << '\n';
            std::ofstream hs = open_csv(c.output_dir, "history_" + tag + ".csv", rep.files);
            hs << "step,time,L2,Linf,mass\n";
            for (const StepRecord& h : r.history)
                hs << h.step << ',' << h.time << ',' << h.l2 << ',' << h.linf << ',' << h.mass << '\n';
        }
        return rep;
    }

    const Grid1D g = make_grid(e, c.n_cells);
    const SWEState init = initial_state(e, g);
    SweRun sr;
    sr.scheme = (c.scheme == "slimex" || c.scheme == "slimex_ap") ? SweScheme::SLIMEX : SweScheme::SLIMEXH;
    sr.tb = make_tableau(c.tableau);
    sr.opt = swe_options(e, c);
    sr.t_final = *c.t_final;
    if (c.n_steps) {
        sr.n_steps = *c.n_steps;
    } else if (e.kind == TestKind::Relax && *c.froude_scaling) {
        // The gravity speed is O(1/Fr); the step follows the advective speed.
        sr.n_steps = steps_for_cfl(init, *c.cfl, sr.t_final, 0.0);
    } else {
        sr.n_steps = steps_for_cfl(init, *c.cfl, sr.t_final, kGravity);
    }
    SweResult r = run_swe(init, sr);
    rep.n_steps = r.steps;
    rep.dt = r.dt;
    rep.state = r.state;
    rep.diagnostics = r.rows;
    rep.mass_drift = r.mass_drift_rel;
    rep.x = g.centers();
    if (auto ex = swe_oracle(e, g, sr.t_final)) {
        const ScalarField& got = e.error_field == "V" ? r.state.V : r.state.h;
        const Errors er = error_norms(got - *ex);
        rep.has_error = true;
        rep.l1 = er.l1;
        rep.l2 = er.l2;
        rep.linf = er.linf;
    }
    if (!c.output_dir.empty()) {
        const std::string tag = tag_of(c, rep.n_steps);
        std::ofstream os = open_csv(c.output_dir, "solution_" + tag + ".csv", rep.files);
        write_state_csv(os, r.state);
        std::ofstream ds = open_csv(c.output_dir, "diagnostics_" + tag + ".csv", rep.files);
        write_diagnostics_csv(ds, r.rows, e.kind == TestKind::Relax);
    }
    return rep;
}

std::vector<double> observed_orders(const std::vector<double>& errors, const std::vector<double>& ratios) {
    if (ratios.size() + 1 != errors.size()) throw ConfigError("need one refinement ratio per level pair");
    std::vector<double> out;
    for (std::size_t k = 0; k + 1 < errors.size(); ++k)
        out.push_back(std::log(errors[k] / errors[k + 1]) / std::log(ratios[k]));
    return out;
}

OrderTable converge(const RunConfig& base_in, const ConvergenceSpec& spec) {
    const RunConfig base = resolve(base_in);
    const CatalogEntry& e = find_test(base.test_case);
    OrderTable t;
    t.test_case = base.test_case;
    t.scheme = base.scheme;
    t.tableau = base.tableau;
    t.norm = e.norm;
    if (e.norm.empty()) throw ConfigError(e.name + " has no error measure for a convergence study");

    std::vector<RunConfig> levels;
    if (spec.kind == Refinement::CflList) {
        const std::size_t n = !spec.steps_list.empty() ? spec.steps_list.size() : spec.cfl_list.size();
        if (n < 2) throw ConfigError("a CFL sweep needs at least two entries");
        for (std::size_t k = 0; k < n; ++k) {
            RunConfig c = base;
            c.cfl.reset();
            c.n_steps.reset();
            if (!spec.steps_list.empty())
                c.n_steps = spec.steps_list[k];
            else
                c.cfl = spec.cfl_list[k];
            levels.push_back(c);
        }
    } else {
        if (spec.levels < 2) throw ConfigError("a convergence study needs at least two levels");
        RunConfig c = base;
        for (int k = 0; k < spec.levels; ++k) {
            levels.push_back(c);
            if (spec.kind == Refinement::HalveDx) c.n_cells *= 2;
            if (c.n_steps && (spec.kind == Refinement::HalveDt || spec.kind == Refinement::HalveDx)) *c.n_steps *= 2;
            if (c.cfl && spec.kind == Refinement::HalveDt) *c.cfl *= 0.5;
        }
    }
    for (RunConfig& c : levels) c.output_dir.clear();

    // Temporal studies without a time-exact oracle use a run with 16 times the finest step count.
    const bool temporal = spec.kind != Refinement::HalveDx;
    const bool self_reference = temporal && e.kind != TestKind::AdvDiff;
    std::vector<RunReport> reports;
    for (const RunConfig& c : levels) reports.push_back(run(c));
    std::optional<RunReport> ref;
    if (self_reference) {
        RunConfig rc = levels.back();
        rc.cfl.reset();
        rc.n_steps = reports.back().n_steps * 16;
        ref = run(rc);
    }
    auto pick = [&](const RunReport& r) { return t.norm == "l1" ? r.l1 : t.norm == "l2" ? r.l2 : r.linf; };
    std::vector<double> errs, ratios;
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const RunReport& r = reports[k];
        double err;
        if (ref) {
            const ScalarField& a = e.error_field == "V" ? r.state.V : r.state.h;
            const ScalarField& b = e.error_field == "V" ? ref->state.V : ref->state.h;
            const Errors er = error_norms(a - b);
            err = t.norm == "l1" ? er.l1 : t.norm == "l2" ? er.l2 : er.linf;
        } else {
            if (!r.has_error) throw ConfigError(e.name + " has no oracle for this refinement");
            err = pick(r);
        }
        errs.push_back(err);
        ConvergenceRow row;
        row.n_cells = r.config.n_cells;
        row.n_steps = r.n_steps;
        row.cfl = r.config.cfl.value_or(0.0);
        row.dt = r.dt;
        row.error = err;
        t.rows.push_back(row);
        if (k > 0) {
            const ConvergenceRow& prev = t.rows[k - 1];
            ratios.push_back(temporal ? prev.dt / row.dt
                                      : static_cast<double>(row.n_cells) / static_cast<double>(prev.n_cells));
        }
    }
    const std::vector<double> ord = observed_orders(errs, ratios);
    for (std::size_t k = 0; k < ord.size(); ++k) t.rows[k + 1].order = ord[k];

    const std::string& dir = base.output_dir;
    if (!dir.empty()) {
        std::ofstream os = open_csv(dir, "orders_" + t.test_case + '_' + t.scheme + '_' + t.tableau + ".csv", t.files);
        write_orders_csv(os, t);
    }
    return t;
}

void write_orders_csv(std::ostream& os, const OrderTable& t) {
    os.precision(17);
    os << "n_cells,n_steps,cfl,dt,error_" << t.norm << ",order\n";
    for (const ConvergenceRow& r : t.rows) {
        os << r.n_cells << ',' << r.n_steps << ',' << r.cfl << ',' << r.dt << ',' << r.error << ',';
        if (r.order) os << *r.order;
        os << '\n';
    }
}

std::string output_root(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("SLIMEX_OUTPUT_DIR")) return env;
    return "";
}

}  // namespace slimex
