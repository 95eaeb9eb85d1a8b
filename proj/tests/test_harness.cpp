#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "slimex/errors.hpp"
#include "slimex/harness.hpp"

using namespace slimex;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("config text is parsed") {
    const RunConfig c = parse_config(
        "# a comment\n"
        "test = rp2\n"
        "scheme = slimexh   # trailing comment\n"
        "tableau = sassp332\n"
        "nx = 200\n"
        "cfl = 2.5\n"
        "pressure_integral = kepler\n"
        "viscosity = false\n"
        "\n");
    CHECK(c.test_case == "rp2");
    CHECK(c.scheme == "slimexh");
    CHECK(c.tableau == "sassp332");
    CHECK(c.n_cells == 200);
    REQUIRE(c.cfl.has_value());
    CHECK(*c.cfl == 2.5);
    CHECK_FALSE(c.n_steps.has_value());
    CHECK(c.pressure_integral == "kepler");
    REQUIRE(c.viscosity.has_value());
    CHECK_FALSE(*c.viscosity);
}

TEST_CASE("bad config text is rejected") {
    CHECK_THROWS_AS(parse_config("colour = blue\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("nx 200\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("nx = many\n"), ConfigError);
    CHECK_THROWS_AS(load_config_file("/nonexistent/slimex.cfg"), ConfigError);
}

TEST_CASE("later settings override earlier ones") {
    RunConfig c = parse_config("test = test1\nnx = 100\n");
    apply_setting(c, "nx", "400");
    apply_setting(c, "scheme", "alg1");
    CHECK(c.n_cells == 400);
    CHECK(c.scheme == "alg1");
}

TEST_CASE("resolve fills catalog defaults") {
    RunConfig c;
    c.test_case = "rp1";
    const RunConfig r = resolve(c);
    CHECK(r.scheme == "slimexh");
    CHECK(r.tableau == "ssp3433");
    CHECK(r.n_cells == 400);
    REQUIRE(r.cfl.has_value());
    CHECK(*r.cfl == 3.0);
    CHECK(*r.t_final == 1.0);
}

TEST_CASE("invalid pairings are rejected") {
    auto bad = [](const std::string& text) { return resolve(parse_config(text)); };
    CHECK_THROWS_AS(bad("test = rp2\nscheme = alg2\n"), ConfigError);
    CHECK_THROWS_AS(bad("test = test1\nscheme = slimexh\n"), ConfigError);
    CHECK_THROWS_AS(bad("test = b1\nscheme = slimexh\n"), ConfigError);
    CHECK_THROWS_AS(bad("test = rp2\neps = 1e-3\n"), ConfigError);
    CHECK_THROWS_AS(bad("test = rp2\nnt = 10\ncfl = 2\n"), ConfigError);
    CHECK_THROWS_AS(bad("test = nowhere\n"), ConfigError);
    CHECK_THROWS_AS(bad("test = rp2\ntableau = rk4\n"), ConfigError);
    CHECK_THROWS_AS(bad("test = lowfroude\ntableau = ssp3433\n"), ConfigError);
    CHECK_THROWS_AS(bad("test = rp2\npressure_integral = simpson\n"), ConfigError);
    CHECK_THROWS_AS(bad("test = b1\neps = 0\n"), ConfigError);
    CHECK_NOTHROW(bad("test = b2\nscheme = slimex_ap\n"));
}

TEST_CASE("observed orders") {
    const std::vector<double> o = observed_orders({4e-2, 1e-2, 2.5e-3}, {2.0, 2.0});
    REQUIRE(o.size() == 2u);
    CHECK(o[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(o[1] == doctest::Approx(2.0).epsilon(1e-12));
    const std::vector<double> p = observed_orders({1.0, 0.125}, {2.0});
    CHECK(p[0] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("catalog entries") {
    const CatalogEntry& rp1 = find_test("rp1");
    REQUIRE(rp1.riemann.has_value());
    CHECK(rp1.riemann->hL == 1.5);
    CHECK(rp1.riemann->uL == -1.0);
    CHECK(rp1.riemann->hR == 1.0);
    CHECK(rp1.riemann->uR == 2.0);
    CHECK(rp1.t_final == 1.0);
    CHECK(rp1.x_left == -10.0);
    CHECK(rp1.x_right == 10.0);

    const CatalogEntry& b1 = find_test("b1");
    REQUIRE(b1.riemann.has_value());
    CHECK(b1.kind == TestKind::Relax);
    CHECK(b1.riemann->hL == 1.0);
    CHECK(b1.riemann->hR == 2.0);
    CHECK(b1.t_final == 0.3);
    CHECK(b1.epsilon == 1e-14);

    for (const char* name : {"test1", "test2", "test3", "swe_steady", "swe_gaussian", "rp1", "rp2", "b1", "b2",
                             "lowfroude"})
        CHECK_NOTHROW(find_test(name));
    std::ostringstream os;
    list_tests(os);
    CHECK(os.str().find("lowfroude") != std::string::npos);
}

TEST_CASE("output root precedence") {
    ::setenv("SLIMEX_OUTPUT_DIR", "/tmp/from_env", 1);
    CHECK(output_root("/tmp/flag") == "/tmp/flag");
    CHECK(output_root("") == "/tmp/from_env");
    ::unsetenv("SLIMEX_OUTPUT_DIR");
    CHECK(output_root("").empty());
}

TEST_CASE("identical runs write identical files") {
    const fs::path root = fs::temp_directory_path() / "slimex_harness_test";
    fs::remove_all(root);
    std::vector<std::string> contents[2];
    for (int k = 0; k < 2; ++k) {
        RunConfig c = parse_config("test = rp2\nnx = 80\ncfl = 2\ntableau = sassp332\n");
        c.output_dir = (root / std::to_string(k)).string();
        const RunReport r = run(c);
        REQUIRE(r.files.size() >= 2u);
        for (const std::string& f : r.files) contents[k].push_back(slurp(f));
        CHECK(r.mass_drift <= 1e-12);
    }
    REQUIRE(contents[0].size() == contents[1].size());
    for (std::size_t i = 0; i < contents[0].size(); ++i) {
        CHECK_FALSE(contents[0][i].empty());
        CHECK(contents[0][i] == contents[1][i]);
    }
    fs::remove_all(root);
}

TEST_CASE("a halving study reports orders") {
    RunConfig c = parse_config("test = test2\nscheme = alg2\ntableau = sp111\nnt = 4\n");
    ConvergenceSpec spec;
    spec.levels = 3;
    const OrderTable t = converge(c, spec);
    REQUIRE(t.rows.size() == 3u);
    CHECK_FALSE(t.rows[0].order.has_value());
    REQUIRE(t.rows[2].order.has_value());
    CHECK(*t.rows[2].order == doctest::Approx(1.0).epsilon(0.2));
    CHECK(t.rows[1].n_steps == 8);
    std::ostringstream os;
    write_orders_csv(os, t);
    CHECK(os.str().rfind("n_cells,n_steps,cfl,dt,error_l2,order\n", 0) == 0);
}
