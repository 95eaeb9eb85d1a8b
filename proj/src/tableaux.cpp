#include "slimex/tableaux.hpp"

#include <cmath>
#include <sstream>

#include "slimex/errors.hpp"

namespace slimex {

namespace {

std::vector<double> row_sums(const std::vector<std::vector<double>>& m) {
    std::vector<double> out;
    for (const auto& r : m) {
        double acc = 0.0;
        for (double v : r) acc += v;
        out.push_back(acc);
    }
    return out;
}

ButcherPair finish(ButcherPair tb) {
    tb.s = static_cast<int>(tb.b.size());
    tb.c_tilde = row_sums(tb.a_tilde);
    tb.c = row_sums(tb.a);
    return tb;
}

}  // namespace

bool ButcherPair::stiffly_accurate(double tol) const {
    for (int j = 0; j < s; ++j)
        if (std::abs(a[s - 1][j] - b[j]) > tol) return false;
    return true;
}

ButcherPair make_tableau(SchemeId id) {
    ButcherPair tb;
    tb.scheme_id = id;
    switch (id) {
        case SchemeId::SP111:
            tb.a_tilde = {{0.0}};
            tb.a = {{1.0}};
            tb.b = {1.0};
            tb.order_p = 1;
            break;
        case SchemeId::SASSP332:
            tb.a_tilde = {{0.0, 0.0, 0.0}, {0.5, 0.0, 0.0}, {0.5, 0.5, 0.0}};
            tb.a = {{0.25, 0.0, 0.0}, {0.0, 0.25, 0.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
            tb.b = {1.0 / 3, 1.0 / 3, 1.0 / 3};
            tb.order_p = 2;
            break;
        case SchemeId::SSP3433: {
            const double al = 0.241694, de = 0.060424, et = 0.129153;
            tb.a_tilde = {{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 1, 0, 0}, {0, 0.25, 0.25, 0}};
            tb.a = {{al, 0, 0, 0},
                    {-al, al, 0, 0},
                    {0, 1 - al, al, 0},
                    {de, et, 0.5 - de - et - al, al}};
            tb.b = {0.0, 1.0 / 6, 1.0 / 6, 2.0 / 3};
            tb.order_p = 3;
            break;
        }
    }
    return finish(tb);
}

ButcherPair make_tableau(const std::string& name) {
    if (name == "sp111") return make_tableau(SchemeId::SP111);
    if (name == "sassp332") return make_tableau(SchemeId::SASSP332);
    if (name == "ssp3433") return make_tableau(SchemeId::SSP3433);
    throw ConfigError("unknown tableau '" + name + "' (expected sp111, sassp332, ssp3433)");
}

std::string scheme_name(SchemeId id) {
    switch (id) {
        case SchemeId::SP111: return "sp111";
        case SchemeId::SASSP332: return "sassp332";
        case SchemeId::SSP3433: return "ssp3433";
    }
    return "?";
}

std::vector<SchemeId> all_schemes() {
    return {SchemeId::SP111, SchemeId::SASSP332, SchemeId::SSP3433};
}

std::vector<Violation> validate_tableau(const ButcherPair& tb, double tol) {
    std::vector<Violation> out;
    const int s = tb.s;
    auto square = [s](const std::vector<std::vector<double>>& m) {
        if (static_cast<int>(m.size()) != s) return false;
        for (const auto& r : m)
            if (static_cast<int>(r.size()) != s) return false;
        return true;
    };
    if (s < 1 || !square(tb.a_tilde) || !square(tb.a) || static_cast<int>(tb.b.size()) != s ||
        static_cast<int>(tb.c.size()) != s || static_cast<int>(tb.c_tilde.size()) != s) {
        out.push_back({"inconsistent dimensions", 0.0});
        return out;
    }

    double worst = 0.0;
    for (int i = 0; i < s; ++i)
        for (int j = i; j < s; ++j) worst = std::max(worst, std::abs(tb.a_tilde[i][j]));
    if (worst > 0.0) out.push_back({"explicit matrix not strictly lower triangular", worst});

    worst = 0.0;
    for (int i = 0; i < s; ++i)
        for (int j = i + 1; j < s; ++j) worst = std::max(worst, std::abs(tb.a[i][j]));
    if (worst > 0.0) out.push_back({"implicit matrix not lower triangular", worst});

    double sb = 0.0;
    for (double v : tb.b) sb += v;
    if (std::abs(sb - 1.0) > tol) {
        std::ostringstream os;
        os << "sum b = " << sb;
        out.push_back({os.str(), sb - 1.0});
    }

    auto check_rows = [&](const std::vector<std::vector<double>>& m, const std::vector<double>& c,
                          const char* label) {
        double w = 0.0;
        for (int i = 0; i < s; ++i) {
            double acc = 0.0;
            for (int j = 0; j < s; ++j) acc += m[i][j];
            w = std::max(w, std::abs(acc - c[i]));
        }
        if (w > tol) out.push_back({std::string(label) + " row sums differ from abscissae", w});
    };
    check_rows(tb.a_tilde, tb.c_tilde, "explicit");
    check_rows(tb.a, tb.c, "implicit");
    return out;
}

}  // namespace slimex
