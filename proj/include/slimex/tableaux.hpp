#pragma once

#include <string>
#include <vector>

namespace slimex {

enum class SchemeId { SP111, SASSP332, SSP3433 };

// Double Butcher tableau. Explicit and implicit parts share the weights b.
struct ButcherPair {
    int s = 0;
    std::vector<std::vector<double>> a_tilde;
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    std::vector<double> c_tilde;
    std::vector<double> c;
    int order_p = 0;
    SchemeId scheme_id = SchemeId::SP111;

    bool stiffly_accurate(double tol = 1e-14) const;
};

ButcherPair make_tableau(SchemeId id);
ButcherPair make_tableau(const std::string& name);  // "sp111", "sassp332", "ssp3433"

std::string scheme_name(SchemeId id);
std::vector<SchemeId> all_schemes();

struct Violation {
    std::string what;
    double residual = 0.0;
};

std::vector<Violation> validate_tableau(const ButcherPair& tb, double tol = 1e-14);

}  // namespace slimex
