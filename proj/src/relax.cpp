#include "slimex/relax.hpp"

#include <algorithm>
#include <cmath>

#include "slimex/errors.hpp"

namespace slimex {

SweOptions relax_options(const RelaxOptions& r, SweOptions base) {
    if (!(r.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    base.epsilon = r.epsilon;
    base.low_froude = r.froude_scaling;
    return base;
}

SWEState slimexh_ap_step(const SWEState& s, double dt, const ButcherPair& tb, const RelaxOptions& r,
                         const SweOptions& base, StepInfo* info) {
    if (r.froude_scaling) throw ConfigError("froude_scaling belongs to low_froude_step");
    return swe_imex_step(s, dt, tb, SweScheme::SLIMEXH, relax_options(r, base), info);
}

SWEState slimex_ap_step(const SWEState& s, double dt, const ButcherPair& tb, const RelaxOptions& r,
                        const SweOptions& base, StepInfo* info) {
    if (r.froude_scaling) throw ConfigError("froude_scaling belongs to low_froude_step");
    return swe_imex_step(s, dt, tb, SweScheme::SLIMEX, relax_options(r, base), info);
}

SWEState low_froude_step(const SWEState& s, double dt, const ButcherPair& tb, const RelaxOptions& r,
                         const SweOptions& base, StepInfo* info) {
    if (!r.froude_scaling) throw ConfigError("low_froude_step needs froude_scaling");
    // The diffusive limit is only reached when the last stage is the new state.
    if (!tb.stiffly_accurate()) throw ConfigError("low_froude_step needs a stiffly accurate tableau");
    return swe_imex_step(s, dt, tb, SweScheme::SLIMEXH, relax_options(r, base), info);
}

double equilibrium_defect(const SWEState& s) {
    const ScalarField u = s.velocity();
    double d = 0.0;
    for (int i = 0; i < u.size(); ++i) d = std::max(d, std::abs(u.v[i] - 0.5 * s.h.v[i]));
    return d;
}

}  // namespace slimex
