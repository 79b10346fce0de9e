#pragma once

#include "pseudolin/grid.hpp"

namespace pseudolin {

/// Time-only dominating functions for the six coefficients, plus the
/// locally integrable bracket [B1, B2] for B = P - S.
///
/// Intended reading (checked by sampling, module criteria):
///   P(t,u,v) <= P0(t), S(t,u,v) <= S0(t)          (one-sided)
///   |Q| <= Q0, |R| <= R0, |F| <= F0, |G| <= G0    (two-sided; Q0,R0,F0,G0 >= 0)
///   B1(t) <= B(t,u,v) <= B2(t)                    (positivity criterion only)
struct EnvelopeSet {
    TimeFn P0, Q0, R0, S0, F0, G0;
    TimeFn B1, B2;

    /// All-zero envelope set (useful as a starting point).
    static EnvelopeSet zero();
};

} // namespace pseudolin
