#include "pseudolin/system.hpp"

#include <cmath>

namespace pseudolin {

namespace {

Field zero_field() {
    return [](double, double, double) { return 0.0; };
}

double checked(const CoefficientField& c, double t, double u, double v) {
    const double x = c.eval(t, u, v);
    if (!std::isfinite(x)) throw NonFiniteCoefficient(c.label, t, u, v);
    return x;
}

} // namespace

PseudoLinearSystem::PseudoLinearSystem(Field P, Field Q, Field R, Field S, Field F, Field G,
                                       double t0, bool homogeneous)
    : P_{std::move(P), "P"},
      Q_{std::move(Q), "Q"},
      R_{std::move(R), "R"},
      S_{std::move(S), "S"},
      F_{F ? std::move(F) : zero_field(), "F"},
      G_{G ? std::move(G) : zero_field(), "G"},
      t0_(t0),
      homogeneous_(homogeneous) {}

PseudoLinearSystem PseudoLinearSystem::homogeneous_system(Field P, Field Q, Field R, Field S,
                                                          double t0) {
    return PseudoLinearSystem(std::move(P), std::move(Q), std::move(R), std::move(S),
                              zero_field(), zero_field(), t0, /*homogeneous=*/true);
}

CoefficientSample eval_coefficients(const PseudoLinearSystem& sys, double t, double u,
                                    double v) {
    CoefficientSample out;
    out.p = checked(sys.P(), t, u, v);
    out.q = checked(sys.Q(), t, u, v);
    out.r = checked(sys.R(), t, u, v);
    out.s = checked(sys.S(), t, u, v);
    out.f = checked(sys.F(), t, u, v);
    out.g = checked(sys.G(), t, u, v);
    out.b = out.p - out.s;
    return out;
}

PseudoLinearSystem from_second_order(const SecondOrderForm& form) {
    const bool homogeneous = !form.forcing;
    return PseudoLinearSystem(
        zero_field(), [](double, double, double) { return 1.0; }, form.coeff_phi,
        form.coeff_dphi, zero_field(), form.forcing ? form.forcing : zero_field(), form.t0,
        homogeneous);
}

double sinc(double u) {
    if (std::abs(u) < 1e-4) {
        const double u2 = u * u;
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
    }
    return std::sin(u) / u;
}

} // namespace pseudolin
