#pragma once

#include <functional>
#include <string>
#include <utility>

#include "pseudolin/errors.hpp"

namespace pseudolin {

/// Scalar coefficient of the state-dependent linear form: (t, u, v) -> real.
using Field = std::function<double(double t, double u, double v)>;

/// One named coefficient of the system. The callable must return finite values
/// for every t >= t0 and all finite (u, v) the caller supplies; smoothness in
/// (u, v) (needed for uniqueness of solutions) is a caller obligation and is
/// not verified here.
struct CoefficientField {
    Field eval;
    std::string label; // "P".."G"
};

/// Pointwise evaluation of all six coefficients, plus b = p - s.
struct CoefficientSample {
    double p, q, r, s, f, g;
    double b;
};

/// First-order 2x2 system in state-dependent linear form:
///   phi' = P(t,phi,psi)*phi + Q(t,phi,psi)*psi + F(t,phi,psi)
///   psi' = R(t,phi,psi)*phi + S(t,phi,psi)*psi + G(t,phi,psi),  t >= t0.
///
/// The homogeneous flag asserts F and G are identically zero (the factory
/// below guarantees it); several certification routes apply only then.
class PseudoLinearSystem {
public:
    PseudoLinearSystem(Field P, Field Q, Field R, Field S, Field F, Field G,
                       double t0, bool homogeneous = false);

    /// Homogeneous variant: F and G are the literal zero field.
    static PseudoLinearSystem homogeneous_system(Field P, Field Q, Field R, Field S,
                                                 double t0);

    double t0() const { return t0_; }
    bool homogeneous() const { return homogeneous_; }

    const CoefficientField& P() const { return P_; }
    const CoefficientField& Q() const { return Q_; }
    const CoefficientField& R() const { return R_; }
    const CoefficientField& S() const { return S_; }
    const CoefficientField& F() const { return F_; }
    const CoefficientField& G() const { return G_; }

private:
    CoefficientField P_, Q_, R_, S_, F_, G_;
    double t0_;
    bool homogeneous_;
};

/// Evaluate all six coefficients at (t, u, v). Throws NonFiniteCoefficient
/// naming the offending field if any value is NaN or infinite.
CoefficientSample eval_coefficients(const PseudoLinearSystem& sys,
                                    double t, double u, double v);

/// Factored right-hand side of a scalar second-order equation
///   phi'' = A(t,phi,phi')*phi + B(t,phi,phi')*phi' + C(t,phi,phi').
/// The factorization into coefficient-of-phi / coefficient-of-phi' / remainder
/// is a modeling choice the caller makes (e.g. sin(phi) = (sin(phi)/phi)*phi,
/// with the removable singularity handled by the supplied callable).
struct SecondOrderForm {
    Field coeff_phi;            // A
    Field coeff_dphi;           // B
    Field forcing;              // C; empty callable means identically zero
    double t0 = 0.0;
};

/// Standard reduction phi' = psi: yields P = 0, Q = 1, R = A, S = B, F = 0, G = C.
PseudoLinearSystem from_second_order(const SecondOrderForm& form);

/// sin(u)/u with the removable singularity patched by series for |u| < 1e-4.
double sinc(double u);

} // namespace pseudolin
