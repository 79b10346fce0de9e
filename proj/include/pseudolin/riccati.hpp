#pragma once

#include <utility>
#include <vector>

#include "pseudolin/grid.hpp"
#include "pseudolin/integrate.hpp"
#include "pseudolin/system.hpp"

namespace pseudolin {

enum class RiccatiKind { Y, Z };

/// Ratio-equation solution along a trajectory, sampled on a prefix of the
/// trajectory's shared grid. For kind Y the equation is
///   y' + Q y^2 + B y - R = 0,  B = P - S,  coefficients frozen along (phi, psi),
/// and h_values holds H(t) = Q y + B; for kind Z it is
///   z' + R z^2 - B z - Q = 0 with h_values L(t) = R z - B.
/// A finite-time pole of y/z is not an error: the trace is truncated there and
/// escaped/t_escape record it (for ratio traces it marks a zero of phi or psi).
struct RiccatiTrace {
    RiccatiKind kind = RiccatiKind::Y;
    std::vector<double> nodes;
    std::vector<double> values;
    std::vector<double> h_values;
    double init = 0.0;
    bool escaped = false;
    double t_escape = 0.0;
};

/// Integrate the ratio equation along traj from value init at the trajectory
/// start, with the same embedded pair as trajectories; escape threshold 1e10.
RiccatiTrace solve_riccati(const Trajectory& traj, const PseudoLinearSystem& sys,
                           RiccatiKind kind, double init,
                           const IntegrationConfig& cfg = {});

/// Rebuild (phi, psi) from the ratio representation:
///   kind Y: phi(t) = phi(t0) exp{int [P(tau) + y(tau) Q(tau)] dtau}, psi = y phi
///   kind Z: psi(t) = psi(t0) exp{int [S(tau) + z(tau) R(tau)] dtau}, phi = z psi.
/// Throws InitMismatch when trace.init differs from the component ratio at t0
/// by more than 1e-12.
std::pair<GridFunction, GridFunction>
reconstruct_solution(const Trajectory& traj, const RiccatiTrace& trace,
                     const PseudoLinearSystem& sys);

struct LinearFormReport {
    double max_abs_deviation = 0.0;
    GridFunction rhs; // the linear-form right side on the trace's nodes
};

/// Re-derive the trace from its linear-form representation
///   y(t) = exp{-int H}[y(t0) + int exp{int_{t0}^{tau} H} R(tau) dtau]
/// (Q in place of R and L in place of H for kind Z) with H/L frozen from the
/// trace, and report the maximum deviation from the stored values.
LinearFormReport linear_form_check(const RiccatiTrace& trace, const Trajectory& traj,
                                   const PseudoLinearSystem& sys);

/// Coefficients of one scalar Riccati equation y' + f y^2 + g y + h = 0.
struct RiccatiCoefficients {
    TimeFn f, g, h;
};

/// Hypothesis evaluation for the Riccati comparison condition between the
/// pair of equations (1) y' + f1 y^2 + g1 y + h1 = 0 and (2) likewise. The
/// differential inequalities eta_k' + f_k eta_k^2 + g_k eta_k + h_k >= 0 are
/// checked with eta' taken by grid differentiation.
struct ComparisonReport {
    double f1_min = 0.0;               // min f1 over the grid
    bool f1_nonneg = false;
    double eta1_residual_min = 0.0;    // min of eta' + f eta^2 + g eta + h
    double eta2_residual_min = 0.0;
    bool eta1_ok = false, eta2_ok = false;
    /// min over the grid of
    ///   gamma - y2(t0) + int exp{int [f1 (eta1+eta2) + g1]} *
    ///     [(f2-f1)^2 y2^2 + (g2-g1) y2 + (h2-h1)] dtau
    /// as printed in the source condition; >= 0 means the condition holds.
    double expression_min = 0.0;
    /// Same with the alternate reading (f2-f1) * y2^2 of the first factor.
    double expression_min_alt = 0.0;

    bool holds() const { return f1_nonneg && expression_min >= 0.0; }
};

/// gamma must lie in [y2(t0), eta1(t0)] (GammaOutOfRange otherwise); y2 is the
/// caller-verified solution of equation (2); all grid functions share nodes.
ComparisonReport theorem21_condition(const RiccatiCoefficients& pair1,
                                     const RiccatiCoefficients& pair2,
                                     const GridFunction& y2,
                                     const GridFunction& eta1,
                                     const GridFunction& eta2,
                                     double gamma);

} // namespace pseudolin
