#pragma once

#include <optional>
#include <vector>

#include "pseudolin/envelope.hpp"
#include "pseudolin/grid.hpp"
#include "pseudolin/integrate.hpp"
#include "pseudolin/system.hpp"

namespace pseudolin {

/// Which form of the inhomogeneous source term of v1/v2 to evaluate.
/// Derivation: the inner source integral carries the damping weight
///   int_{t0}^{tau} exp{int_s^tau S} G(s) ds  (and symmetrically for v2);
/// UnweightedFull drops the weight and integrates the source to t instead of
/// tau. Only the Derivation form makes the Volterra identity residual vanish
/// on damped forced systems; the variant is kept for the diagnostic tests.
enum class SourceTermForm { Derivation, UnweightedFull };

/// Second-kind Volterra representation of a trajectory:
///   phi(t) = v1(t) + int_{t0}^t K1(t,zeta) phi(zeta) dzeta
///   psi(t) = v2(t) + int_{t0}^t K2(t,zeta) psi(zeta) dzeta
/// with
///   v1 = phi0 e^{IP(t)} + psi0 int e^{IP(t)-IP(tau)+IS(tau)} q(tau) dtau
///        + int e^{IP(t)-IP(tau)} [f(tau) + q(tau) int_{t0}^tau e^{IS(tau)-IS(s)} g(s) ds] dtau
///   K1(t,zeta) = r(zeta) int_zeta^t e^{IP(t)-IP(tau)+IS(tau)-IS(zeta)} q(tau) dtau
/// (v2/K2 symmetric with P<->S, Q<->R, F<->G), all coefficients frozen along
/// the trajectory and IP/IS their cumulative integrals.
///
/// Kernel tables are materialized only for grids of at most 4096 nodes; rows
/// are always available through kernel_row (O(N) per row).
struct VolterraData {
    std::vector<double> nodes;
    GridFunction v1, v2;
    GridFunction v1_alt, v2_alt; // UnweightedFull source variant, diagnostics

    // per-node data the kernel rows are built from
    std::vector<double> IP, IS;     // cumulative integrals of p, s along the trajectory
    std::vector<double> q, r;       // Q, R along the trajectory
    std::vector<double> jq, jr;     // shifted running products for the kernel rows
    double shift1 = 0.0, shift2 = 0.0;
    std::optional<std::vector<std::vector<double>>> K1, K2; // lower-triangular

    bool overflow = false;

    /// Row i of kernel j (j = 1 or 2): values K_j(t_i, zeta_k) for k = 0..i.
    std::vector<double> kernel_row(int j, std::size_t i) const;
};

/// Evaluate v1, v2 and the kernel support data on the trajectory's shared grid.
VolterraData compute_volterra_data(const Trajectory& traj, const PseudoLinearSystem& sys);

/// Max over grid nodes of |phi - v1 - int K1 phi| and |psi - v2 - int K2 psi|.
std::pair<double, double> volterra_residual(const Trajectory& traj, const VolterraData& data,
                                            SourceTermForm form = SourceTermForm::Derivation);

/// A-priori bound data from time-only envelopes: m_j are grid suprema of the
/// envelope free terms, M_j of the envelope kernels, and
/// bound_j = m_j * exp{M_j (T - t0)}. log_bound_j stays finite when the
/// double value overflows (overflow_j set, bound_j = +inf rather than a panic).
struct VolterraBound {
    double m1 = 0.0, m2 = 0.0;
    double M1 = 0.0, M2 = 0.0;
    double bound1 = 0.0, bound2 = 0.0;
    double log_bound1 = 0.0, log_bound2 = 0.0;
    bool overflow1 = false, overflow2 = false;

    /// value <= bound_j, compared in log space so overflowed bounds stay usable.
    bool contains1(double value, double rel_tol = 1e-6) const;
    bool contains2(double value, double rel_tol = 1e-6) const;
};

/// Envelope analogue of compute_volterra_data on an arbitrary grid: the six
/// time-only envelopes play the coefficient roles and |phi0|, |psi0| the
/// initial values.
VolterraData envelope_volterra_data(const EnvelopeSet& env, double phi0, double psi0,
                                    const std::vector<double>& nodes);

/// Explicit a-priori bounds on |phi|, |psi| over [t0, T] under the envelope
/// hypotheses, from a uniform internal grid.
VolterraBound envelope_bounds(const EnvelopeSet& env, double phi0, double psi0,
                              double t0, double T);

/// Same, but on a caller-provided grid (used to compare kernels pointwise).
VolterraBound envelope_bounds_on_grid(const EnvelopeSet& env, double phi0, double psi0,
                                      const std::vector<double>& nodes);

} // namespace pseudolin
