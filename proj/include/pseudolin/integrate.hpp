#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "pseudolin/grid.hpp"
#include "pseudolin/system.hpp"

namespace pseudolin {

enum class TrajectoryStatus {
    Completed,        ///< reached the requested horizon under local error control
    BlewUp,           ///< solution norm escaped (finite-time blow-up detected)
    ToleranceFailure, ///< step collapsed without norm growth (stiffness, not escape)
};

struct IntegrationConfig {
    double rtol = 1e-8;
    double atol = 1e-10;
    /// Minimal step; 0 means 1e-12 * (T - t0).
    double h_min = 0.0;
    /// Norm threshold max(|phi|,|psi|) above which the run is classified a blow-up.
    double blowup_norm = 1e8;
    long max_steps = 10'000'000;
};

/// Dense-output data for one accepted step [t_left, t_left + h]:
/// quartic interpolant c1 + th*(c2 + (1-th)*(c3 + th*(c4 + (1-th)*c5))), th in [0,1].
struct DenseSegment {
    double t_left, h;
    std::array<double, 5> cphi, cpsi;
};

/// Adaptive numerical solution (phi(t), psi(t)) with dense output.
/// nodes are the accepted step times (strictly increasing, nodes[0] = t0);
/// stored values are finite; the interpolant collocates the nodes exactly.
struct Trajectory {
    double t0 = 0.0, t_end = 0.0; // requested span
    std::vector<double> nodes;
    std::vector<double> phi, psi;
    std::vector<DenseSegment> segments; // nodes.size() - 1
    TrajectoryStatus status = TrajectoryStatus::Completed;
    /// Blow-up time estimate: last accepted time plus extrapolated escape time.
    double t_blow = 0.0;
    long n_steps = 0, n_rejected = 0;

    /// Interpolated (phi, psi) at t; throws OutOfRange outside [t0, last node].
    std::pair<double, double> eval(double t) const;

    double last_time() const { return nodes.back(); }
    double max_abs_phi() const;
    double max_abs_psi() const;
};

/// Integrate the system from (phi0, psi0) over [t_start, t_final] with an
/// embedded explicit 5(4) pair and free 4th-order dense output.
///
/// Completed: the horizon was reached with the local error criterion holding
/// at every accepted step. BlewUp: the norm exceeded cfg.blowup_norm, or the
/// step collapsed below h_min while the norm grew over the last 10 accepted
/// steps. ToleranceFailure: the step collapsed (or budgets ran out) without
/// norm growth.
Trajectory integrate(const PseudoLinearSystem& sys, double phi0, double psi0,
                     double t_start, double t_final,
                     const IntegrationConfig& cfg = {});

/// Free-function form of Trajectory::eval.
std::pair<double, double> dense_eval(const Trajectory& traj, double t);

/// Trajectory nodes enriched so that no spacing exceeds (t_end - t0)/512;
/// the shared grid every quadrature pass along the trajectory uses.
std::vector<double> shared_grid(const Trajectory& traj);

/// phi and psi sampled on the given (sub)grid of the trajectory's domain.
std::pair<GridFunction, GridFunction> sample_trajectory(const Trajectory& traj,
                                                        const std::vector<double>& nodes);

} // namespace pseudolin
