#include "pseudolin/integrate.hpp"

#include <algorithm>
#include <cmath>

#include "rk_core.hpp"

namespace pseudolin {

namespace {

constexpr std::size_t kGridDivisor = 512;

// Raw right-hand side of the system; non-finite evaluations reject the step
// instead of throwing (expected near blow-up).
struct SystemRhs {
    const PseudoLinearSystem& sys;
    bool operator()(double t, const detail::State<2>& y, detail::State<2>& dydt) const {
        const double u = y[0], v = y[1];
        const double p = sys.P().eval(t, u, v), q = sys.Q().eval(t, u, v);
        const double r = sys.R().eval(t, u, v), s = sys.S().eval(t, u, v);
        const double f = sys.F().eval(t, u, v), g = sys.G().eval(t, u, v);
        dydt[0] = p * u + q * v + f;
        dydt[1] = r * u + s * v + g;
        return std::isfinite(dydt[0]) && std::isfinite(dydt[1]);
    }
};

} // namespace

std::pair<double, double> Trajectory::eval(double t) const {
    const double slack = 1e-12 * std::max(1.0, std::abs(nodes.back() - nodes.front()));
    if (t < nodes.front() - slack || t > nodes.back() + slack) throw OutOfRange(t);
    if (segments.empty()) return {phi.front(), psi.front()};
    t = std::clamp(t, nodes.front(), nodes.back());
    // segment index: the interval [nodes[i], nodes[i+1]] containing t
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
    std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(
        0, std::distance(nodes.begin(), it) - 1));
    i = std::min(i, segments.size() - 1);
    const DenseSegment& seg = segments[i];
    const double theta = (t - seg.t_left) / seg.h;
    const double th1 = 1.0 - theta;
    auto interp = [&](const std::array<double, 5>& c) {
        return c[0] + theta * (c[1] + th1 * (c[2] + theta * (c[3] + th1 * c[4])));
    };
    if (t == nodes[i]) return {phi[i], psi[i]};
    if (t == nodes[i + 1]) return {phi[i + 1], psi[i + 1]};
    return {interp(seg.cphi), interp(seg.cpsi)};
}

double Trajectory::max_abs_phi() const {
    double m = 0.0;
    for (double x : phi) m = std::max(m, std::abs(x));
    return m;
}

double Trajectory::max_abs_psi() const {
    double m = 0.0;
    for (double x : psi) m = std::max(m, std::abs(x));
    return m;
}

Trajectory integrate(const PseudoLinearSystem& sys, double phi0, double psi0,
                     double t_start, double t_final, const IntegrationConfig& cfg) {
    if (!(t_final > t_start)) throw Error("integrate: need t_final > t_start");
    if (t_start < sys.t0()) throw Error("integrate: span starts before the system origin");
    if (!std::isfinite(phi0) || !std::isfinite(psi0))
        throw Error("integrate: initial values must be finite");

    Trajectory traj;
    traj.t0 = t_start;
    traj.t_end = t_final;
    traj.nodes.push_back(t_start);
    traj.phi.push_back(phi0);
    traj.psi.push_back(psi0);

    detail::RunOptions opt;
    opt.rtol = cfg.rtol;
    opt.atol = cfg.atol;
    opt.h_min = cfg.h_min;
    opt.escape_norm = cfg.blowup_norm;
    opt.max_steps = cfg.max_steps;

    auto on_accept = [&](double t_left, double h, const detail::State<2>&,
                         const detail::State<2>& ynew,
                         const std::array<detail::State<2>, 5>& rcont) {
        DenseSegment seg;
        seg.t_left = t_left;
        seg.h = h;
        for (int c = 0; c < 5; ++c) {
            seg.cphi[c] = rcont[c][0];
            seg.cpsi[c] = rcont[c][1];
        }
        traj.segments.push_back(seg);
        traj.nodes.push_back(t_left + h);
        traj.phi.push_back(ynew[0]);
        traj.psi.push_back(ynew[1]);
    };

    const auto outcome = detail::run_dopri5<2>(SystemRhs{sys}, {phi0, psi0}, t_start,
                                               t_final, opt, on_accept);
    traj.n_steps = outcome.n_accepted;
    traj.n_rejected = outcome.n_rejected;
    switch (outcome.status) {
        case detail::RunStatus::ReachedEnd:
            traj.status = TrajectoryStatus::Completed;
            break;
        case detail::RunStatus::Escaped:
            traj.status = TrajectoryStatus::BlewUp;
            traj.t_blow = outcome.t_escape;
            break;
        case detail::RunStatus::StepCollapse:
        case detail::RunStatus::BudgetExhausted:
            traj.status = TrajectoryStatus::ToleranceFailure;
            break;
    }
    if (traj.nodes.size() < 2) {
        // no step could be accepted at all; keep a degenerate but valid record
        traj.status = TrajectoryStatus::ToleranceFailure;
    }
    return traj;
}

std::pair<double, double> dense_eval(const Trajectory& traj, double t) {
    return traj.eval(t);
}

std::vector<double> shared_grid(const Trajectory& traj) {
    const double span = traj.t_end - traj.t0;
    return enrich_nodes(traj.nodes, span / static_cast<double>(kGridDivisor));
}

std::pair<GridFunction, GridFunction> sample_trajectory(const Trajectory& traj,
                                                        const std::vector<double>& nodes) {
    GridFunction phi, psi;
    phi.nodes = nodes;
    psi.nodes = nodes;
    phi.values.reserve(nodes.size());
    psi.values.reserve(nodes.size());
    for (double t : nodes) {
        const auto [u, v] = traj.eval(t);
        phi.values.push_back(u);
        psi.values.push_back(v);
    }
    return {std::move(phi), std::move(psi)};
}

} // namespace pseudolin
