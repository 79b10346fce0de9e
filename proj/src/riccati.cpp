#include "pseudolin/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rk_core.hpp"

namespace pseudolin {

namespace {

constexpr double kEscapeThreshold = 1e10;

// Coefficients of the ratio equation frozen along the trajectory.
struct RatioRhs {
    const Trajectory& traj;
    const PseudoLinearSystem& sys;
    RiccatiKind kind;

    bool operator()(double t, const detail::State<1>& y, detail::State<1>& dydt) const {
        const auto [u, v] = traj.eval(t);
        const double q = sys.Q().eval(t, u, v);
        const double r = sys.R().eval(t, u, v);
        const double b = sys.P().eval(t, u, v) - sys.S().eval(t, u, v);
        if (!std::isfinite(q) || !std::isfinite(r) || !std::isfinite(b)) return false;
        const double x = y[0];
        dydt[0] = (kind == RiccatiKind::Y) ? -q * x * x - b * x + r
                                           : -r * x * x + b * x + q;
        return std::isfinite(dydt[0]);
    }
};

struct ScalarSegment {
    double t_left, h;
    std::array<double, 5> c;
};

} // namespace

RiccatiTrace solve_riccati(const Trajectory& traj, const PseudoLinearSystem& sys,
                           RiccatiKind kind, double init, const IntegrationConfig& cfg) {
    RiccatiTrace trace;
    trace.kind = kind;
    trace.init = init;

    std::vector<ScalarSegment> segments;
    auto on_accept = [&](double t_left, double h, const detail::State<1>&,
                         const detail::State<1>&,
                         const std::array<detail::State<1>, 5>& rcont) {
        ScalarSegment seg;
        seg.t_left = t_left;
        seg.h = h;
        for (int c = 0; c < 5; ++c) seg.c[c] = rcont[c][0];
        segments.push_back(seg);
    };

    detail::RunOptions opt;
    opt.rtol = cfg.rtol;
    opt.atol = cfg.atol;
    opt.h_min = cfg.h_min;
    opt.escape_norm = kEscapeThreshold;
    opt.max_steps = cfg.max_steps;

    const double t_start = traj.nodes.front();
    const auto outcome = detail::run_dopri5<1>(RatioRhs{traj, sys, kind}, {init}, t_start,
                                               traj.last_time(), opt, on_accept);
    trace.escaped = outcome.status == detail::RunStatus::Escaped;
    trace.t_escape = trace.escaped ? outcome.t_escape : 0.0;

    // sample the dense solution on the trajectory's shared grid, up to escape
    const std::vector<double> grid = shared_grid(traj);
    std::size_t si = 0;
    const double slack = 1e-12 * std::max(1.0, std::abs(outcome.t_last));
    for (double t : grid) {
        if (t > outcome.t_last + slack) break;
        double value;
        if (t <= t_start) {
            value = init;
        } else {
            while (si + 1 < segments.size() &&
                   segments[si].t_left + segments[si].h < t)
                ++si;
            const ScalarSegment& seg = segments[si];
            const double theta = std::clamp((t - seg.t_left) / seg.h, 0.0, 1.0);
            const double th1 = 1.0 - theta;
            value = seg.c[0] +
                    theta * (seg.c[1] +
                             th1 * (seg.c[2] + theta * (seg.c[3] + th1 * seg.c[4])));
        }
        const auto [u, v] = traj.eval(t);
        const double b = sys.P().eval(t, u, v) - sys.S().eval(t, u, v);
        const double hv = (kind == RiccatiKind::Y)
                              ? sys.Q().eval(t, u, v) * value + b
                              : sys.R().eval(t, u, v) * value - b;
        trace.nodes.push_back(t);
        trace.values.push_back(value);
        trace.h_values.push_back(hv);
    }
    return trace;
}

std::pair<GridFunction, GridFunction>
reconstruct_solution(const Trajectory& traj, const RiccatiTrace& trace,
                     const PseudoLinearSystem& sys) {
    const double phi0 = traj.phi.front(), psi0 = traj.psi.front();
    const bool y_kind = trace.kind == RiccatiKind::Y;
    const double denom = y_kind ? phi0 : psi0;
    if (denom == 0.0)
        throw Error("reconstruct_solution: the denominator component vanishes at t0");
    const double ratio = y_kind ? psi0 / phi0 : phi0 / psi0;
    if (std::abs(trace.init - ratio) > 1e-12) throw InitMismatch(trace.init, ratio);

    const std::size_t n = trace.nodes.size();
    GridFunction integrand;
    integrand.nodes = trace.nodes;
    integrand.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = trace.nodes[i];
        const auto [u, v] = traj.eval(t);
        if (y_kind)
            integrand.values[i] =
                sys.P().eval(t, u, v) + trace.values[i] * sys.Q().eval(t, u, v);
        else
            integrand.values[i] =
                sys.S().eval(t, u, v) + trace.values[i] * sys.R().eval(t, u, v);
    }
    const GridFunction I = cumulative_integral(integrand);

    GridFunction base, other;
    base.nodes = trace.nodes;
    other.nodes = trace.nodes;
    base.values.resize(n);
    other.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        base.values[i] = denom * std::exp(I.values[i]);
        other.values[i] = trace.values[i] * base.values[i];
    }
    if (y_kind) return {std::move(base), std::move(other)};   // (phi_hat, psi_hat)
    return {std::move(other), std::move(base)};               // (phi_hat, psi_hat)
}

LinearFormReport linear_form_check(const RiccatiTrace& trace, const Trajectory& traj,
                                   const PseudoLinearSystem& sys) {
    const std::size_t n = trace.nodes.size();
    GridFunction H, source;
    H.nodes = trace.nodes;
    H.values = trace.h_values;
    source.nodes = trace.nodes;
    source.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = trace.nodes[i];
        const auto [u, v] = traj.eval(t);
        source.values[i] = (trace.kind == RiccatiKind::Y) ? sys.R().eval(t, u, v)
                                                          : sys.Q().eval(t, u, v);
    }
    GridFunction negH = H;
    for (double& x : negH.values) x = -x;
    const GridFunction IH = cumulative_integral(H);
    const GridFunction tail = exp_weighted_integral(source, negH);

    LinearFormReport rep;
    rep.rhs.nodes = trace.nodes;
    rep.rhs.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        rep.rhs.values[i] = trace.init * std::exp(-IH.values[i]) + tail.values[i];
        rep.max_abs_deviation =
            std::max(rep.max_abs_deviation, std::abs(rep.rhs.values[i] - trace.values[i]));
    }
    return rep;
}

ComparisonReport theorem21_condition(const RiccatiCoefficients& pair1,
                                     const RiccatiCoefficients& pair2,
                                     const GridFunction& y2, const GridFunction& eta1,
                                     const GridFunction& eta2, double gamma) {
    if (!same_nodes(y2, eta1) || !same_nodes(y2, eta2))
        throw Error("theorem21_condition: grids must share nodes");
    const std::vector<double>& nodes = y2.nodes;
    const std::size_t n = nodes.size();

    const GridFunction f1 = sample(pair1.f, nodes), g1 = sample(pair1.g, nodes),
                       h1 = sample(pair1.h, nodes);
    const GridFunction f2 = sample(pair2.f, nodes), g2 = sample(pair2.g, nodes),
                       h2 = sample(pair2.h, nodes);

    ComparisonReport rep;
    rep.f1_min = *std::min_element(f1.values.begin(), f1.values.end());
    rep.f1_nonneg = rep.f1_min >= -1e-12;

    const double lo = y2.values.front(), hi = eta1.values.front();
    if (gamma < lo - 1e-12 || gamma > hi + 1e-12) throw GammaOutOfRange(gamma, lo, hi);

    auto inequality_min = [&](const GridFunction& eta, const GridFunction& f,
                              const GridFunction& g, const GridFunction& h) {
        const GridFunction de = derivative(eta);
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const double e = eta.values[i];
            worst = std::min(worst, de.values[i] + f.values[i] * e * e +
                                        g.values[i] * e + h.values[i]);
        }
        return worst;
    };
    rep.eta1_residual_min = inequality_min(eta1, f1, g1, h1);
    rep.eta2_residual_min = inequality_min(eta2, f2, g2, h2);
    double scale1 = 0.0, scale2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        scale1 = std::max(scale1, std::abs(eta1.values[i]));
        scale2 = std::max(scale2, std::abs(eta2.values[i]));
    }
    rep.eta1_ok = rep.eta1_residual_min >= -1e-6 * (1.0 + scale1);
    rep.eta2_ok = rep.eta2_residual_min >= -1e-6 * (1.0 + scale2);

    GridFunction w;
    w.nodes = nodes;
    w.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        w.values[i] = f1.values[i] * (eta1.values[i] + eta2.values[i]) + g1.values[i];
    const GridFunction E = cumulative_integral(w);

    auto expression_min = [&](bool squared) {
        GridFunction integrand;
        integrand.nodes = nodes;
        integrand.values.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double df = f2.values[i] - f1.values[i];
            const double y = y2.values[i];
            const double lead = squared ? df * df * y * y : df * y * y;
            integrand.values[i] =
                std::exp(E.values[i]) *
                (lead + (g2.values[i] - g1.values[i]) * y + h2.values[i] - h1.values[i]);
        }
        const GridFunction I = cumulative_integral(integrand);
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
            worst = std::min(worst, gamma - y2.values.front() + I.values[i]);
        return worst;
    };
    rep.expression_min = expression_min(true);
    rep.expression_min_alt = expression_min(false);
    return rep;
}

} // namespace pseudolin
