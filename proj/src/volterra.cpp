#include "pseudolin/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "quad_detail.hpp"

namespace pseudolin {

namespace {

constexpr std::size_t kTableLimit = 4096;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct CoreInput {
    std::vector<double> nodes;
    std::vector<double> p, q, r, s, f, g;
    double phi0, psi0;
};

GridFunction on_nodes(const std::vector<double>& nodes, std::vector<double> values) {
    GridFunction gf;
    gf.nodes = nodes;
    gf.values = std::move(values);
    return gf;
}

// v1 = phi0 e^{IP} + psi0 * EWI(e^{IS} q, p) + EWI(f + q * EWI(g, s), p)
// and the symmetric v2; jq/jr running products back the kernel rows.
VolterraData compute_core(const CoreInput& in) {
    const std::size_t n = in.nodes.size();
    VolterraData out;
    out.nodes = in.nodes;
    out.q = in.q;
    out.r = in.r;

    const GridFunction gp = on_nodes(in.nodes, in.p);
    const GridFunction gs = on_nodes(in.nodes, in.s);
    const GridFunction gq = on_nodes(in.nodes, in.q);
    const GridFunction gr = on_nodes(in.nodes, in.r);
    const GridFunction gf = on_nodes(in.nodes, in.f);
    const GridFunction gg = on_nodes(in.nodes, in.g);

    const GridFunction IPg = cumulative_integral(gp);
    const GridFunction ISg = cumulative_integral(gs);
    out.IP = IPg.values;
    out.IS = ISg.values;

    auto build_v = [&](double y0, double w0, const std::vector<double>& IW,
                       const std::vector<double>& IO, const GridFunction& weight,
                       const GridFunction& other_weight, const GridFunction& qw,
                       const GridFunction& fw, const GridFunction& gw, GridFunction& v,
                       GridFunction& v_alt) {
        // IW: exponent of the own weight (IP for v1), IO: the other one (IS for v1);
        // qw: own cross coefficient (q for v1), fw: own source (f), gw: other source (g).
        std::vector<double> cross_inner(n);
        for (std::size_t i = 0; i < n; ++i)
            cross_inner[i] = std::exp(IO[i]) * qw.values[i];
        const GridFunction cross = exp_weighted_integral(on_nodes(in.nodes, cross_inner),
                                                         weight);

        const GridFunction inner_src = exp_weighted_integral(gw, other_weight);
        std::vector<double> src(n);
        for (std::size_t i = 0; i < n; ++i)
            src[i] = fw.values[i] + qw.values[i] * inner_src.values[i];
        const GridFunction term3 = exp_weighted_integral(on_nodes(in.nodes, src), weight);

        v.nodes = in.nodes;
        v.values.resize(n);
        v.error_est.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            v.values[i] = y0 * std::exp(IW[i]) + w0 * cross.values[i] + term3.values[i];
            v.error_est[i] = std::abs(w0) * cross.error_est[i] + term3.error_est[i];
            if (!std::isfinite(v.values[i])) v.overflow = true;
        }
        v.overflow = v.overflow || cross.overflow || term3.overflow;

        // literal variant: source integral unweighted with upper limit t
        const GridFunction cg = cumulative_integral(gw);
        const GridFunction ewi_f = exp_weighted_integral(fw, weight);
        const GridFunction ewi_q = exp_weighted_integral(qw, weight);
        v_alt.nodes = in.nodes;
        v_alt.values.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            v_alt.values[i] = y0 * std::exp(IW[i]) + w0 * cross.values[i] +
                              ewi_f.values[i] + cg.values[i] * ewi_q.values[i];
        v_alt.overflow = v.overflow || ewi_f.overflow || ewi_q.overflow;
    };

    build_v(in.phi0, in.psi0, out.IP, out.IS, gp, gs, gq, gf, gg, out.v1, out.v1_alt);
    build_v(in.psi0, in.phi0, out.IS, out.IP, gs, gp, gr, gg, gf, out.v2, out.v2_alt);
    out.overflow = out.v1.overflow || out.v2.overflow;

    // running products for the kernels, shifted so the stored exponentials stay small
    double em1 = -kInf, em2 = -kInf;
    for (std::size_t i = 0; i < n; ++i) {
        em1 = std::max(em1, out.IS[i] - out.IP[i]);
        em2 = std::max(em2, out.IP[i] - out.IS[i]);
    }
    out.shift1 = em1;
    out.shift2 = em2;
    std::vector<double> w1(n), w2(n);
    for (std::size_t i = 0; i < n; ++i) {
        w1[i] = std::exp(out.IS[i] - out.IP[i] - em1) * in.q[i];
        w2[i] = std::exp(out.IP[i] - out.IS[i] - em2) * in.r[i];
    }
    out.jq = cumulative_integral(on_nodes(in.nodes, w1)).values;
    out.jr = cumulative_integral(on_nodes(in.nodes, w2)).values;

    if (n <= kTableLimit) {
        std::vector<std::vector<double>> t1(n), t2(n);
        for (std::size_t i = 0; i < n; ++i) {
            t1[i] = out.kernel_row(1, i); // tables not engaged yet: computes directly
            t2[i] = out.kernel_row(2, i);
            for (double x : t1[i])
                if (!std::isfinite(x)) out.overflow = true;
            for (double x : t2[i])
                if (!std::isfinite(x)) out.overflow = true;
        }
        out.K1 = std::move(t1);
        out.K2 = std::move(t2);
    }
    return out;
}

} // namespace

std::vector<double> VolterraData::kernel_row(int j, std::size_t i) const {
    if (j == 1 && K1) return (*K1)[i];
    if (j == 2 && K2) return (*K2)[i];
    std::vector<double> row(i + 1);
    if (j == 1) {
        // K1(t_i, z_k) = r(z_k) exp{IP_i - IS_k + shift1} (jq_i - jq_k)
        for (std::size_t k = 0; k < i; ++k)
            row[k] = r[k] * std::exp(IP[i] - IS[k] + shift1) * (jq[i] - jq[k]);
    } else {
        for (std::size_t k = 0; k < i; ++k)
            row[k] = q[k] * std::exp(IS[i] - IP[k] + shift2) * (jr[i] - jr[k]);
    }
    row[i] = 0.0; // empty inner interval
    return row;
}

VolterraData compute_volterra_data(const Trajectory& traj, const PseudoLinearSystem& sys) {
    CoreInput in;
    in.nodes = shared_grid(traj);
    const std::size_t n = in.nodes.size();
    in.p.resize(n);
    in.q.resize(n);
    in.r.resize(n);
    in.s.resize(n);
    in.f.resize(n);
    in.g.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = in.nodes[i];
        const auto [u, v] = traj.eval(t);
        const CoefficientSample c = eval_coefficients(sys, t, u, v);
        in.p[i] = c.p;
        in.q[i] = c.q;
        in.r[i] = c.r;
        in.s[i] = c.s;
        in.f[i] = c.f;
        in.g[i] = c.g;
    }
    in.phi0 = traj.phi.front();
    in.psi0 = traj.psi.front();
    return compute_core(in);
}

VolterraData envelope_volterra_data(const EnvelopeSet& env, double phi0, double psi0,
                                    const std::vector<double>& nodes) {
    CoreInput in;
    in.nodes = nodes;
    const std::size_t n = nodes.size();
    in.p.resize(n);
    in.q.resize(n);
    in.r.resize(n);
    in.s.resize(n);
    in.f.resize(n);
    in.g.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = nodes[i];
        in.p[i] = env.P0(t);
        in.q[i] = env.Q0(t);
        in.r[i] = env.R0(t);
        in.s[i] = env.S0(t);
        in.f[i] = env.F0(t);
        in.g[i] = env.G0(t);
    }
    in.phi0 = std::abs(phi0);
    in.psi0 = std::abs(psi0);
    return compute_core(in);
}

std::pair<double, double> volterra_residual(const Trajectory& traj,
                                            const VolterraData& data, SourceTermForm form) {
    const std::size_t n = data.nodes.size();
    const auto [phi, psi] = sample_trajectory(traj, data.nodes);
    const GridFunction& v1 = form == SourceTermForm::Derivation ? data.v1 : data.v1_alt;
    const GridFunction& v2 = form == SourceTermForm::Derivation ? data.v2 : data.v2_alt;

    double res1 = 0.0, res2 = 0.0;
    std::vector<double> prod(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row1 = data.kernel_row(1, i);
        for (std::size_t k = 0; k <= i; ++k) prod[k] = row1[k] * phi.values[k];
        const double I1 = detail::integrate_array(data.nodes.data(), prod.data(), i + 1);
        res1 = std::max(res1, std::abs(phi.values[i] - v1.values[i] - I1));

        const auto row2 = data.kernel_row(2, i);
        for (std::size_t k = 0; k <= i; ++k) prod[k] = row2[k] * psi.values[k];
        const double I2 = detail::integrate_array(data.nodes.data(), prod.data(), i + 1);
        res2 = std::max(res2, std::abs(psi.values[i] - v2.values[i] - I2));
    }
    return {res1, res2};
}

bool VolterraBound::contains1(double value, double rel_tol) const {
    if (value == 0.0) return true;
    return std::log(std::abs(value)) <= log_bound1 + std::log1p(rel_tol);
}

bool VolterraBound::contains2(double value, double rel_tol) const {
    if (value == 0.0) return true;
    return std::log(std::abs(value)) <= log_bound2 + std::log1p(rel_tol);
}

VolterraBound envelope_bounds_on_grid(const EnvelopeSet& env, double phi0, double psi0,
                                      const std::vector<double>& nodes) {
    const VolterraData data = envelope_volterra_data(env, phi0, psi0, nodes);
    VolterraBound b;
    for (double x : data.v1.values) b.m1 = std::max(b.m1, std::abs(x));
    for (double x : data.v2.values) b.m2 = std::max(b.m2, std::abs(x));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (double x : data.kernel_row(1, i)) b.M1 = std::max(b.M1, std::abs(x));
        for (double x : data.kernel_row(2, i)) b.M2 = std::max(b.M2, std::abs(x));
    }
    const double span = nodes.back() - nodes.front();
    b.log_bound1 = std::log(b.m1) + b.M1 * span;
    b.log_bound2 = std::log(b.m2) + b.M2 * span;
    b.bound1 = b.m1 * std::exp(b.M1 * span);
    b.bound2 = b.m2 * std::exp(b.M2 * span);
    b.overflow1 = !std::isfinite(b.bound1);
    b.overflow2 = !std::isfinite(b.bound2);
    return b;
}

VolterraBound envelope_bounds(const EnvelopeSet& env, double phi0, double psi0, double t0,
                              double T) {
    return envelope_bounds_on_grid(env, phi0, psi0, uniform_nodes(t0, T, 513));
}

} // namespace pseudolin
