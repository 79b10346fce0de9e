#include "pseudolin/criteria.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>

namespace pseudolin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kContainmentTol = 1e-6;

// Fixed-width uniform in [0,1): independent of library distribution details,
// so seeded runs are reproducible byte-for-byte.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string fmt(const char* format, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, x);
    return buf;
}

struct MarginTracker {
    std::vector<InequalityMargin> entries;

    void add(const std::string& name) { entries.push_back({name, kInf, {0, 0, 0}, false}); }

    void update(std::size_t idx, double margin, const SamplePoint& sp) {
        InequalityMargin& m = entries[idx];
        if (margin < m.min_margin) {
            m.min_margin = margin;
            m.worst = sp;
        }
        if (margin < 0) m.falsified = true;
    }

    HypothesisReport finish() const {
        HypothesisReport rep;
        rep.inequalities = entries;
        for (const auto& m : entries) rep.falsified = rep.falsified || m.falsified;
        return rep;
    }
};

} // namespace

const InequalityMargin* HypothesisReport::worst() const {
    const InequalityMargin* w = nullptr;
    for (const auto& m : inequalities)
        if (!w || m.min_margin < w->min_margin) w = &m;
    return w;
}

HypothesisReport check_envelope_t31(const PseudoLinearSystem& sys, const EnvelopeSet& env,
                                    double t0, double T, const SamplingPlan& plan,
                                    const std::vector<SamplePoint>& extra_samples) {
    MarginTracker tracker;
    tracker.add("P<=P0");
    tracker.add("|Q|<=Q0");
    tracker.add("|R|<=R0");
    tracker.add("S<=S0");
    tracker.add("|F|<=F0");
    tracker.add("|G|<=G0");

    auto probe = [&](const SamplePoint& sp) {
        try {
            const CoefficientSample c = eval_coefficients(sys, sp.t, sp.u, sp.v);
            tracker.update(0, env.P0(sp.t) - c.p, sp);
            tracker.update(1, env.Q0(sp.t) - std::abs(c.q), sp);
            tracker.update(2, env.R0(sp.t) - std::abs(c.r), sp);
            tracker.update(3, env.S0(sp.t) - c.s, sp);
            tracker.update(4, env.F0(sp.t) - std::abs(c.f), sp);
            tracker.update(5, env.G0(sp.t) - std::abs(c.g), sp);
        } catch (const NonFiniteCoefficient& e) {
            const std::size_t idx = std::string("PQRSFG").find(e.label[0]);
            tracker.update(idx == std::string::npos ? 0 : idx, -kInf, sp);
        }
    };

    for (const auto& sp : extra_samples) probe(sp);
    std::mt19937_64 rng(plan.rng_seed);
    const int tn = std::max(1, plan.t_nodes);
    for (int it = 0; it < tn; ++it) {
        const double t =
            tn == 1 ? t0 : t0 + (T - t0) * static_cast<double>(it) / (tn - 1);
        for (int k = 0; k < plan.uv_samples; ++k) {
            const double u = plan.u_min + (plan.u_max - plan.u_min) * uniform01(rng);
            const double v = plan.v_min + (plan.v_max - plan.v_min) * uniform01(rng);
            probe({t, u, v});
        }
    }
    return tracker.finish();
}

std::pair<BoundCurve, BoundCurve> compute_KL_curves(const EnvelopeSet& env, double c1,
                                                    double c2,
                                                    const std::vector<double>& grid) {
    if (!(c1 > 0)) throw InvalidParam("c1", c1, "must be > 0");
    if (!(c2 > 0)) throw InvalidParam("c2", c2, "must be > 0");

    const std::size_t n = grid.size();
    const GridFunction P0 = sample(env.P0, grid), S0 = sample(env.S0, grid);
    const GridFunction Q0 = sample(env.Q0, grid), R0 = sample(env.R0, grid);
    const GridFunction B1 = sample(env.B1, grid), B2 = sample(env.B2, grid);

    GridFunction negB1 = B1;
    for (double& x : negB1.values) x = -x;

    auto curve = [&](double c_own, double c_other, const GridFunction& own_rate,
                     const GridFunction& outer_coeff, const GridFunction& inner_coeff,
                     const GridFunction& bracket_weight) {
        // value = c_own * exp{ int own_rate + int outer_coeff(tau) *
        //   [ (c_other/c_own) e^{int bracket_weight} + EWI(inner_coeff, bracket_weight) ] }
        const GridFunction IW = cumulative_integral(bracket_weight);
        const GridFunction inner = exp_weighted_integral(inner_coeff, bracket_weight);
        GridFunction outer_integrand;
        outer_integrand.nodes = grid;
        outer_integrand.values.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            outer_integrand.values[i] =
                outer_coeff.values[i] *
                (c_other / c_own * std::exp(IW.values[i]) + inner.values[i]);
        const GridFunction I_outer = cumulative_integral(outer_integrand);
        const GridFunction I_rate = cumulative_integral(own_rate);

        BoundCurve curve;
        curve.grid = grid;
        curve.values.resize(n);
        curve.quad_error.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double expo = I_rate.values[i] + I_outer.values[i];
            curve.values[i] = c_own * std::exp(expo);
            if (!std::isfinite(curve.values[i])) {
                curve.values[i] = kInf;
                curve.overflow = true;
                curve.quad_error[i] = kInf;
            } else {
                curve.quad_error[i] =
                    curve.values[i] * (I_rate.error_est[i] + I_outer.error_est[i] +
                                       inner.error_est[i]);
            }
        }
        return curve;
    };

    BoundCurve K = curve(c1, c2, P0, Q0, R0, negB1);
    BoundCurve L = curve(c2, c1, S0, R0, Q0, B2);
    return {std::move(K), std::move(L)};
}

HypothesisReport check_envelope_t32(const PseudoLinearSystem& sys, const EnvelopeSet& env,
                                    const BoundCurve& K, const BoundCurve& L, double eps,
                                    const SamplingPlan& plan,
                                    const std::vector<SamplePoint>& extra_samples) {
    MarginTracker tracker;
    tracker.add("P<=P0");
    tracker.add("S<=S0");
    tracker.add("Q>=0");
    tracker.add("Q<=Q0");
    tracker.add("R>=0");
    tracker.add("R<=R0");
    tracker.add("B>=B1");
    tracker.add("B<=B2");

    auto probe = [&](const SamplePoint& sp) {
        try {
            const CoefficientSample c = eval_coefficients(sys, sp.t, sp.u, sp.v);
            tracker.update(0, env.P0(sp.t) - c.p, sp);
            tracker.update(1, env.S0(sp.t) - c.s, sp);
            tracker.update(2, c.q, sp);
            tracker.update(3, env.Q0(sp.t) - c.q, sp);
            tracker.update(4, c.r, sp);
            tracker.update(5, env.R0(sp.t) - c.r, sp);
            tracker.update(6, c.b - env.B1(sp.t), sp);
            tracker.update(7, env.B2(sp.t) - c.b, sp);
        } catch (const NonFiniteCoefficient&) {
            tracker.update(0, -kInf, sp);
        }
    };

    for (const auto& sp : extra_samples) probe(sp);

    std::mt19937_64 rng(plan.rng_seed);
    const std::size_t n = K.grid.size();
    const int tn = std::max(1, plan.t_nodes);
    // log-uniform span: samples cover [1e-12 * box, box]
    const double log_span = std::log(1e-12);
    for (int it = 0; it < tn; ++it) {
        const std::size_t idx =
            tn == 1 ? 0
                    : static_cast<std::size_t>(std::llround(
                          static_cast<double>(it) * static_cast<double>(n - 1) / (tn - 1)));
        const double t = K.grid[idx];
        double u_hi = K.values[idx] + eps;
        double v_hi = L.values[idx] + eps;
        if (!std::isfinite(u_hi)) u_hi = 1e154;
        if (!std::isfinite(v_hi)) v_hi = 1e154;
        probe({t, u_hi, v_hi}); // box corner, deterministic
        for (int k = 1; k < plan.uv_samples; ++k) {
            const double u = u_hi * std::exp(log_span * uniform01(rng));
            const double v = v_hi * std::exp(log_span * uniform01(rng));
            probe({t, u, v});
        }
    }
    return tracker.finish();
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Certified: return "certified";
        case Verdict::HypothesisFalsified: return "hypothesis-falsified";
        case Verdict::BoundViolated: return "bound-violated";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

const char* to_string(TrajectoryStatus s) {
    switch (s) {
        case TrajectoryStatus::Completed: return "completed";
        case TrajectoryStatus::BlewUp: return "blew-up";
        case TrajectoryStatus::ToleranceFailure: return "tolerance-failure";
    }
    return "?";
}

Certificate certify_t31(const PseudoLinearSystem& sys, const EnvelopeSet& env, double phi0,
                        double psi0, double T, const SamplingPlan& plan,
                        const IntegrationConfig& cfg) {
    Certificate cert;
    cert.criterion = Certificate::Criterion::Envelope;
    cert.t0 = sys.t0();
    cert.horizon = T;
    cert.phi0 = phi0;
    cert.psi0 = psi0;
    cert.plan = plan;

    cert.hypothesis_report = check_envelope_t31(sys, env, sys.t0(), T, plan);
    cert.trajectory = integrate(sys, phi0, psi0, sys.t0(), T, cfg);
    cert.trajectory_status = cert.trajectory.status;
    cert.apriori = envelope_bounds(env, phi0, psi0, sys.t0(), T);
    cert.max_abs_phi = cert.trajectory.max_abs_phi();
    cert.max_abs_psi = cert.trajectory.max_abs_psi();

    if (cert.hypothesis_report.falsified) {
        cert.verdict = Verdict::HypothesisFalsified;
        const InequalityMargin* w = cert.hypothesis_report.worst();
        cert.violation_time = w->worst.t;
        cert.violation_what = w->name;
    } else if (cert.trajectory_status == TrajectoryStatus::ToleranceFailure) {
        cert.verdict = Verdict::Inconclusive;
        cert.violation_what = "integrator tolerance failure";
        cert.violation_time = cert.trajectory.last_time();
    } else if (cert.trajectory_status == TrajectoryStatus::BlewUp) {
        cert.verdict = Verdict::BoundViolated;
        cert.violation_time = cert.trajectory.t_blow;
        cert.violation_what = "trajectory norm escaped";
    } else if (!cert.apriori->contains1(cert.max_abs_phi, kContainmentTol)) {
        cert.verdict = Verdict::BoundViolated;
        cert.violation_what = "max|phi| exceeds bound1";
        cert.violation_time = T;
    } else if (!cert.apriori->contains2(cert.max_abs_psi, kContainmentTol)) {
        cert.verdict = Verdict::BoundViolated;
        cert.violation_what = "max|psi| exceeds bound2";
        cert.violation_time = T;
    } else {
        cert.verdict = Verdict::Certified;
    }
    return cert;
}

Certificate certify_t32(const PseudoLinearSystem& sys, const EnvelopeSet& env, double c1,
                        double c2, double eps, double T, const SamplingPlan& plan,
                        const IntegrationConfig& cfg) {
    if (!sys.homogeneous())
        throw NotHomogeneous("positivity certification requires a homogeneous system");
    if (!(c1 > 0)) throw InvalidParam("c1", c1, "must be > 0");
    if (!(c2 > 0)) throw InvalidParam("c2", c2, "must be > 0");
    if (!(eps > 0)) throw InvalidParam("eps", eps, "must be > 0");

    Certificate cert;
    cert.criterion = Certificate::Criterion::Positivity;
    cert.t0 = sys.t0();
    cert.horizon = T;
    cert.phi0 = c1;
    cert.psi0 = c2;
    cert.eps = eps;
    cert.plan = plan;

    cert.trajectory = integrate(sys, c1, c2, sys.t0(), T, cfg);
    cert.trajectory_status = cert.trajectory.status;

    const std::vector<double> grid = shared_grid(cert.trajectory);
    if (grid.size() < 2) {
        cert.verdict = Verdict::Inconclusive;
        cert.violation_what = "no integration step could be accepted";
        cert.violation_time = sys.t0();
        return cert;
    }
    auto [K, L] = compute_KL_curves(env, c1, c2, grid);
    cert.hypothesis_report = check_envelope_t32(sys, env, K, L, eps, plan);

    const auto [phi, psi] = sample_trajectory(cert.trajectory, grid);
    cert.min_phi = kInf;
    cert.min_psi = kInf;
    double worst_ratio_t_phi = grid.front(), worst_ratio_t_psi = grid.front();
    double min_phi_t = grid.front(), min_psi_t = grid.front();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double rp  = std::isfinite(K.values[i]) ? phi.values[i] / K.values[i] : 0.0;
        const double rps = std::isfinite(L.values[i]) ? psi.values[i] / L.values[i] : 0.0;
        if (rp > cert.max_ratio_phi) {
            cert.max_ratio_phi = rp;
            worst_ratio_t_phi = grid[i];
        }
        if (rps > cert.max_ratio_psi) {
            cert.max_ratio_psi = rps;
            worst_ratio_t_psi = grid[i];
        }
        if (phi.values[i] < cert.min_phi) {
            cert.min_phi = phi.values[i];
            min_phi_t = grid[i];
        }
        if (psi.values[i] < cert.min_psi) {
            cert.min_psi = psi.values[i];
            min_psi_t = grid[i];
        }
    }
    cert.K = std::move(K);
    cert.L = std::move(L);

    if (cert.hypothesis_report.falsified) {
        cert.verdict = Verdict::HypothesisFalsified;
        const InequalityMargin* w = cert.hypothesis_report.worst();
        cert.violation_time = w->worst.t;
        cert.violation_what = w->name;
    } else if (cert.trajectory_status == TrajectoryStatus::ToleranceFailure) {
        cert.verdict = Verdict::Inconclusive;
        cert.violation_what = "integrator tolerance failure";
        cert.violation_time = cert.trajectory.last_time();
    } else if (cert.trajectory_status == TrajectoryStatus::BlewUp) {
        cert.verdict = Verdict::BoundViolated;
        cert.violation_time = cert.trajectory.t_blow;
        cert.violation_what = "trajectory norm escaped";
    } else if (cert.min_phi <= 0) {
        cert.verdict = Verdict::BoundViolated;
        cert.violation_time = min_phi_t;
        cert.violation_what = "phi not strictly positive";
    } else if (cert.min_psi <= 0) {
        cert.verdict = Verdict::BoundViolated;
        cert.violation_time = min_psi_t;
        cert.violation_what = "psi not strictly positive";
    } else if (cert.max_ratio_phi > 1.0 + kContainmentTol) {
        cert.verdict = Verdict::BoundViolated;
        cert.violation_time = worst_ratio_t_phi;
        cert.violation_what = "phi exceeds K";
    } else if (cert.max_ratio_psi > 1.0 + kContainmentTol) {
        cert.verdict = Verdict::BoundViolated;
        cert.violation_time = worst_ratio_t_psi;
        cert.violation_what = "psi exceeds L";
    } else {
        cert.verdict = Verdict::Certified;
    }
    return cert;
}

namespace {

std::string kv_slug(const std::string& name) {
    std::string out;
    for (char c : name)
        out += (std::isalnum(static_cast<unsigned char>(c)) != 0) ? c : '_';
    return out;
}

} // namespace

void Certificate::write_text(std::ostream& os) const {
    const bool envelope = criterion == Criterion::Envelope;
    os << "certificate: " << (envelope ? "global existence (envelope criterion)"
                                       : "positivity and containment criterion")
       << "\n";
    os << "system: " << system_name << "\n";
    os << "interval: [" << fmt("%.10g", t0) << ", " << fmt("%.10g", horizon) << "]\n";
    os << "initial: phi0=" << fmt("%.10g", phi0) << " psi0=" << fmt("%.10g", psi0) << "\n";
    if (!envelope) os << "box margin eps=" << fmt("%.10g", eps) << "\n";
    os << "verdict: " << to_string(verdict) << "\n";
    if (verdict != Verdict::Certified)
        os << "  cause: " << violation_what << " (t=" << fmt("%.10g", violation_time)
           << ")\n";
    os << "hypotheses (sampled " << plan.t_nodes << " t-nodes x " << plan.uv_samples
       << " uv-samples, seed " << plan.rng_seed
       << "; a negative margin falsifies, sampling never proves):\n";
    for (const auto& m : hypothesis_report.inequalities) {
        os << "  " << m.name << ": min margin " << fmt("%.10g", m.min_margin) << " at (t="
           << fmt("%.10g", m.worst.t) << ", u=" << fmt("%.10g", m.worst.u)
           << ", v=" << fmt("%.10g", m.worst.v) << ")"
           << (m.falsified ? "  FALSIFIED" : "") << "\n";
    }
    os << "trajectory: " << to_string(trajectory_status) << ", "
       << trajectory.n_steps << " steps, last t=" << fmt("%.10g", trajectory.last_time())
       << "\n";
    if (trajectory_status == TrajectoryStatus::BlewUp)
        os << "  blow-up time estimate: " << fmt("%.10g", trajectory.t_blow) << "\n";
    if (envelope && apriori) {
        os << "a-priori bounds: m1=" << fmt("%.10g", apriori->m1)
           << " M1=" << fmt("%.10g", apriori->M1) << " m2=" << fmt("%.10g", apriori->m2)
           << " M2=" << fmt("%.10g", apriori->M2) << "\n";
        os << "  bound1=";
        if (apriori->overflow1)
            os << "exp(" << fmt("%.10g", apriori->log_bound1) << ") [overflows double]";
        else
            os << fmt("%.10g", apriori->bound1);
        os << "  max|phi|=" << fmt("%.10g", max_abs_phi) << "\n";
        os << "  bound2=";
        if (apriori->overflow2)
            os << "exp(" << fmt("%.10g", apriori->log_bound2) << ") [overflows double]";
        else
            os << fmt("%.10g", apriori->bound2);
        os << "  max|psi|=" << fmt("%.10g", max_abs_psi) << "\n";
    }
    if (!envelope) {
        os << "containment: max phi/K=" << fmt("%.10g", max_ratio_phi)
           << " max psi/L=" << fmt("%.10g", max_ratio_psi)
           << " min phi=" << fmt("%.10g", min_phi) << " min psi=" << fmt("%.10g", min_psi)
           << "\n";
    }
}

void Certificate::write_kv(std::ostream& os) const {
    auto kv = [&](const std::string& k, const std::string& v) { os << k << "=" << v << "\n"; };
    auto kvd = [&](const std::string& k, double x) { kv(k, fmt("%.17g", x)); };
    kv("criterion", criterion == Criterion::Envelope ? "envelope" : "positivity");
    kv("system", system_name);
    kv("verdict", to_string(verdict));
    kvd("t0", t0);
    kvd("horizon", horizon);
    kvd("phi0", phi0);
    kvd("psi0", psi0);
    if (criterion == Criterion::Positivity) kvd("eps", eps);
    kv("plan.t_nodes", std::to_string(plan.t_nodes));
    kv("plan.uv_samples", std::to_string(plan.uv_samples));
    kv("plan.seed", std::to_string(plan.rng_seed));
    kv("trajectory.status", to_string(trajectory_status));
    kv("trajectory.steps", std::to_string(trajectory.n_steps));
    kvd("trajectory.t_last", trajectory.last_time());
    if (trajectory_status == TrajectoryStatus::BlewUp) kvd("trajectory.t_blow", trajectory.t_blow);
    kv("hypotheses.falsified", hypothesis_report.falsified ? "true" : "false");
    for (const auto& m : hypothesis_report.inequalities) {
        const std::string base = "hyp." + kv_slug(m.name);
        kvd(base + ".margin", m.min_margin);
        kvd(base + ".t", m.worst.t);
        kvd(base + ".u", m.worst.u);
        kvd(base + ".v", m.worst.v);
        kv(base + ".falsified", m.falsified ? "true" : "false");
    }
    if (apriori) {
        kvd("bound.m1", apriori->m1);
        kvd("bound.M1", apriori->M1);
        kvd("bound.m2", apriori->m2);
        kvd("bound.M2", apriori->M2);
        kvd("bound.bound1", apriori->bound1);
        kvd("bound.bound2", apriori->bound2);
        kvd("bound.log_bound1", apriori->log_bound1);
        kvd("bound.log_bound2", apriori->log_bound2);
        kvd("max_abs_phi", max_abs_phi);
        kvd("max_abs_psi", max_abs_psi);
    }
    if (criterion == Criterion::Positivity) {
        kvd("ratio.phi.max", max_ratio_phi);
        kvd("ratio.psi.max", max_ratio_psi);
        kvd("min_phi", min_phi);
        kvd("min_psi", min_psi);
    }
    if (verdict != Verdict::Certified) {
        kv("violation.what", violation_what);
        kvd("violation.time", violation_time);
    }
}

} // namespace pseudolin
