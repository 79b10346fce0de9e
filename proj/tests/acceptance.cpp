// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Each criterion pins its tolerances in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pseudolin/corpus.hpp"
#include "pseudolin/criteria.hpp"
#include "pseudolin/riccati.hpp"
#include "pseudolin/volterra.hpp"

using namespace pseudolin;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int criterion, const char* label, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion, label,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double unif(std::mt19937_64& rng, double a, double b) {
    return a + (b - a) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

Field constant(double c) {
    return [c](double, double, double) { return c; };
}

PseudoLinearSystem harmonic() {
    return PseudoLinearSystem::homogeneous_system(constant(0), constant(1), constant(-1),
                                                  constant(0), 0.0);
}

EnvelopeSet harmonic_envelopes() {
    EnvelopeSet env = EnvelopeSet::zero();
    env.Q0 = [](double) { return 1.0; };
    env.R0 = [](double) { return 1.0; };
    return env;
}

// --- criterion 1: envelope certification of the parametric van der Pol -----

void criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto entry = corpus_get("vdp-parametric", {{"epsilon", 0.1}, {"beta", 0.2}});
    const auto sys = entry.system();
    const auto env = *entry.envelopes();
    const double ics[10][2] = {{-5, -5}, {-5, 5}, {5, -5}, {5, 5}, {2, 0},
                               {-3, 4},  {1, -2}, {4, 1},  {-1, -4}, {0.5, 3}};
    int certified = 0;
    for (const auto& ic : ics) {
        const auto cert = certify_t31(sys, env, ic[0], ic[1], 50.0);
        if (cert.verdict == Verdict::Certified) ++certified;
    }
    const double dt = seconds_since(t0);
    std::ostringstream detail;
    detail << certified << "/10 certified, " << dt << " s";
    report(1, "parametric van der Pol certified for ten initial conditions, T=50",
           certified == 10 && dt < 10.0, detail.str());
}

// --- criterion 2: positivity certification of Emden-Fowler -----------------

void criterion2() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto entry = corpus_get("emden-fowler",
                                  {{"rho", 0}, {"sigma", -3}, {"n", 2}, {"t0", 1}});
    const auto cert = certify_t32(entry.system(), *entry.envelopes(), 0.5, 0.9, 0.1, 10.0);
    const bool single = cert.verdict == Verdict::Certified &&
                        cert.max_ratio_phi <= 1.0 + 1e-6 &&
                        cert.max_ratio_psi <= 1.0 + 1e-6;

    std::mt19937_64 rng(2024);
    int sweep_certified = 0;
    for (int i = 0; i < 20; ++i) {
        double rho, sigma;
        do {
            rho = unif(rng, -1.0, 0.9);
            sigma = unif(rng, -4.0, -1.2);
        } while (2.0 + sigma - rho >= -0.05);
        const double c2 = unif(rng, 0.05, 0.95);
        const double ratio_bound = std::pow(1.0, 1.0 - rho) / (1.0 - rho);
        const double c1 = c2 * ratio_bound * unif(rng, 0.05, 1.0);
        EmdenFowlerParams p{rho, sigma, 2.0, 1.0};
        if (!emden_fowler_condition_check(p, c1, c2).cond1) {
            --i; // resample: the draw must satisfy condition 1
            continue;
        }
        const auto e = corpus_get(
            "emden-fowler", {{"rho", rho}, {"sigma", sigma}, {"n", 2.0}, {"t0", 1.0}});
        const auto c = certify_t32(e.system(), *e.envelopes(), c1, c2, 0.1, 10.0);
        if (c.verdict == Verdict::Certified) ++sweep_certified;
    }
    const double dt = seconds_since(t0);
    std::ostringstream detail;
    detail << "single run verdict=" << to_string(cert.verdict)
           << " (max psi/L=" << cert.max_ratio_psi << ", worst margin "
           << cert.hypothesis_report.worst()->name << "="
           << cert.hypothesis_report.worst()->min_margin << "); sweep " << sweep_certified
           << "/20 certified, " << dt << " s";
    report(2, "Emden-Fowler positivity certification (canonical run + 20-point sweep)",
           single && sweep_certified == 20 && dt < 60.0, detail.str());
}

// --- criterion 3: bound-curve closed-form cross-check -----------------------

void criterion3() {
    std::mt19937_64 rng(77);
    const auto grid = uniform_nodes(1.0, 10.0, 4097);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        EmdenFowlerParams p;
        p.t0 = 1.0;
        p.n = 2.0;
        do {
            p.rho = unif(rng, -1.0, 0.9);
            p.sigma = unif(rng, -4.0, -1.2);
        } while (std::abs(2.0 + p.sigma - p.rho) < 0.1 || std::abs(p.sigma + 1.0) < 0.1);
        const double c1 = unif(rng, 0.1, 3.0), c2 = unif(rng, 0.1, 3.0);
        const auto [K, L] = compute_KL_curves(emden_fowler_envelopes(p), c1, c2, grid);
        (void)K;
        for (std::size_t k = 0; k < grid.size(); k += 64) {
            const double exact = emden_fowler_L_closed_form(grid[k], c1, c2, p);
            worst = std::max(worst, std::abs(L.values[k] - exact) / exact);
        }
    }
    double worst_rho1 = 0.0;
    {
        EmdenFowlerParams p{1.0, -2.5, 2.0, 1.0};
        const double c1 = 0.7, c2 = 1.1;
        const auto [K, L] = compute_KL_curves(emden_fowler_envelopes(p), c1, c2, grid);
        (void)K;
        for (std::size_t k = 0; k < grid.size(); k += 64) {
            const double exact = emden_fowler_L_closed_form(grid[k], c1, c2, p);
            worst_rho1 = std::max(worst_rho1, std::abs(L.values[k] - exact) / exact);
        }
    }
    std::ostringstream detail;
    detail << "max rel err " << worst << " (rho != 1), " << worst_rho1 << " (rho = 1)";
    report(3, "bound curve L vs closed form, 10 random parameter sets",
           worst <= 1e-8 && worst_rho1 <= 1e-7, detail.str());
}

// --- criterion 4: ratio-representation reconstruction ----------------------

void criterion4() {
    bool pass = true;
    std::ostringstream detail;

    {
        const auto sys = harmonic();
        const auto traj = integrate(sys, 1.0, 0.0, 0.0, 1.0);
        const auto trace = solve_riccati(traj, sys, RiccatiKind::Y, 0.0);
        const auto [phi_hat, psi_hat] = reconstruct_solution(traj, trace, sys);
        const auto [phi, psi] = sample_trajectory(traj, phi_hat.nodes);
        double worst = 0.0;
        for (std::size_t i = 0; i < phi_hat.size(); ++i) {
            worst = std::max(worst, std::abs(phi_hat.values[i] - phi.values[i]) /
                                        std::max(1.0, std::abs(phi.values[i])));
            worst = std::max(worst, std::abs(psi_hat.values[i] - psi.values[i]) /
                                        std::max(1.0, std::abs(psi.values[i])));
        }
        const double lf = linear_form_check(trace, traj, sys).max_abs_deviation;
        detail << "harmonic: reconstruct " << worst << ", linear-form " << lf;
        pass = pass && worst <= 1e-6 && lf <= 1e-6;
    }
    {
        const auto sys = corpus_get("emden-fowler").system();
        const auto traj = integrate(sys, 0.5, 0.9, 1.0, 3.0);
        for (RiccatiKind kind : {RiccatiKind::Y, RiccatiKind::Z}) {
            const double init = kind == RiccatiKind::Y ? 0.9 / 0.5 : 0.5 / 0.9;
            const auto trace = solve_riccati(traj, sys, kind, init);
            const auto [phi_hat, psi_hat] = reconstruct_solution(traj, trace, sys);
            const auto [phi, psi] = sample_trajectory(traj, phi_hat.nodes);
            double worst = 0.0;
            for (std::size_t i = 0; i < phi_hat.size(); ++i) {
                worst = std::max(worst, std::abs(phi_hat.values[i] - phi.values[i]) /
                                            std::max(1.0, std::abs(phi.values[i])));
                worst = std::max(worst, std::abs(psi_hat.values[i] - psi.values[i]) /
                                            std::max(1.0, std::abs(psi.values[i])));
            }
            const double lf = linear_form_check(trace, traj, sys).max_abs_deviation;
            detail << (kind == RiccatiKind::Y ? "; emden Y: " : "; emden Z: ") << worst
                   << ", linear-form " << lf;
            pass = pass && worst <= 1e-6 && lf <= 1e-6;
        }
    }
    report(4, "ratio-representation reconstruction and linear-form identities", pass,
           detail.str());
}

// --- criterion 5: nonnegative ratio traces when Q, R >= 0 ------------------

void criterion5() {
    struct Case {
        std::string name;
        ParamMap params;
        double phi0, psi0, t_end;
    };
    const std::vector<Case> cases{
        {"emden-fowler", {}, 0.5, 0.9, 6.0},
        {"emden-fowler", {{"rho", 1.0}, {"sigma", -2.0}}, 0.5, 0.9, 6.0},
        {"emden-fowler", {{"rho", 0.5}, {"sigma", -3.0}, {"n", 3.0}}, 0.5, 0.9, 6.0},
        {"duffing", {{"alpha", -1.0}, {"beta", -0.5}, {"k", 0.3}, {"Gamma", 0.2}}, 1.0, 0.0,
         1.2},
        {"pendulum-light", {}, 0.1, 0.0, 4.0},
    };
    bool pass = true;
    std::ostringstream detail;
    int idx = 0;
    for (const auto& c : cases) {
        const auto entry = corpus_get(c.name, c.params);
        const auto sys = entry.system();
        const double start = entry.t0();
        const auto traj = integrate(sys, c.phi0, c.psi0, start, start + c.t_end);
        // precondition: Q and R stay nonnegative along this trajectory
        double min_qr = 0.0;
        for (double t : shared_grid(traj)) {
            const auto [u, v] = traj.eval(t);
            const auto s = eval_coefficients(sys, t, u, v);
            min_qr = std::min({min_qr, s.q, s.r});
        }
        bool ok = min_qr >= -1e-12;
        for (double gamma : {0.0, 0.5, 1.0}) {
            for (RiccatiKind kind : {RiccatiKind::Y, RiccatiKind::Z}) {
                const auto trace = solve_riccati(traj, sys, kind, gamma);
                for (double y : trace.values) ok = ok && y >= -1e-9;
            }
        }
        if (!ok) detail << (idx ? "; " : "") << "case " << idx << " (" << c.name << ") failed";
        pass = pass && ok;
        ++idx;
    }
    report(5, "ratio traces from gamma in {0, 0.5, 1} stay nonnegative on 5 trajectories",
           pass, detail.str());
}

// --- criterion 6: representation residuals and a-priori bounds -------------

void criterion6() {
    bool pass = true;
    std::ostringstream detail;

    struct Case {
        const char* label;
        PseudoLinearSystem sys;
        EnvelopeSet env;
        double phi0, psi0, t0, T;
    };
    const auto vdp = corpus_get("vdp-parametric");
    const auto ef = corpus_get("emden-fowler");
    std::vector<Case> cases;
    cases.push_back({"harmonic", harmonic(), harmonic_envelopes(), 1.0, 0.0, 0.0, 5.0});
    cases.push_back({"vdp", vdp.system(), *vdp.envelopes(), 2.0, 0.0, 0.0, 10.0});
    cases.push_back({"emden", ef.system(), *ef.envelopes(), 0.5, 0.9, 1.0, 3.0});

    for (const auto& c : cases) {
        const auto traj = integrate(c.sys, c.phi0, c.psi0, c.t0, c.T);
        const auto data = compute_volterra_data(traj, c.sys);
        const auto [r1, r2] = volterra_residual(traj, data);
        detail << c.label << ": residuals " << r1 << "/" << r2;
        pass = pass && r1 <= 1e-5 && r2 <= 1e-5;

        const auto hyp = check_envelope_t31(c.sys, c.env, c.t0, c.T, {});
        if (!hyp.falsified) {
            const auto b = envelope_bounds(c.env, c.phi0, c.psi0, c.t0, c.T);
            const bool contained =
                b.contains1(traj.max_abs_phi()) && b.contains2(traj.max_abs_psi());
            detail << " bound-ok=" << (contained ? "y" : "N");
            pass = pass && contained;
        }
        detail << "; ";
    }
    report(6, "Volterra identity residuals <= 1e-5 and a-priori bound containment", pass,
           detail.str());
}

// --- criterion 7: blow-up detection and dishonest envelopes ----------------

void criterion7() {
    bool pass = true;
    std::ostringstream detail;
    PseudoLinearSystem blowup([](double, double u, double) { return u; }, constant(0),
                              constant(0), constant(0), constant(0), constant(0), 0.0);
    for (double phi0 : {0.5, 1.0, 2.0}) {
        const auto traj = integrate(blowup, phi0, 0.0, 0.0, 3.0);
        const bool ok = traj.status == TrajectoryStatus::BlewUp &&
                        std::abs(traj.t_blow - 1.0 / phi0) < 1e-3;
        detail << "phi0=" << phi0 << " t_blow=" << traj.t_blow << "; ";
        pass = pass && ok;
    }
    EnvelopeSet env = EnvelopeSet::zero();
    env.P0 = [](double) { return 1.0; }; // dishonest: P = u is unbounded above
    bool never_certified = true;
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
        SamplingPlan plan;
        plan.rng_seed = seed;
        const auto cert = certify_t31(blowup, env, 1.0, 0.0, 2.0, plan);
        never_certified = never_certified && cert.verdict == Verdict::HypothesisFalsified;
    }
    detail << (never_certified ? "dishonest envelopes always falsified"
                               : "dishonest envelopes slipped through");
    pass = pass && never_certified;
    report(7, "blow-up times within 1e-3 of 1/phi0; dishonest envelopes never certify", pass,
           detail.str());
}

// --- criterion 8: numerical hygiene -----------------------------------------

void criterion8() {
    bool pass = true;
    std::ostringstream detail;

    { // quadrature order on a log-log fit
        std::vector<double> hs, errs;
        for (std::size_t n : {17, 33, 65, 129, 257}) {
            const auto f =
                sample([](double t) { return 1.0 / (1.0 + t); }, uniform_nodes(0, 1, n));
            const auto F = cumulative_integral(f);
            hs.push_back(1.0 / static_cast<double>(n - 1));
            errs.push_back(std::abs(F.values.back() - std::log(2.0)));
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < hs.size(); ++i) {
            const double x = std::log(hs[i]), y = std::log(errs[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double m = static_cast<double>(hs.size());
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        detail << "quadrature slope " << slope;
        pass = pass && slope >= 3.7;
    }

    { // integrator self-convergence across corpus defaults
        bool ok = true;
        for (const auto& name : corpus_names()) {
            const auto entry = corpus_get(name);
            const auto sys = entry.system();
            const double t0 = entry.t0(), T = t0 + 10.0;
            IntegrationConfig coarse, fine;
            coarse.rtol = 1e-6;
            coarse.atol = 1e-8;
            fine.rtol = 5e-7;
            fine.atol = 4e-9;
            const auto a = integrate(sys, 1.0, 0.5, t0, T, coarse);
            const auto b = integrate(sys, 1.0, 0.5, t0, T, fine);
            if (a.status == TrajectoryStatus::Completed &&
                b.status == TrajectoryStatus::Completed) {
                const double scale = std::max(1.0, std::abs(b.phi.back()));
                ok = ok && std::abs(a.phi.back() - b.phi.back()) <= 10.0 * coarse.rtol * scale;
            }
        }
        detail << "; self-convergence " << (ok ? "ok" : "FAILED");
        pass = pass && ok;
    }

    { // byte-identical seeded CLI runs
        auto run_cli = [](const std::string& args) {
            const std::string cmd = std::string(PSEUDOLIN_CLI_PATH) + " " + args +
                                    " > /dev/null 2>&1";
            return std::system(cmd.c_str());
        };
        auto slurp = [](const fs::path& p) {
            std::ifstream in(p, std::ios::binary);
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        const fs::path base = "acceptance_cli";
        fs::remove_all(base);
        fs::create_directories(base / "a");
        fs::create_directories(base / "b");
        const std::string args =
            "certify-t31 --system vdp-parametric --phi0 2 --psi0 0 --T 20 --seed 11 --out ";
        bool identical = run_cli(args + (base / "a").string()) == 0 &&
                         run_cli(args + (base / "b").string()) == 0;
        for (const char* f : {"trajectory.csv", "certificate.kv", "certificate.txt"})
            identical = identical && slurp(base / "a" / f) == slurp(base / "b" / f) &&
                        !slurp(base / "a" / f).empty();
        detail << "; deterministic CLI " << (identical ? "ok" : "FAILED");
        pass = pass && identical;
    }

    report(8, "quadrature order, self-convergence, deterministic CLI output", pass,
           detail.str());
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    if (failures != 0) std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
