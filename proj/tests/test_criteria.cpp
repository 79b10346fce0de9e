#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pseudolin/corpus.hpp"
#include "pseudolin/criteria.hpp"

using namespace pseudolin;

namespace {

Field constant(double c) {
    return [c](double, double, double) { return c; };
}

PseudoLinearSystem zero_system() {
    return PseudoLinearSystem::homogeneous_system(constant(0), constant(0), constant(0),
                                                  constant(0), 0.0);
}

// Nonlinear homogeneous system whose coefficients decay fast enough for the
// positivity criterion to hold on the whole box: 0 <= Q <= e^-t,
// 0 <= R <= e^-2t for every (u, v), and B = P - S = 0 exactly.
PseudoLinearSystem decaying_system() {
    return PseudoLinearSystem::homogeneous_system(
        constant(0),
        [](double t, double u, double v) {
            return std::exp(-t) * (2.0 + std::sin(u * v)) / 3.0;
        },
        [](double t, double u, double) {
            return std::exp(-2.0 * t) * u * u / (1.0 + u * u);
        },
        constant(0), 0.0);
}

EnvelopeSet decaying_envelopes() {
    EnvelopeSet env = EnvelopeSet::zero();
    env.Q0 = [](double t) { return std::exp(-t); };
    env.R0 = [](double t) { return std::exp(-2.0 * t); };
    return env;
}

} // namespace

TEST_CASE("envelope check: parametric van der Pol has no falsifying sample") {
    const auto entry = corpus_get("vdp-parametric");
    const auto rep = check_envelope_t31(entry.system(), *entry.envelopes(), 0.0, 50.0, {});
    CHECK_FALSE(rep.falsified);
    for (const auto& m : rep.inequalities) CHECK(m.min_margin >= 0.0);
}

TEST_CASE("envelope check: a dishonest S0 is falsified with a witness") {
    const auto entry = corpus_get("vdp-parametric");
    auto env = *entry.envelopes();
    env.S0 = [](double) { return 0.01; };
    const auto rep = check_envelope_t31(entry.system(), env, 0.0, 50.0, {});
    CHECK(rep.falsified);
    const InequalityMargin* w = rep.worst();
    REQUIRE(w != nullptr);
    CHECK(w->name == "S<=S0");
    CHECK(w->min_margin < 0.0);
    CHECK(std::abs(w->worst.u) < 0.95); // S = 0.1(1 - u^2) > 0.01 needs |u| < ~0.95
}

TEST_CASE("envelope check: equality case has zero margin") {
    const auto entry = corpus_get("emden-fowler");
    const auto rep = check_envelope_t31(entry.system(), *entry.envelopes(), 1.0, 5.0, {});
    const InequalityMargin* q = nullptr;
    for (const auto& m : rep.inequalities)
        if (m.name == "|Q|<=Q0") q = &m;
    REQUIRE(q != nullptr);
    CHECK(std::abs(q->min_margin) < 1e-14); // Q == Q0 exactly
}

TEST_CASE("sampling monotonicity: retained falsifiers keep a larger plan falsified") {
    const auto entry = corpus_get("vdp-parametric");
    auto env = *entry.envelopes();
    env.S0 = [](double) { return 0.01; };
    SamplingPlan small;
    small.t_nodes = 16;
    small.uv_samples = 64;
    small.rng_seed = 1;
    const auto rep1 = check_envelope_t31(entry.system(), env, 0.0, 10.0, small);
    REQUIRE(rep1.falsified);
    const SamplePoint witness = rep1.worst()->worst;
    SamplingPlan bigger;
    bigger.t_nodes = 64;
    bigger.uv_samples = 256;
    bigger.rng_seed = 999;
    const auto rep2 = check_envelope_t31(entry.system(), env, 0.0, 10.0, bigger, {witness});
    CHECK(rep2.falsified);
}

TEST_CASE("bound curves: all-zero envelopes give constant curves") {
    const auto grid = uniform_nodes(0, 5, 65);
    const auto [K, L] = compute_KL_curves(EnvelopeSet::zero(), 0.7, 1.3, grid);
    for (double x : K.values) CHECK(x == 0.7);
    for (double x : L.values) CHECK(x == 1.3);
    CHECK(K.values.front() == 0.7);
    CHECK(L.values.front() == 1.3);
}

TEST_CASE("bound curves: P0 = 1, Q0 = 0 gives a bare exponential") {
    EnvelopeSet env = EnvelopeSet::zero();
    env.P0 = [](double) { return 1.0; };
    const auto grid = uniform_nodes(0, 3, 257);
    const auto [K, L] = compute_KL_curves(env, 2.0, 1.0, grid);
    (void)L;
    for (std::size_t i = 0; i < grid.size(); i += 31)
        CHECK(K.values[i] == doctest::Approx(2.0 * std::exp(grid[i])).epsilon(1e-10));
}

TEST_CASE("bound curves: L matches the closed form for Emden-Fowler envelopes") {
    EmdenFowlerParams p{0.0, -3.0, 2.0, 1.0};
    const auto env = emden_fowler_envelopes(p);
    const double c1 = 0.5, c2 = 0.9;
    const auto grid = uniform_nodes(1.0, 10.0, 4097);
    const auto [K, L] = compute_KL_curves(env, c1, c2, grid);
    (void)K;
    for (std::size_t i = 0; i < grid.size(); i += 256) {
        const double exact = emden_fowler_L_closed_form(grid[i], c1, c2, p);
        CHECK(std::abs(L.values[i] - exact) <= 1e-8 * exact);
    }
}

TEST_CASE("bound curves: brute-force nested quadrature oracle with a nonzero bracket") {
    // independent O(N^2) evaluation with plain Simpson sub-quadratures
    EnvelopeSet env = EnvelopeSet::zero();
    env.P0 = [](double) { return 0.1; };
    env.Q0 = [](double t) { return 1.0 / (1.0 + t); };
    env.R0 = [](double) { return 0.5; };
    env.B1 = [](double) { return -0.2; };
    const double c1 = 0.8, c2 = 1.4;
    auto simpson = [](const std::function<double(double)>& f, double a, double b, int n) {
        // n even panels
        const double h = (b - a) / n;
        double s = f(a) + f(b);
        for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
        return s * h / 3.0;
    };
    auto bracket = [&](double tau) {
        const double decay = std::exp(0.2 * tau); // e^{-int B1} with B1 = -0.2
        const double inner = simpson(
            [&](double z) { return std::exp(0.2 * (tau - z)) * env.R0(z); }, 0.0, tau,
            200);
        return (c2 / c1) * decay + inner;
    };
    auto K_exact = [&](double t) {
        const double outer =
            simpson([&](double tau) { return env.Q0(tau) * bracket(tau); }, 0.0, t, 400);
        return c1 * std::exp(0.1 * t + outer);
    };
    const auto grid = uniform_nodes(0.0, 4.0, 1025);
    const auto [K, L] = compute_KL_curves(env, c1, c2, grid);
    (void)L;
    for (double t : {1.0, 2.5, 4.0}) {
        const std::size_t i = static_cast<std::size_t>(t / 4.0 * 1024.0);
        CHECK(K.values[i] == doctest::Approx(K_exact(grid[i])).epsilon(1e-7));
    }
}

TEST_CASE("certify_t31: zero system is certified with a constant trajectory") {
    const auto cert = certify_t31(zero_system(), EnvelopeSet::zero(), 1.5, -2.0, 10.0);
    CHECK(cert.verdict == Verdict::Certified);
    CHECK(cert.max_abs_phi == 1.5);
    CHECK(cert.max_abs_psi == 2.0);
}

TEST_CASE("certify_t31: parametric van der Pol is certified to T = 50") {
    const auto entry = corpus_get("vdp-parametric");
    const auto cert = certify_t31(entry.system(), *entry.envelopes(), 2.0, 0.0, 50.0);
    CHECK(cert.verdict == Verdict::Certified);
    CHECK(cert.trajectory_status == TrajectoryStatus::Completed);
    CHECK(cert.apriori.has_value());
}

TEST_CASE("certify_t31: dishonest envelopes around a blow-up are falsified, never certified") {
    PseudoLinearSystem sys([](double, double u, double) { return u; }, constant(0),
                           constant(0), constant(0), constant(0), constant(0), 0.0);
    EnvelopeSet env = EnvelopeSet::zero();
    env.P0 = [](double) { return 1.0; }; // false: P = u is unbounded
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
        SamplingPlan plan;
        plan.rng_seed = seed;
        const auto cert = certify_t31(sys, env, 1.0, 0.0, 2.0, plan);
        CHECK(cert.verdict == Verdict::HypothesisFalsified);
        CHECK(cert.verdict != Verdict::Certified);
        CHECK(cert.hypothesis_report.worst()->worst.u > 1.0);
    }
}

TEST_CASE("certify_t32: constant system sits exactly on its bound curves") {
    const auto cert =
        certify_t32(zero_system(), EnvelopeSet::zero(), 1.0, 2.0, 0.1, 5.0);
    CHECK(cert.verdict == Verdict::Certified);
    CHECK(cert.max_ratio_phi == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cert.max_ratio_psi == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cert.min_phi > 0);
    CHECK(cert.min_psi > 0);
}

TEST_CASE("certify_t32: decaying nonlinear system is genuinely certified") {
    const auto cert =
        certify_t32(decaying_system(), decaying_envelopes(), 1.0, 1.0, 0.1, 20.0);
    CHECK(cert.verdict == Verdict::Certified);
    CHECK_FALSE(cert.hypothesis_report.falsified);
    CHECK(cert.min_phi > 0);
    CHECK(cert.min_psi > 0);
    CHECK(cert.max_ratio_phi <= 1.0 + 1e-6);
    CHECK(cert.max_ratio_psi <= 1.0 + 1e-6);
}

TEST_CASE("certify_t32 rejects inhomogeneous systems") {
    const auto sys = corpus_get("duffing").system();
    CHECK_THROWS_AS(certify_t32(sys, EnvelopeSet::zero(), 1.0, 1.0, 0.1, 5.0),
                    NotHomogeneous);
}

TEST_CASE("certify_t32: Emden-Fowler classical envelopes are honestly falsified") {
    // The K-box grows past u = 1, where R = t^sigma u^(n-1) exceeds R0 = t^sigma;
    // the measured trajectory also overshoots L. Every part is reported as-is.
    const auto entry = corpus_get("emden-fowler");
    const auto cert =
        certify_t32(entry.system(), *entry.envelopes(), 0.5, 0.9, 0.1, 10.0);
    CHECK(cert.verdict == Verdict::HypothesisFalsified);
    const InequalityMargin* w = nullptr;
    for (const auto& m : cert.hypothesis_report.inequalities)
        if (m.name == "R<=R0") w = &m;
    REQUIRE(w != nullptr);
    CHECK(w->falsified);
    CHECK(w->worst.u > 1.0);
    // conclusion fails too: psi crosses L well inside the horizon
    CHECK(cert.max_ratio_psi > 1.5);
    // phi/K peaks at t0 (phi(t0) = c1 = K(t0)); K dwarfs phi afterwards
    CHECK(cert.max_ratio_phi == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("certificates serialize deterministically") {
    const auto cert =
        certify_t32(decaying_system(), decaying_envelopes(), 1.0, 1.0, 0.1, 5.0);
    std::ostringstream a, b;
    cert.write_kv(a);
    cert.write_kv(b);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("verdict=certified") != std::string::npos);
    CHECK(a.str().find("ratio.phi.max=") != std::string::npos);
    std::ostringstream txt;
    cert.write_text(txt);
    CHECK(txt.str().find("verdict: certified") != std::string::npos);
}

TEST_CASE("t32 box sampling probes the corner of the box deterministically") {
    // a system violating the bound only near the corner is still caught
    auto sys = PseudoLinearSystem::homogeneous_system(
        constant(0),
        [](double, double u, double v) { return (u > 0.9 && v > 0.9) ? 2.0 : 0.5; },
        constant(0), constant(0), 0.0);
    EnvelopeSet env = EnvelopeSet::zero();
    env.Q0 = [](double) { return 1.0; };
    const auto traj_grid = uniform_nodes(0, 1, 65);
    const auto [K, L] = compute_KL_curves(env, 0.5, 0.5, traj_grid);
    SamplingPlan plan;
    plan.uv_samples = 2; // corner + one draw: the corner alone must falsify
    const auto rep = check_envelope_t32(sys, env, K, L, 0.5, plan);
    CHECK(rep.falsified);
}
