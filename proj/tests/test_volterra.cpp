#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pseudolin/corpus.hpp"
#include "pseudolin/criteria.hpp"
#include "pseudolin/volterra.hpp"

using namespace pseudolin;

namespace {

Field constant(double c) {
    return [c](double, double, double) { return c; };
}

PseudoLinearSystem harmonic() {
    return PseudoLinearSystem::homogeneous_system(constant(0), constant(1), constant(-1),
                                                  constant(0), 0.0);
}

EnvelopeSet const_env(double P0, double Q0, double R0, double S0, double F0 = 0,
                      double G0 = 0) {
    EnvelopeSet env = EnvelopeSet::zero();
    env.P0 = [P0](double) { return P0; };
    env.Q0 = [Q0](double) { return Q0; };
    env.R0 = [R0](double) { return R0; };
    env.S0 = [S0](double) { return S0; };
    env.F0 = [F0](double) { return F0; };
    env.G0 = [G0](double) { return G0; };
    return env;
}

} // namespace

TEST_CASE("kernel of the decoupled unit system is t - zeta") {
    const auto sys = PseudoLinearSystem::homogeneous_system(constant(0), constant(1),
                                                            constant(1), constant(0), 0.0);
    const auto traj = integrate(sys, 1.0, 0.0, 0.0, 2.0);
    REQUIRE(traj.status == TrajectoryStatus::Completed);
    const auto data = compute_volterra_data(traj, sys);
    REQUIRE(data.K1.has_value());
    for (std::size_t i = 0; i < data.nodes.size(); i += 17) {
        const auto& row = (*data.K1)[i];
        CHECK(row[i] == 0.0); // diagonal is the empty inner interval
        for (std::size_t k = 0; k <= i; k += 5)
            CHECK(row[k] ==
                  doctest::Approx(data.nodes[i] - data.nodes[k]).epsilon(1e-10));
    }
}

TEST_CASE("kernel matches the closed form for constant coefficients") {
    // P = 0.1, S = -0.2, Q = 1, R = 0.5:
    // K1(t,z) = 0.5 e^{0.1 t + 0.2 z} (e^{-0.3 z} - e^{-0.3 t}) / 0.3
    const auto sys = PseudoLinearSystem::homogeneous_system(
        constant(0.1), constant(1), constant(0.5), constant(-0.2), 0.0);
    const auto traj = integrate(sys, 1.0, 1.0, 0.0, 3.0);
    REQUIRE(traj.status == TrajectoryStatus::Completed);
    const auto data = compute_volterra_data(traj, sys);
    for (std::size_t i = 0; i < data.nodes.size(); i += 41) {
        const double t = data.nodes[i];
        const auto row = data.kernel_row(1, i);
        for (std::size_t k = 0; k <= i; k += 13) {
            const double z = data.nodes[k];
            const double exact = 0.5 * std::exp(0.1 * t + 0.2 * z) *
                                 (std::exp(-0.3 * z) - std::exp(-0.3 * t)) / 0.3;
            CHECK(row[k] == doctest::Approx(exact).epsilon(1e-8));
        }
    }
}

TEST_CASE("Q = 0 kills the kernel and phi equals the free term") {
    PseudoLinearSystem sys([](double t, double, double) { return std::cos(t); }, constant(0),
                           constant(1), constant(0), constant(0), constant(0), 0.0, true);
    IntegrationConfig cfg;
    cfg.rtol = 1e-11;
    cfg.atol = 1e-13;
    const auto traj = integrate(sys, 1.0, 1.0, 0.0, 4.0, cfg);
    REQUIRE(traj.status == TrajectoryStatus::Completed);
    const auto data = compute_volterra_data(traj, sys);
    for (std::size_t i = 0; i < data.nodes.size(); i += 23)
        for (double x : data.kernel_row(1, i)) CHECK(x == 0.0);
    const auto [res_phi, res_psi] = volterra_residual(traj, data);
    (void)res_psi;
    CHECK(res_phi < 1e-8);
}

TEST_CASE("representation identity on the harmonic oscillator") {
    const auto sys = harmonic();
    const auto traj = integrate(sys, 1.0, 0.0, 0.0, 5.0);
    const auto data = compute_volterra_data(traj, sys);
    const auto [res_phi, res_psi] = volterra_residual(traj, data);
    CHECK(res_phi < 1e-5);
    CHECK(res_psi < 1e-5);
}

TEST_CASE("representation identity on the parametric van der Pol run") {
    const auto sys = corpus_get("vdp-parametric").system();
    const auto traj = integrate(sys, 2.0, 0.0, 0.0, 10.0);
    REQUIRE(traj.status == TrajectoryStatus::Completed);
    const auto data = compute_volterra_data(traj, sys);
    const auto [res_phi, res_psi] = volterra_residual(traj, data);
    CHECK(res_phi < 1e-5);
    CHECK(res_psi < 1e-5);
}

TEST_CASE("representation identity on the Emden-Fowler run") {
    const auto sys = corpus_get("emden-fowler").system();
    const auto traj = integrate(sys, 0.5, 0.9, 1.0, 3.0);
    REQUIRE(traj.status == TrajectoryStatus::Completed);
    const auto data = compute_volterra_data(traj, sys);
    const auto [res_phi, res_psi] = volterra_residual(traj, data);
    CHECK(res_phi < 1e-5);
    CHECK(res_psi < 1e-5);
}

TEST_CASE("source-term weighting: only the derivation form closes the identity") {
    // Duffing (S != 0, G != 0): the phi-side free term separates the readings
    const auto duffing = corpus_get("duffing").system();
    const auto traj_d = integrate(duffing, 1.0, 0.0, 0.0, 5.0);
    REQUIRE(traj_d.status == TrajectoryStatus::Completed);
    const auto data_d = compute_volterra_data(traj_d, duffing);
    const auto [res_phi, res_psi] = volterra_residual(traj_d, data_d);
    CHECK(res_phi < 1e-5);
    CHECK(res_psi < 1e-5);
    const auto [alt_phi, alt_psi_same] =
        volterra_residual(traj_d, data_d, SourceTermForm::UnweightedFull);
    CHECK(alt_phi > 100 * std::max(res_phi, 1e-12));
    // Duffing has F = 0, so the psi-side free terms coincide
    CHECK(alt_psi_same == doctest::Approx(res_psi).epsilon(1e-6));

    // fully inhomogeneous damped system: both sides separate
    PseudoLinearSystem sys(constant(-0.3), constant(1), constant(-1), constant(-0.2),
                           [](double t, double, double) { return 0.4 * std::cos(t); },
                           [](double t, double, double) { return 0.5 * std::sin(t); }, 0.0);
    const auto traj = integrate(sys, 1.0, 0.0, 0.0, 5.0);
    REQUIRE(traj.status == TrajectoryStatus::Completed);
    const auto data = compute_volterra_data(traj, sys);
    const auto [r1, r2] = volterra_residual(traj, data);
    CHECK(r1 < 1e-5);
    CHECK(r2 < 1e-5);
    const auto [a1, a2] = volterra_residual(traj, data, SourceTermForm::UnweightedFull);
    CHECK(a1 > 100 * std::max(r1, 1e-12));
    CHECK(a2 > 100 * std::max(r2, 1e-12));
}

TEST_CASE("envelope bounds: worked unit example") {
    const auto b = envelope_bounds(const_env(0, 1, 1, 0), 1.0, 1.0, 0.0, 1.0);
    CHECK(b.m1 == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(b.M1 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(b.bound1 == doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-9));
    CHECK(b.m2 == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(b.bound2 == doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-9));
    CHECK_FALSE(b.overflow1);
}

TEST_CASE("envelope bounds: all-zero envelopes leave only the initial data") {
    const auto b = envelope_bounds(EnvelopeSet::zero(), 1.0, 1.0, 0.0, 1.0);
    CHECK(b.m1 == doctest::Approx(1.0).epsilon(1e-12)); // cross term carries weight Q0 = 0
    CHECK(b.m2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.M1 == 0.0);
    CHECK(b.M2 == 0.0);
    CHECK(b.bound1 == doctest::Approx(b.m1));
    CHECK(b.bound2 == doctest::Approx(b.m2));
}

TEST_CASE("domination: trajectory kernels under honest envelopes") {
    const auto sys = corpus_get("vdp-parametric").system();
    const auto env = *corpus_get("vdp-parametric").envelopes();
    const auto traj = integrate(sys, 2.0, 0.0, 0.0, 5.0);
    REQUIRE(traj.status == TrajectoryStatus::Completed);
    const auto data = compute_volterra_data(traj, sys);
    const auto env_data = envelope_volterra_data(env, 2.0, 0.0, data.nodes);
    const double tol = 1e-9;
    for (std::size_t i = 0; i < data.nodes.size(); ++i) {
        CHECK(std::abs(data.v1.values[i]) <= env_data.v1.values[i] + tol);
        CHECK(std::abs(data.v2.values[i]) <= env_data.v2.values[i] + tol);
    }
    for (std::size_t i = 0; i < data.nodes.size(); i += 37) {
        const auto row = data.kernel_row(1, i);
        const auto env_row = env_data.kernel_row(1, i);
        for (std::size_t k = 0; k <= i; ++k)
            CHECK(std::abs(row[k]) <= env_row[k] + tol);
    }
}

TEST_CASE("a-priori bound contains the trajectory sup norms") {
    const auto sys = corpus_get("vdp-parametric").system();
    const auto env = *corpus_get("vdp-parametric").envelopes();
    const auto traj = integrate(sys, 2.0, 0.0, 0.0, 10.0);
    REQUIRE(traj.status == TrajectoryStatus::Completed);
    const auto b = envelope_bounds(env, 2.0, 0.0, 0.0, 10.0);
    CHECK(b.contains1(traj.max_abs_phi()));
    CHECK(b.contains2(traj.max_abs_psi()));
}

TEST_CASE("every corpus entry whose envelope check passes obeys its a-priori bound") {
    for (const auto& name : corpus_names()) {
        const auto entry = corpus_get(name);
        const auto env = entry.envelopes();
        if (!env) continue;
        const auto sys = entry.system();
        const double t0 = entry.t0(), T = t0 + 5.0;
        const auto hyp = check_envelope_t31(sys, *env, t0, T, {});
        if (hyp.falsified) continue; // e.g. emden-fowler outside |u| <= 1
        const auto traj = integrate(sys, 1.0, 0.5, t0, T);
        REQUIRE(traj.status == TrajectoryStatus::Completed);
        const auto b = envelope_bounds(*env, 1.0, 0.5, t0, T);
        CHECK(b.contains1(traj.max_abs_phi()));
        CHECK(b.contains2(traj.max_abs_psi()));
    }
}

TEST_CASE("extreme envelopes overflow to a flagged +inf bound, not a crash") {
    const auto b = envelope_bounds(const_env(100, 1, 1, 100), 1.0, 1.0, 0.0, 10.0);
    CHECK(b.overflow1);
    CHECK(std::isinf(b.bound1));
    CHECK(b.contains1(1e300)); // log-space comparison still works
}

TEST_CASE("grids above the table limit stream kernel rows instead") {
    const auto nodes = uniform_nodes(0.0, 1.0, 4200);
    const auto data = envelope_volterra_data(const_env(0, 1, 1, 0), 1.0, 1.0, nodes);
    CHECK_FALSE(data.K1.has_value());
    CHECK_FALSE(data.K2.has_value());
    const auto row = data.kernel_row(1, 4199);
    REQUIRE(row.size() == 4200);
    CHECK(row.back() == 0.0);
    // same t - zeta kernel as the materialized path
    CHECK(row.front() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("log-space bound survives kernel amplification that overflows double") {
    // m finite, M large: bound overflows but its logarithm stays usable
    const auto b = envelope_bounds(const_env(0, 1, 100, 0.5), 1.0, 1.0, 0.0, 50.0);
    CHECK(b.overflow1);
    CHECK(std::isfinite(b.log_bound1));
    CHECK(b.contains1(123.0));
}
