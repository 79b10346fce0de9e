#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pseudolin/envelope.hpp"
#include "pseudolin/integrate.hpp"
#include "pseudolin/system.hpp"
#include "pseudolin/volterra.hpp"

namespace pseudolin {

/// Finite falsification plan for the for-all-(t,u,v) envelope hypotheses.
/// Sampling can refute a hypothesis (negative margin with the witness sample)
/// but never prove it; certificates state this explicitly.
struct SamplingPlan {
    int t_nodes = 64;          // sample times across [t0, T]
    double u_min = -10.0, u_max = 10.0; // (u,v) box, envelope-criterion mode only
    double v_min = -10.0, v_max = 10.0;
    int uv_samples = 256;      // (u,v) draws per sample time
    std::uint64_t rng_seed = 42;
};

/// One sampled point (kept falsifiers are re-checked by enlarged plans).
struct SamplePoint {
    double t, u, v;
};

/// Worst observed margin of one hypothesis inequality; margin < 0 falsifies.
struct InequalityMargin {
    std::string name;
    double min_margin = 0.0;
    SamplePoint worst{0, 0, 0};
    bool falsified = false;
};

struct HypothesisReport {
    std::vector<InequalityMargin> inequalities;
    bool falsified = false;

    const InequalityMargin* worst() const; // most negative margin, or nullptr if empty
};

/// Sampled envelope check, envelope-criterion mode: inequalities
/// P <= P0, |Q| <= Q0, |R| <= R0, S <= S0, |F| <= F0, |G| <= G0
/// over t in [t0, T] and (u, v) uniform in the plan's box.
HypothesisReport check_envelope_t31(const PseudoLinearSystem& sys, const EnvelopeSet& env,
                                    double t0, double T, const SamplingPlan& plan,
                                    const std::vector<SamplePoint>& extra_samples = {});

/// Sampled bound curve K or L with its accumulated quadrature error estimate.
/// values > 0; value at the first node is exactly c1 (K) or c2 (L). Past an
/// exponent overflow the values are +inf sentinels and overflow is set.
struct BoundCurve {
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<double> quad_error;
    bool overflow = false;

    double at(std::size_t i) const { return values[i]; }
};

/// Exponential-integral majorant curves of the positivity criterion:
///   K(t) = c1 exp{int P0 + int Q0(tau)[(c2/c1) e^{-int_{t0}^{tau} B1}
///                                      + int_{t0}^{tau} e^{-int_zeta^tau B1} R0(zeta) dzeta] dtau}
///   L(t) = c2 exp{int S0 + int R0(tau)[(c1/c2) e^{+int B2}
///                                      + int_{t0}^{tau} e^{+int_zeta^tau B2} Q0(zeta) dzeta] dtau}.
std::pair<BoundCurve, BoundCurve> compute_KL_curves(const EnvelopeSet& env,
                                                    double c1, double c2,
                                                    const std::vector<double>& grid);

/// Sampled envelope check, positivity-criterion mode: inequalities
/// P <= P0, S <= S0, 0 <= Q <= Q0, 0 <= R <= R0, B1 <= B <= B2 over the
/// t-dependent box u in (0, K(t)+eps], v in (0, L(t)+eps], sampled
/// log-uniformly with the box corner always included.
HypothesisReport check_envelope_t32(const PseudoLinearSystem& sys, const EnvelopeSet& env,
                                    const BoundCurve& K, const BoundCurve& L, double eps,
                                    const SamplingPlan& plan,
                                    const std::vector<SamplePoint>& extra_samples = {});

enum class Verdict { Certified, HypothesisFalsified, BoundViolated, Inconclusive };

const char* to_string(Verdict v);
const char* to_string(TrajectoryStatus s);

/// Structured outcome of a certification run: the hypothesis margins, the
/// a-priori bound comparison, and the trajectory itself. Certified means
/// "hypotheses unfalsified under the plan AND the numerically integrated
/// conclusion holds within tolerance" — never a proof of the hypotheses.
struct Certificate {
    enum class Criterion { Envelope, Positivity }; // T31 / T32 routes
    Criterion criterion = Criterion::Envelope;

    std::string system_name = "custom";
    double t0 = 0.0, horizon = 0.0;
    double phi0 = 0.0, psi0 = 0.0;
    SamplingPlan plan;
    double eps = 0.0; // positivity mode box margin

    HypothesisReport hypothesis_report;
    TrajectoryStatus trajectory_status = TrajectoryStatus::Completed;

    // envelope mode
    std::optional<VolterraBound> apriori;
    double max_abs_phi = 0.0, max_abs_psi = 0.0;

    // positivity mode
    std::optional<BoundCurve> K, L;
    double max_ratio_phi = 0.0, max_ratio_psi = 0.0; // max phi/K, psi/L over nodes
    double min_phi = 0.0, min_psi = 0.0;

    Verdict verdict = Verdict::Inconclusive;
    double violation_time = 0.0;
    std::string violation_what;

    Trajectory trajectory;

    void write_text(std::ostream& os) const;  // human-readable report
    void write_kv(std::ostream& os) const;    // flat key=value, machine-readable
};

/// Envelope-criterion certification: check domination by sampling, integrate,
/// and compare the trajectory sup norms against the a-priori exponential
/// bounds (relative tolerance 1e-6, log-space when the bound overflows).
Certificate certify_t31(const PseudoLinearSystem& sys, const EnvelopeSet& env,
                        double phi0, double psi0, double T,
                        const SamplingPlan& plan = {}, const IntegrationConfig& cfg = {});

/// Positivity-and-containment certification for homogeneous systems started
/// exactly at (c1, c2): compute K/L on the trajectory's shared grid, check the
/// box-restricted hypotheses by sampling, and verify 0 < phi <= K(1+1e-6),
/// 0 < psi <= L(1+1e-6) at every grid node. Throws NotHomogeneous otherwise.
Certificate certify_t32(const PseudoLinearSystem& sys, const EnvelopeSet& env,
                        double c1, double c2, double eps, double T,
                        const SamplingPlan& plan = {}, const IntegrationConfig& cfg = {});

} // namespace pseudolin
