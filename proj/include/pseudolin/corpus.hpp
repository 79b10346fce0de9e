#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pseudolin/envelope.hpp"
#include "pseudolin/system.hpp"

namespace pseudolin {

using ParamMap = std::map<std::string, double>;

/// A ready-made oscillator/system with merged parameters. Obtained from
/// corpus_get; system() builds the coefficient fields from params.
struct CorpusEntry {
    std::string name;
    std::string description;
    std::string citation;            // original textbook / article source
    ParamMap params;                 // defaults merged with overrides

    PseudoLinearSystem system() const;
    /// Honest time-only envelopes where they exist for all (u,v) — or, for
    /// emden-fowler, the classical ones valid on |u| <= 1. nullopt where no
    /// time-only envelope dominates the entry's nonlinearity.
    std::optional<EnvelopeSet> envelopes() const;

    double t0() const { return params.at("t0"); }
};

/// Names of all registered entries, in registry order.
const std::vector<std::string>& corpus_names();

/// Look up an entry and merge parameter overrides over its defaults.
/// Throws UnknownEntry for unregistered names and InvalidParam for unknown
/// parameter names or out-of-domain values (e.g. emden-fowler t0 <= 0, n <= 1).
CorpusEntry corpus_get(const std::string& name, const ParamMap& overrides = {});

/// Parameters of the generalized Emden-Fowler system
///   phi' = t^(-rho) psi,  psi' = t^sigma |phi|^(n-1) phi,  t >= t0 > 0, n > 1.
struct EmdenFowlerParams {
    double rho = 0.0;
    double sigma = -3.0;
    double n = 2.0;
    double t0 = 1.0;

    void validate() const; // throws InvalidParam
};

/// Closed-form value of the L bound curve for the Emden-Fowler envelopes
/// (P0=S0=0, Q0=t^-rho, R0=t^sigma, B1=B2=0). Covers the two classical cases
///   rho != 1, sigma != -1, 2+sigma-rho != 0   and   rho = 1, sigma != -1;
/// throws UnsupportedParameterCase otherwise (use compute_KL_curves then).
double emden_fowler_L_closed_form(double t, double c1, double c2,
                                  const EmdenFowlerParams& p);

/// One evaluated sub-inequality of the admissibility conditions.
struct ConditionMargin {
    std::string name;
    double margin;   // >= 0 means the sub-inequality holds
    bool holds;
};

/// Which of the three classical admissibility conditions hold for (c1, c2).
/// cond2_printed follows the source text literally (its second bound reads
/// c1); cond2_alt evaluates the same bound with c2, the suspected intended
/// reading. Both are exposed rather than silently guessing.
struct ConditionReport {
    bool cond1 = false;
    bool cond2_printed = false;
    bool cond2_alt = false;
    bool cond3 = false;
    std::vector<ConditionMargin> margins;

    bool any() const { return cond1 || cond2_printed || cond2_alt || cond3; }
};

ConditionReport emden_fowler_condition_check(const EmdenFowlerParams& p,
                                             double c1, double c2);

/// Emden-Fowler envelope set for given parameters (the classical choice).
EnvelopeSet emden_fowler_envelopes(const EmdenFowlerParams& p);

} // namespace pseudolin
