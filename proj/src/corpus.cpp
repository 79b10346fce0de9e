#include "pseudolin/corpus.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace pseudolin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double at(const ParamMap& m, const char* key) { return m.at(key); }

Field constant(double c) {
    return [c](double, double, double) { return c; };
}

struct EntryDef {
    std::string name;
    std::string description;
    std::string citation;
    std::vector<std::pair<std::string, double>> defaults;
    std::function<void(const ParamMap&)> validate; // may be empty
    std::function<PseudoLinearSystem(const ParamMap&)> build;
    std::function<std::optional<EnvelopeSet>(const ParamMap&)> envelopes; // may be empty
};

EnvelopeSet make_env(TimeFn P0, TimeFn Q0, TimeFn R0, TimeFn S0, TimeFn F0, TimeFn G0) {
    EnvelopeSet env = EnvelopeSet::zero();
    env.P0 = std::move(P0);
    env.Q0 = std::move(Q0);
    env.R0 = std::move(R0);
    env.S0 = std::move(S0);
    env.F0 = std::move(F0);
    env.G0 = std::move(G0);
    return env;
}

TimeFn tconst(double c) {
    return [c](double) { return c; };
}

// phi'' = A*phi + B*phi' + C reductions share this shape.
PseudoLinearSystem second_order(Field A, Field B, Field C, double t0, bool homogeneous) {
    SecondOrderForm form;
    form.coeff_phi = std::move(A);
    form.coeff_dphi = std::move(B);
    if (!homogeneous) form.forcing = std::move(C);
    form.t0 = t0;
    return from_second_order(form);
}

const std::vector<EntryDef>& registry() {
    static const std::vector<EntryDef> defs = [] {
        std::vector<EntryDef> v;

        v.push_back(EntryDef{
            "vdp-parametric",
            "van der Pol oscillator with parametric excitation",
            "Jordan & Smith, Nonlinear Ordinary Differential Equations, 4th ed., p. 333",
            {{"epsilon", 0.1}, {"beta", 0.2}, {"t0", 0.0}},
            {},
            [](const ParamMap& p) {
                const double eps = at(p, "epsilon"), beta = at(p, "beta");
                return second_order(
                    [beta](double t, double, double) { return -(1.0 + beta * std::cos(t)); },
                    [eps](double, double u, double) { return -eps * (u * u - 1.0); },
                    {}, at(p, "t0"), true);
            },
            [](const ParamMap& p) -> std::optional<EnvelopeSet> {
                const double eps = at(p, "epsilon"), beta = at(p, "beta");
                if (eps < 0) return std::nullopt; // damping term has no upper envelope
                return make_env(tconst(0), tconst(1), tconst(1.0 + std::abs(beta)),
                                tconst(eps), tconst(0), tconst(0));
            }});

        v.push_back(EntryDef{
            "vdp-forced",
            "van der Pol oscillator with harmonic forcing",
            "Jordan & Smith, Nonlinear Ordinary Differential Equations, 4th ed., p. 234",
            {{"epsilon", 0.1}, {"Gamma", 1.0}, {"omega", 1.0}, {"t0", 0.0}},
            {},
            [](const ParamMap& p) {
                const double eps = at(p, "epsilon"), Gamma = at(p, "Gamma"),
                             omega = at(p, "omega");
                return second_order(
                    constant(-1.0),
                    [eps](double, double u, double) { return -eps * (u * u - 1.0); },
                    [Gamma, omega](double t, double, double) {
                        return Gamma * std::cos(omega * t);
                    },
                    at(p, "t0"), Gamma == 0.0);
            },
            [](const ParamMap& p) -> std::optional<EnvelopeSet> {
                const double eps = at(p, "epsilon"), Gamma = at(p, "Gamma");
                if (eps < 0) return std::nullopt;
                return make_env(tconst(0), tconst(1), tconst(1), tconst(eps), tconst(0),
                                tconst(std::abs(Gamma)));
            }});

        v.push_back(EntryDef{
            "electronic-contour",
            "parametrically excited oscillating circuit with a vacuum tube",
            "Bogolubov & Mitropolski, Asymptotic Methods in the Theory of Nonlinear "
            "Oscillation, p. 221",
            {{"lambda1", 0.1}, {"lambda2", 0.1}, {"omega", 1.0}, {"h", 0.5}, {"nu", 1.0},
             {"t0", 0.0}},
            {},
            [](const ParamMap& p) {
                const double l1 = at(p, "lambda1"), l2 = at(p, "lambda2"),
                             om = at(p, "omega"), h = at(p, "h"), nu = at(p, "nu");
                return second_order(
                    [om, h, nu](double t, double, double) {
                        return -om * om * (1.0 - h * std::cos(nu * t));
                    },
                    [l1, l2](double, double u, double) {
                        return -2.0 * (l1 + l2 * u * u);
                    },
                    {}, at(p, "t0"), true);
            },
            [](const ParamMap& p) -> std::optional<EnvelopeSet> {
                const double l1 = at(p, "lambda1"), l2 = at(p, "lambda2"),
                             om = at(p, "omega"), h = at(p, "h");
                if (l2 < 0) return std::nullopt;
                return make_env(tconst(0), tconst(1), tconst(om * om * (1.0 + std::abs(h))),
                                tconst(-2.0 * l1), tconst(0), tconst(0));
            }});

        v.push_back(EntryDef{
            "vdp-mathieu",
            "van der Pol-Mathieu model of dust grain charge dynamics",
            "Momeni, Kourakis, Moslehi-Fard & Shukla, J. Phys. A: Math. Theor. 40 (2007) "
            "F473",
            {{"alpha", 0.1}, {"beta", 0.1}, {"omega0", 1.0}, {"h", 0.5}, {"gamma", 1.0},
             {"t0", 0.0}},
            {},
            [](const ParamMap& p) {
                const double a = at(p, "alpha"), b = at(p, "beta"), om = at(p, "omega0"),
                             h = at(p, "h"), ga = at(p, "gamma");
                return second_order(
                    [om, h, ga](double t, double, double) {
                        return -om * om * (1.0 + h * std::cos(ga * t));
                    },
                    [a, b](double, double u, double) { return a - b * u * u; }, {},
                    at(p, "t0"), true);
            },
            [](const ParamMap& p) -> std::optional<EnvelopeSet> {
                const double a = at(p, "alpha"), b = at(p, "beta"), om = at(p, "omega0"),
                             h = at(p, "h");
                if (b < 0) return std::nullopt;
                return make_env(tconst(0), tconst(1),
                                tconst(om * om * (1.0 + std::abs(h))), tconst(a), tconst(0),
                                tconst(0));
            }});

        v.push_back(EntryDef{
            "lienard",
            "Lienard oscillator (default damping eps*(v^2-1), restoring g(u)=u)",
            "Jordan & Smith, Nonlinear Ordinary Differential Equations, 4th ed., p. 331",
            {{"epsilon", 0.1}, {"t0", 0.0}},
            {},
            [](const ParamMap& p) {
                const double eps = at(p, "epsilon");
                return second_order(
                    constant(-1.0),
                    [eps](double, double, double w) { return -eps * (w * w - 1.0); }, {},
                    at(p, "t0"), true);
            },
            [](const ParamMap& p) -> std::optional<EnvelopeSet> {
                const double eps = at(p, "epsilon");
                if (eps < 0) return std::nullopt;
                return make_env(tconst(0), tconst(1), tconst(1), tconst(eps), tconst(0),
                                tconst(0));
            }});

        v.push_back(EntryDef{
            "pendulum-light",
            "pendulum with an oscillating gravity-like drive",
            "Jordan & Smith, Nonlinear Ordinary Differential Equations, 4th ed., p. 331",
            {{"g", 1.0}, {"epsilon", 0.1}, {"a", 1.0}, {"omega", 1.0}, {"t0", 0.0}},
            [](const ParamMap& p) {
                if (at(p, "a") == 0.0)
                    throw InvalidParam("a", 0.0, "suspension length must be nonzero");
            },
            [](const ParamMap& p) {
                const double g = at(p, "g"), eps = at(p, "epsilon"), a = at(p, "a"),
                             om = at(p, "omega");
                return second_order(
                    [g, eps, a, om](double t, double u, double) {
                        return (g / 2.0 - (eps / a) * std::cos(om * t)) * sinc(u);
                    },
                    constant(0.0), {}, at(p, "t0"), true);
            },
            [](const ParamMap& p) -> std::optional<EnvelopeSet> {
                const double g = at(p, "g"), eps = at(p, "epsilon"), a = at(p, "a");
                return make_env(tconst(0), tconst(1),
                                tconst(std::abs(g) / 2.0 + std::abs(eps / a)), tconst(0),
                                tconst(0), tconst(0));
            }});

        v.push_back(EntryDef{
            "pendulum",
            "pendulum with slowly varying length l(t) = l0 + l1 sin t",
            "Bogolubov & Mitropolski, Asymptotic Methods in the Theory of Nonlinear "
            "Oscillation, p. 34",
            {{"m", 1.0}, {"g", 1.0}, {"l0", 1.0}, {"l1", 0.0}, {"t0", 0.0}},
            [](const ParamMap& p) {
                if (at(p, "m") <= 0) throw InvalidParam("m", at(p, "m"), "mass must be > 0");
                if (at(p, "l0") - std::abs(at(p, "l1")) <= 0)
                    throw InvalidParam("l0", at(p, "l0"),
                                       "length l0 - |l1| must stay positive");
            },
            [](const ParamMap& p) {
                const double m = at(p, "m"), g = at(p, "g"), l0 = at(p, "l0"),
                             l1 = at(p, "l1");
                auto len = [l0, l1](double t) { return l0 + l1 * std::sin(t); };
                return second_order(
                    [m, g, len](double t, double u, double) {
                        return -(g / (m * len(t))) * sinc(u);
                    },
                    [l1, len](double t, double, double) {
                        return -2.0 * l1 * std::cos(t) / len(t);
                    },
                    {}, at(p, "t0"), true);
            },
            [](const ParamMap& p) -> std::optional<EnvelopeSet> {
                const double m = at(p, "m"), g = at(p, "g"), l0 = at(p, "l0"),
                             l1 = at(p, "l1");
                const double lmin = l0 - std::abs(l1);
                return make_env(tconst(0), tconst(1), tconst(std::abs(g) / (m * lmin)),
                                tconst(2.0 * std::abs(l1) / lmin), tconst(0), tconst(0));
            }});

        v.push_back(EntryDef{
            "pendulum-moving-support",
            "pendulum whose support moves vertically and horizontally",
            "Jordan & Smith, Nonlinear Ordinary Differential Equations, 4th ed., p. 334",
            {{"a", 1.0}, {"g", 1.0}, {"zeta0", 0.1}, {"omega1", 1.0}, {"eta0", 0.1},
             {"omega2", 1.0}, {"t0", 0.0}},
            [](const ParamMap& p) {
                if (at(p, "a") == 0.0)
                    throw InvalidParam("a", 0.0, "suspension length must be nonzero");
            },
            [](const ParamMap& p) {
                const double a = at(p, "a"), g = at(p, "g"), z0 = at(p, "zeta0"),
                             w1 = at(p, "omega1"), e0 = at(p, "eta0"), w2 = at(p, "omega2");
                const bool homogeneous = e0 * w2 * w2 == 0.0;
                // zeta(t) = z0 cos(w1 t), eta(t) = e0 sin(w2 t)
                auto zdd = [z0, w1](double t) { return -z0 * w1 * w1 * std::cos(w1 * t); };
                auto edd = [e0, w2](double t) { return -e0 * w2 * w2 * std::sin(w2 * t); };
                return second_order(
                    [a, g, zdd](double t, double u, double) {
                        return -((g + zdd(t)) / a) * sinc(u);
                    },
                    constant(0.0),
                    [a, edd](double t, double u, double) {
                        return -(edd(t) / a) * std::cos(u);
                    },
                    at(p, "t0"), homogeneous);
            },
            [](const ParamMap& p) -> std::optional<EnvelopeSet> {
                const double a = std::abs(at(p, "a")), g = at(p, "g"),
                             z0 = at(p, "zeta0"), w1 = at(p, "omega1"),
                             e0 = at(p, "eta0"), w2 = at(p, "omega2");
                return make_env(tconst(0), tconst(1),
                                tconst((std::abs(g) + std::abs(z0) * w1 * w1) / a),
                                tconst(0), tconst(0),
                                tconst(std::abs(e0) * w2 * w2 / a));
            }});

        v.push_back(EntryDef{
            "duffing",
            "Duffing oscillator with damping and harmonic forcing",
            "Jordan & Smith, Nonlinear Ordinary Differential Equations, 4th ed., p. 223",
            {{"k", 0.3}, {"alpha", -1.0}, {"beta", 1.0}, {"Gamma", 0.5}, {"omega", 1.2},
             {"t0", 0.0}},
            {},
            [](const ParamMap& p) {
                const double k = at(p, "k"), al = at(p, "alpha"), be = at(p, "beta"),
                             Gamma = at(p, "Gamma"), om = at(p, "omega");
                return second_order(
                    [al, be](double, double u, double) { return -al - be * u * u; },
                    constant(-k),
                    [Gamma, om](double t, double, double) {
                        return Gamma * std::cos(om * t);
                    },
                    at(p, "t0"), Gamma == 0.0);
            },
            {} // cubic stiffness admits no time-only |R| envelope
        });

        v.push_back(EntryDef{
            "damped-pendulum-forced",
            "damped pendulum with periodic forcing of the pivot",
            "Jordan & Smith, Nonlinear Ordinary Differential Equations, 4th ed., p. 504",
            {{"epsilon", 0.1}, {"gamma", 1.0}, {"k", 1.0}, {"t0", 0.0}},
            {},
            [](const ParamMap& p) {
                const double eps = at(p, "epsilon"), ga = at(p, "gamma"), k = at(p, "k");
                return second_order(
                    [eps, ga](double t, double u, double) {
                        return (eps * ga * std::sin(t) - 1.0) * sinc(u);
                    },
                    constant(-eps * k), {}, at(p, "t0"), true);
            },
            [](const ParamMap& p) -> std::optional<EnvelopeSet> {
                const double eps = at(p, "epsilon"), ga = at(p, "gamma"), k = at(p, "k");
                return make_env(tconst(0), tconst(1), tconst(1.0 + std::abs(eps * ga)),
                                tconst(-eps * k), tconst(0), tconst(0));
            }});

        v.push_back(EntryDef{
            "rayleigh",
            "Rayleigh oscillator",
            "Jordan & Smith, Nonlinear Ordinary Differential Equations, 4th ed., p. 197",
            {{"epsilon", 0.1}, {"t0", 0.0}},
            {},
            [](const ParamMap& p) {
                const double eps = at(p, "epsilon");
                return second_order(
                    constant(-1.0),
                    [eps](double, double, double w) {
                        return -eps * (w * w / 3.0 - 1.0);
                    },
                    {}, at(p, "t0"), true);
            },
            [](const ParamMap& p) -> std::optional<EnvelopeSet> {
                const double eps = at(p, "epsilon");
                if (eps < 0) return std::nullopt;
                return make_env(tconst(0), tconst(1), tconst(1), tconst(eps), tconst(0),
                                tconst(0));
            }});

        v.push_back(EntryDef{
            "relativistic-orbit",
            "relativistic perturbation of a planetary orbit",
            "Jordan & Smith, Nonlinear Ordinary Differential Equations, 4th ed., p. 218",
            {{"k", 0.1}, {"epsilon", 0.01}, {"t0", 0.0}},
            {},
            [](const ParamMap& p) {
                const double k = at(p, "k"), eps = at(p, "epsilon");
                return second_order(
                    constant(-1.0), constant(0.0),
                    [k, eps](double, double u, double) { return k * (1.0 + eps * u * u); },
                    at(p, "t0"), k == 0.0);
            },
            {} // quadratic source admits no time-only |G| envelope
        });

        v.push_back(EntryDef{
            "coupled-1.15",
            "coupled pair with shared cubic radial damping and skew coupling",
            "Jordan & Smith, Nonlinear Ordinary Differential Equations, 4th ed., p. 257",
            {{"a", 1.0}, {"t0", 0.0}},
            {},
            [](const ParamMap& p) {
                const double a = at(p, "a");
                auto radial = [](double, double u, double w) {
                    return -(u * u + w * w - 1.0);
                };
                return PseudoLinearSystem::homogeneous_system(
                    radial, [a](double t, double, double) { return a * std::sin(t); },
                    [a](double t, double, double) { return -a * std::sin(t); }, radial,
                    at(p, "t0"));
            },
            [](const ParamMap& p) -> std::optional<EnvelopeSet> {
                const double a = std::abs(at(p, "a"));
                return make_env(tconst(1), tconst(a), tconst(a), tconst(1), tconst(0),
                                tconst(0));
            }});

        v.push_back(EntryDef{
            "emden-fowler",
            "generalized Emden-Fowler system (t^rho phi')' = t^sigma phi^n",
            "Bellman, Stability Theory of Differential Equations, p. 171",
            {{"rho", 0.0}, {"sigma", -3.0}, {"n", 2.0}, {"t0", 1.0}},
            [](const ParamMap& p) {
                EmdenFowlerParams ef{at(p, "rho"), at(p, "sigma"), at(p, "n"), at(p, "t0")};
                ef.validate();
            },
            [](const ParamMap& p) {
                const double rho = at(p, "rho"), sigma = at(p, "sigma"), n = at(p, "n");
                return PseudoLinearSystem::homogeneous_system(
                    constant(0.0),
                    [rho](double t, double, double) { return std::pow(t, -rho); },
                    [sigma, n](double t, double u, double) {
                        // odd extension |u|^(n-1) keeps the field finite for u < 0
                        return std::pow(t, sigma) * std::pow(std::abs(u), n - 1.0);
                    },
                    constant(0.0), at(p, "t0"));
            },
            [](const ParamMap& p) -> std::optional<EnvelopeSet> {
                EmdenFowlerParams ef{at(p, "rho"), at(p, "sigma"), at(p, "n"), at(p, "t0")};
                return emden_fowler_envelopes(ef);
            }});

        return v;
    }();
    return defs;
}

const EntryDef& find_def(const std::string& name) {
    for (const auto& d : registry())
        if (d.name == name) return d;
    throw UnknownEntry(name);
}

} // namespace

const std::vector<std::string>& corpus_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& d : registry()) n.push_back(d.name);
        return n;
    }();
    return names;
}

CorpusEntry corpus_get(const std::string& name, const ParamMap& overrides) {
    const EntryDef& def = find_def(name);
    CorpusEntry entry;
    entry.name = def.name;
    entry.description = def.description;
    entry.citation = def.citation;
    for (const auto& [k, v] : def.defaults) entry.params[k] = v;
    for (const auto& [k, v] : overrides) {
        if (!entry.params.count(k)) throw InvalidParam(k, v, "unknown parameter");
        entry.params[k] = v;
    }
    if (def.validate) def.validate(entry.params);
    return entry;
}

PseudoLinearSystem CorpusEntry::system() const { return find_def(name).build(params); }

std::optional<EnvelopeSet> CorpusEntry::envelopes() const {
    const EntryDef& def = find_def(name);
    return def.envelopes ? def.envelopes(params) : std::nullopt;
}

void EmdenFowlerParams::validate() const {
    if (!(t0 > 0)) throw InvalidParam("t0", t0, "must be > 0");
    if (!(n > 1)) throw InvalidParam("n", n, "exponent must be > 1");
}

EnvelopeSet emden_fowler_envelopes(const EmdenFowlerParams& p) {
    EnvelopeSet env = EnvelopeSet::zero();
    const double rho = p.rho, sigma = p.sigma;
    env.Q0 = [rho](double t) { return std::pow(t, -rho); };
    env.R0 = [sigma](double t) { return std::pow(t, sigma); };
    return env; // P0 = S0 = F0 = G0 = B1 = B2 = 0
}

double emden_fowler_L_closed_form(double t, double c1, double c2,
                                  const EmdenFowlerParams& p) {
    p.validate();
    if (!(c1 > 0)) throw InvalidParam("c1", c1, "must be > 0");
    if (!(c2 > 0)) throw InvalidParam("c2", c2, "must be > 0");
    if (!(t >= p.t0)) throw InvalidParam("t", t, "must be >= t0");
    const double rho = p.rho, sigma = p.sigma, t0 = p.t0;
    const double s1 = sigma + 1.0;
    if (std::abs(s1) < 1e-12)
        throw UnsupportedParameterCase("sigma = -1 has no closed-form L; use quadrature");
    const double pow_t = std::pow(t, s1), pow_t0 = std::pow(t0, s1);
    if (rho == 1.0) {
        // integral of tau^sigma log(tau/t0): elementary antiderivative
        const double ilog = pow_t * std::log(t / t0) / s1 - (pow_t - pow_t0) / (s1 * s1);
        return c2 * std::exp((c1 / c2) * (pow_t - pow_t0) / s1 + ilog);
    }
    const double d = 2.0 + sigma - rho;
    if (std::abs(d) < 1e-12)
        throw UnsupportedParameterCase(
            "2 + sigma - rho = 0 has no closed-form L; use quadrature");
    const double a = (c1 / c2 - std::pow(t0, 1.0 - rho) / (1.0 - rho)) *
                     (pow_t - pow_t0) / s1;
    const double b = (std::pow(t, d) - std::pow(t0, d)) / ((1.0 - rho) * d);
    return c2 * std::exp(a + b);
}

ConditionReport emden_fowler_condition_check(const EmdenFowlerParams& p, double c1,
                                             double c2) {
    p.validate();
    ConditionReport rep;
    const double rho = p.rho, sigma = p.sigma, t0 = p.t0;
    auto push = [&](const std::string& name, double margin) {
        rep.margins.push_back({name, margin, margin >= 0});
        return margin >= 0;
    };
    auto push_strict = [&](const std::string& name, double margin) {
        rep.margins.push_back({name, margin, margin > 0});
        return margin > 0;
    };

    const bool rho_lt_1 = push_strict("1 - rho", 1.0 - rho);
    const bool sigma_lt_m1 = push_strict("-1 - sigma", -1.0 - sigma);
    const bool comb = push_strict("-(2 + sigma - rho)", -(2.0 + sigma - rho));
    const bool c1_pos = push_strict("c1", c1);
    const bool c2_pos = push_strict("c2", c2);

    const double ratio_bound =
        rho_lt_1 ? std::pow(t0, 1.0 - rho) / (1.0 - rho) : -kInf;

    const bool c2_lt_1 = push_strict("1 - c2", 1.0 - c2);
    const bool ratio_le =
        push("t0^(1-rho)/(1-rho) - c1/c2", rho_lt_1 ? ratio_bound - c1 / c2 : -kInf);
    rep.cond1 = rho_lt_1 && sigma_lt_m1 && comb && c1_pos && c2_pos && c2_lt_1 && ratio_le;

    const double exp_bound =
        sigma_lt_m1 ? std::exp(std::pow(t0, sigma + 1.0) / (sigma + 1.0)) : -kInf;
    const bool ratio_gt = push_strict("c1/c2 - t0^(1-rho)/(1-rho)",
                                      rho_lt_1 ? c1 / c2 - ratio_bound : -kInf);
    const bool c1_lt_exp = push_strict("exp{t0^(s+1)/(s+1)} - c1 (as printed)",
                                       exp_bound - c1);
    const bool c2_lt_exp = push_strict("exp{t0^(s+1)/(s+1)} - c2 (c2 variant)",
                                       exp_bound - c2);
    rep.cond2_printed =
        rho_lt_1 && sigma_lt_m1 && comb && c1_pos && c1_lt_exp && c2_pos && ratio_gt;
    rep.cond2_alt =
        rho_lt_1 && sigma_lt_m1 && comb && c1_pos && c2_lt_exp && c2_pos && ratio_gt;

    const bool rho_is_1 = rho == 1.0;
    rep.margins.push_back({"rho == 1", -std::abs(rho - 1.0), rho_is_1});
    double cond3_bound = -kInf;
    if (rho_is_1 && sigma_lt_m1 && c2_pos) {
        const double s1 = sigma + 1.0;
        const double tail = std::pow(t0, s1) / (s1 * s1); // int_t0^inf tau^s ln(tau/t0)
        cond3_bound = std::exp((c1 / c2) * std::pow(t0, s1) / s1 - tail);
    }
    const bool c2_lt_cond3 = push_strict("cond3 exp bound - c2", cond3_bound - c2);
    rep.cond3 = rho_is_1 && sigma_lt_m1 && c1_pos && c2_pos && c2_lt_cond3;
    return rep;
}

} // namespace pseudolin
