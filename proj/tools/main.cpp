// pseudolin: corpus browsing, integration, certification and bound-curve
// evaluation for 2x2 state-dependent-linear ODE systems.
//
// Exit codes: 0 certified/completed, 2 falsified/violated/blew-up/inconclusive,
// 1 usage or configuration errors.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "pseudolin/config.hpp"
#include "pseudolin/corpus.hpp"
#include "pseudolin/criteria.hpp"
#include "pseudolin/csv.hpp"
#include "pseudolin/expression.hpp"

namespace fs = std::filesystem;
using namespace pseudolin;

namespace {

struct CommonOpts {
    std::string system_name;
    std::string config_path;
    std::string out_dir = ".";
    double rtol = 1e-8, atol = 1e-10;
    std::uint64_t seed = 42;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--system", opts.system_name, "corpus entry name");
    cmd->add_option("--config", opts.config_path, "config file path");
    cmd->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--rtol", opts.rtol, "relative tolerance")->capture_default_str();
    cmd->add_option("--atol", opts.atol, "absolute tolerance")->capture_default_str();
    cmd->add_option("--seed", opts.seed, "sampling seed")->capture_default_str();
    cmd->allow_extras(); // corpus parameter overrides, e.g. --rho 0
}

// leftover "--name value" / "--name=value" tokens are corpus parameter overrides
ParamMap parse_param_overrides(const std::vector<std::string>& extras) {
    ParamMap params;
    for (std::size_t i = 0; i < extras.size(); ++i) {
        std::string token = extras[i];
        if (token.rfind("--", 0) != 0)
            throw ConfigError("unexpected argument: " + token);
        token = token.substr(2);
        std::string value;
        const auto eq = token.find('=');
        if (eq != std::string::npos) {
            value = token.substr(eq + 1);
            token = token.substr(0, eq);
        } else {
            if (i + 1 >= extras.size())
                throw ConfigError("missing value for parameter --" + token);
            value = extras[++i];
        }
        char* end = nullptr;
        const double x = std::strtod(value.c_str(), &end);
        if (end != value.c_str() + value.size() || value.empty())
            throw ConfigError("parameter --" + token + " expects a number, got: " + value);
        params[token] = x;
    }
    return params;
}

struct LoadedSystem {
    PseudoLinearSystem system;
    std::optional<EnvelopeSet> envelopes;
    std::string name;
    std::optional<ConfigFile> config;
};

LoadedSystem load_system(const CommonOpts& opts, const std::vector<std::string>& extras) {
    if (!opts.system_name.empty() && !opts.config_path.empty())
        throw ConfigError("use either --system or --config, not both");
    if (!opts.system_name.empty()) {
        const auto entry = corpus_get(opts.system_name, parse_param_overrides(extras));
        return {entry.system(), entry.envelopes(), entry.name, std::nullopt};
    }
    if (!opts.config_path.empty()) {
        ConfigFile cfg = parse_config_file(opts.config_path);
        auto sys = cfg.build_system();
        std::optional<EnvelopeSet> env;
        if (cfg.has_envelopes())
            env = cfg.build_envelopes();
        else if (cfg.corpus_name)
            env = corpus_get(*cfg.corpus_name, cfg.corpus_params).envelopes();
        std::string name = cfg.corpus_name.value_or("config:" + opts.config_path);
        return {std::move(sys), std::move(env), std::move(name), std::move(cfg)};
    }
    throw ConfigError("one of --system or --config is required");
}

std::ofstream open_output(const CommonOpts& opts, const std::string& filename) {
    fs::create_directories(opts.out_dir);
    const fs::path path = fs::path(opts.out_dir) / filename;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    return out;
}

std::uint64_t effective_seed(const CommonOpts& opts) {
    // PSEUDOLIN_SEED overrides --seed when set
    if (const char* env = std::getenv("PSEUDOLIN_SEED")) {
        char* end = nullptr;
        const unsigned long long s = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') return s;
        throw ConfigError("PSEUDOLIN_SEED must be an integer, got: " + std::string(env));
    }
    return opts.seed;
}

int verdict_exit(Verdict v) { return v == Verdict::Certified ? 0 : 2; }

void write_certificate(const CommonOpts& opts, const Certificate& cert) {
    {
        auto out = open_output(opts, "trajectory.csv");
        write_trajectory_csv(out, cert.trajectory);
    }
    if (cert.K) {
        auto out = open_output(opts, "K.csv");
        write_bound_curve_csv(out, *cert.K, "K");
    }
    if (cert.L) {
        auto out = open_output(opts, "L.csv");
        write_bound_curve_csv(out, *cert.L, "L");
    }
    {
        auto out = open_output(opts, "certificate.txt");
        cert.write_text(out);
    }
    {
        auto out = open_output(opts, "certificate.kv");
        cert.write_kv(out);
    }
    cert.write_text(std::cout);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"global-solvability certification for 2x2 pseudo-linear ODE systems"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* cmd_list = app.add_subcommand("corpus-list", "list the built-in systems");

    std::string info_name;
    auto* cmd_info = app.add_subcommand("corpus-info", "show one entry's parameters");
    cmd_info->add_option("name", info_name, "entry name")->required();

    double phi0 = 1.0, psi0 = 0.0, T = 10.0;
    auto* cmd_integrate = app.add_subcommand("integrate", "integrate a system");
    add_common(cmd_integrate, opts);
    cmd_integrate->add_option("--phi0", phi0, "initial phi")->capture_default_str();
    cmd_integrate->add_option("--psi0", psi0, "initial psi")->capture_default_str();
    cmd_integrate->add_option("--T", T, "final time")->capture_default_str();

    SamplingPlan plan;
    auto* cmd_t31 = app.add_subcommand("certify-t31",
                                       "global-existence certificate (envelope criterion)");
    add_common(cmd_t31, opts);
    cmd_t31->add_option("--phi0", phi0, "initial phi")->capture_default_str();
    cmd_t31->add_option("--psi0", psi0, "initial psi")->capture_default_str();
    cmd_t31->add_option("--T", T, "certification horizon")->capture_default_str();
    double box = 10.0;
    cmd_t31->add_option("--box", box, "half-width of the sampled (u,v) box")
        ->capture_default_str();
    cmd_t31->add_option("--tnodes", plan.t_nodes, "sample times")->capture_default_str();
    cmd_t31->add_option("--samples", plan.uv_samples, "uv samples per time")
        ->capture_default_str();

    double c1 = 1.0, c2 = 1.0, eps = 0.1;
    auto* cmd_t32 = app.add_subcommand(
        "certify-t32", "positivity-and-containment certificate (homogeneous systems)");
    add_common(cmd_t32, opts);
    cmd_t32->add_option("--c1", c1, "initial phi (= c1 > 0)")->capture_default_str();
    cmd_t32->add_option("--c2", c2, "initial psi (= c2 > 0)")->capture_default_str();
    cmd_t32->add_option("--eps", eps, "box margin")->capture_default_str();
    cmd_t32->add_option("--T", T, "certification horizon")->capture_default_str();
    cmd_t32->add_option("--tnodes", plan.t_nodes, "sample times")->capture_default_str();
    cmd_t32->add_option("--samples", plan.uv_samples, "uv samples per time")
        ->capture_default_str();

    std::size_t kl_nodes = 1025;
    auto* cmd_kl = app.add_subcommand("kl-curves", "evaluate the K/L bound curves");
    add_common(cmd_kl, opts);
    cmd_kl->add_option("--c1", c1, "K starting value")->capture_default_str();
    cmd_kl->add_option("--c2", c2, "L starting value")->capture_default_str();
    cmd_kl->add_option("--T", T, "final time")->capture_default_str();
    cmd_kl->add_option("--nodes", kl_nodes, "grid nodes")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (cmd_list->parsed()) {
            for (const auto& name : corpus_names()) {
                const auto entry = corpus_get(name);
                std::printf("%-24s %s\n", name.c_str(), entry.description.c_str());
            }
            return 0;
        }
        if (cmd_info->parsed()) {
            const auto entry = corpus_get(info_name);
            std::cout << entry.name << ": " << entry.description << "\n";
            std::cout << "source: " << entry.citation << "\n";
            std::cout << "parameters (defaults):\n";
            for (const auto& [k, v] : entry.params)
                std::cout << "  " << k << " = " << format_double(v) << "\n";
            std::cout << "default envelopes: " << (entry.envelopes() ? "yes" : "no") << "\n";
            return 0;
        }

        CLI::App* active = cmd_integrate->parsed()   ? cmd_integrate
                           : cmd_t31->parsed()       ? cmd_t31
                           : cmd_t32->parsed()       ? cmd_t32
                                                     : cmd_kl;
        auto loaded = load_system(opts, active->remaining());
        plan.rng_seed = effective_seed(opts);
        plan.u_min = -box;
        plan.u_max = box;
        plan.v_min = -box;
        plan.v_max = box;
        IntegrationConfig cfg;
        cfg.rtol = opts.rtol;
        cfg.atol = opts.atol;

        // [run] section supplies fallback values; explicit flags win
        if (loaded.config) {
            const ConfigFile& c = *loaded.config;
            auto fallback = [&](const char* flag, double& slot, const char* key) {
                if (active->get_option(flag)->count() == 0) slot = c.run_number(key, slot);
            };
            fallback("--T", T, "T");
            if (cmd_integrate->parsed() || cmd_t31->parsed()) {
                fallback("--phi0", phi0, "phi0");
                fallback("--psi0", psi0, "psi0");
            }
            if (cmd_t32->parsed() || cmd_kl->parsed()) {
                fallback("--c1", c1, "c1");
                fallback("--c2", c2, "c2");
            }
            if (cmd_t32->parsed()) fallback("--eps", eps, "eps");
        }

        if (cmd_integrate->parsed()) {
            const auto traj =
                integrate(loaded.system, phi0, psi0, loaded.system.t0(), T, cfg);
            auto out = open_output(opts, "trajectory.csv");
            write_trajectory_csv(out, traj);
            std::cout << "status: " << to_string(traj.status) << ", " << traj.n_steps
                      << " steps, last t=" << format_double(traj.last_time()) << "\n";
            if (traj.status == TrajectoryStatus::BlewUp)
                std::cout << "blow-up time estimate: " << format_double(traj.t_blow) << "\n";
            return traj.status == TrajectoryStatus::Completed ? 0 : 2;
        }

        if (!loaded.envelopes)
            throw ConfigError("system '" + loaded.name +
                              "' has no envelopes; supply an [envelopes] config section");

        if (cmd_t31->parsed()) {
            auto cert = certify_t31(loaded.system, *loaded.envelopes, phi0, psi0, T, plan,
                                    cfg);
            cert.system_name = loaded.name;
            write_certificate(opts, cert);
            return verdict_exit(cert.verdict);
        }
        if (cmd_t32->parsed()) {
            auto cert =
                certify_t32(loaded.system, *loaded.envelopes, c1, c2, eps, T, plan, cfg);
            cert.system_name = loaded.name;
            write_certificate(opts, cert);
            return verdict_exit(cert.verdict);
        }
        // kl-curves
        const auto grid = uniform_nodes(loaded.system.t0(), T, kl_nodes);
        const auto [K, L] = compute_KL_curves(*loaded.envelopes, c1, c2, grid);
        {
            auto out = open_output(opts, "K.csv");
            write_bound_curve_csv(out, K, "K");
        }
        {
            auto out = open_output(opts, "L.csv");
            write_bound_curve_csv(out, L, "L");
        }
        std::cout << "K(T)=" << format_double(K.values.back())
                  << " L(T)=" << format_double(L.values.back()) << "\n";
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
