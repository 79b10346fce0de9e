#include "pseudolin/config.hpp"

#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include "pseudolin/expression.hpp"

namespace pseudolin {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool is_number(const std::string& s, double& out) {
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && !s.empty();
}

Field lift(const TimeFn& f) {
    return [f](double t, double, double) { return f(t); };
}

} // namespace

ConfigFile parse_config(std::istream& is) {
    ConfigFile cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "system" && section != "envelopes" && section != "run")
                throw ConfigError("line " + std::to_string(lineno) + ": unknown section [" +
                                  section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        if (section == "system") {
            if (key == "corpus") {
                cfg.corpus_name = value;
            } else {
                cfg.system_exprs[key] = value;
            }
        } else if (section == "envelopes") {
            cfg.envelope_exprs[key] = value;
        } else if (section == "run") {
            cfg.run[key] = value;
        } else {
            throw ConfigError("line " + std::to_string(lineno) +
                              ": key outside of any [section]");
        }
    }
    // corpus parameter overrides are the numeric [system] keys
    if (cfg.corpus_name) {
        for (const auto& [k, v] : cfg.system_exprs) {
            double x;
            if (!is_number(v, x))
                throw ConfigError("corpus parameter " + k + " must be numeric, got: " + v);
            cfg.corpus_params[k] = x;
        }
    }
    return cfg;
}

ConfigFile parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

PseudoLinearSystem ConfigFile::build_system() const {
    if (corpus_name) return corpus_get(*corpus_name, corpus_params).system();

    auto field = [&](const char* key) -> TimeFn {
        const auto it = system_exprs.find(key);
        if (it == system_exprs.end()) return [](double) { return 0.0; };
        return parse_time_expression(it->second);
    };
    double t0 = 0.0;
    if (const auto it = system_exprs.find("t0"); it != system_exprs.end()) {
        if (!is_number(it->second, t0))
            throw ConfigError("system t0 must be numeric, got: " + it->second);
    }
    const bool homogeneous = !system_exprs.count("F") && !system_exprs.count("G");
    return PseudoLinearSystem(lift(field("P")), lift(field("Q")), lift(field("R")),
                              lift(field("S")), lift(field("F")), lift(field("G")), t0,
                              homogeneous);
}

EnvelopeSet ConfigFile::build_envelopes() const {
    EnvelopeSet env = EnvelopeSet::zero();
    auto set = [&](const char* key, TimeFn& slot) {
        const auto it = envelope_exprs.find(key);
        if (it != envelope_exprs.end()) slot = parse_time_expression(it->second);
    };
    set("P0", env.P0);
    set("Q0", env.Q0);
    set("R0", env.R0);
    set("S0", env.S0);
    set("F0", env.F0);
    set("G0", env.G0);
    set("B1", env.B1);
    set("B2", env.B2);
    for (const auto& [k, v] : envelope_exprs)
        if (k != "P0" && k != "Q0" && k != "R0" && k != "S0" && k != "F0" && k != "G0" &&
            k != "B1" && k != "B2")
            throw ConfigError("unknown envelope key: " + k);
    return env;
}

double ConfigFile::run_number(const std::string& key, double fallback) const {
    const auto it = run.find(key);
    if (it == run.end()) return fallback;
    double x;
    if (!is_number(it->second, x))
        throw ConfigError("run option " + key + " must be numeric, got: " + it->second);
    return x;
}

std::optional<std::string> ConfigFile::run_string(const std::string& key) const {
    const auto it = run.find(key);
    if (it == run.end()) return std::nullopt;
    return it->second;
}

} // namespace pseudolin
