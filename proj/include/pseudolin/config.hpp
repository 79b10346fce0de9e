#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "pseudolin/corpus.hpp"
#include "pseudolin/envelope.hpp"
#include "pseudolin/system.hpp"

namespace pseudolin {

/// Parsed `key = value` config file with [system], [envelopes] and [run]
/// sections. [system] either selects a corpus entry (corpus = <name>, other
/// keys are parameter overrides) or defines the six coefficients as time
/// expressions (P, Q, R, S, F, G; omitted fields default to 0, plus t0).
/// [envelopes] defines P0..G0, B1, B2 as time expressions (omitted: 0).
/// [run] carries plain numeric/string options for the CLI.
struct ConfigFile {
    std::optional<std::string> corpus_name;
    ParamMap corpus_params;
    std::map<std::string, std::string> system_exprs; // raw expressions
    std::map<std::string, std::string> envelope_exprs;
    std::map<std::string, std::string> run;

    bool has_envelopes() const { return !envelope_exprs.empty(); }

    PseudoLinearSystem build_system() const;   // throws ConfigError if ill-formed
    EnvelopeSet build_envelopes() const;

    double run_number(const std::string& key, double fallback) const;
    std::optional<std::string> run_string(const std::string& key) const;
};

ConfigFile parse_config(std::istream& is);
ConfigFile parse_config_file(const std::string& path); // throws ConfigError

} // namespace pseudolin
