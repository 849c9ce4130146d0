#pragma once

// CLI configuration: command-line flags merged over an optional flat
// key-value config file merged over defaults. Unknown keys are rejected with
// a diagnostic naming the key and where it came from.

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace arrival {

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    enum class Command { Run, Table, Sweep, Validate };

    Command command = Command::Run;
    std::string scenario;  // preset id; empty means "inline" if inline keys are present
    std::size_t grid = 0;  // 0: use the scenario's own default
    std::string out_path;  // empty: stdout
    double epsilon = std::numeric_limits<double>::quiet_NaN();       // NaN: default 1e-3
    double quad_rel_tol = std::numeric_limits<double>::quiet_NaN();  // NaN: default 1e-9
    int sig_digits = 12;
    std::map<std::string, std::string> inline_params;  // model/p0/dp/... for custom scenarios
};

namespace detail {

inline const std::vector<std::string>& inline_keys() {
    static const std::vector<std::string> keys = {"model", "p0",  "dp", "x0",      "beta",
                                                  "p1",    "p2",  "d",  "p_barrier", "X",
                                                  "t_start", "t_end"};
    return keys;
}

inline bool is_inline_key(const std::string& k) {
    for (const auto& key : inline_keys())
        if (key == k) return true;
    return false;
}

inline double parse_double(const std::string& key, const std::string& value,
                           const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw config_error("invalid number for '" + key + "' (" + where + "): '" + value + "'");
    }
}

inline std::size_t parse_size(const std::string& key, const std::string& value,
                              const std::string& where) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size() || v < 0) throw std::invalid_argument("bad");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw config_error("invalid integer for '" + key + "' (" + where + "): '" + value + "'");
    }
}

inline void apply_key(RunConfig& cfg, const std::string& key, const std::string& value,
                      const std::string& where) {
    if (key == "scenario") {
        cfg.scenario = value;
    } else if (key == "grid") {
        cfg.grid = parse_size(key, value, where);
        if (cfg.grid < 16) throw config_error("grid must be >= 16 (" + where + ")");
    } else if (key == "out") {
        cfg.out_path = value;
    } else if (key == "epsilon") {
        cfg.epsilon = parse_double(key, value, where);
        if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
            throw config_error("epsilon must lie in (0,1) (" + where + ")");
    } else if (key == "quad-tol") {
        cfg.quad_rel_tol = parse_double(key, value, where);
        if (!(cfg.quad_rel_tol > 0.0)) throw config_error("quad-tol must be > 0 (" + where + ")");
    } else if (key == "digits") {
        cfg.sig_digits = static_cast<int>(parse_size(key, value, where));
        if (cfg.sig_digits < 1 || cfg.sig_digits > 17)
            throw config_error("digits must lie in [1,17] (" + where + ")");
    } else if (is_inline_key(key)) {
        cfg.inline_params[key] = value;
    } else {
        throw config_error("unknown key '" + key + "' (" + where + ")");
    }
}

inline void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        const std::string where = path + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw config_error("expected 'key = value' (" + where + ")");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw config_error("empty key (" + where + ")");
        apply_key(cfg, key, value, where);
    }
}

}  // namespace detail

// Precedence: flags > config file > defaults. The config file (if any) is
// read first, then flags overwrite.
inline RunConfig parse_config(const std::vector<std::string>& args) {
    if (args.empty())
        throw config_error("missing command; expected run|table|sweep|validate");

    RunConfig cfg;
    const std::string& cmd = args[0];
    if (cmd == "run") cfg.command = RunConfig::Command::Run;
    else if (cmd == "table") cfg.command = RunConfig::Command::Table;
    else if (cmd == "sweep") cfg.command = RunConfig::Command::Sweep;
    else if (cmd == "validate") cfg.command = RunConfig::Command::Validate;
    else throw config_error("unknown command '" + cmd + "'; expected run|table|sweep|validate");

    // first pass: locate --config so the file loads before the flags
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw config_error("--config requires a path");
            detail::load_config_file(cfg, args[i + 1]);
        }
    }

    for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0) throw config_error("unexpected argument '" + a + "'");
        const std::string key = a.substr(2);
        if (key == "config") {
            ++i;  // handled above
            continue;
        }
        if (i + 1 >= args.size()) throw config_error("flag '" + a + "' requires a value");
        const std::string& value = args[++i];
        if (key == "id") {
            cfg.scenario = value;  // `table --id table1` spelling
        } else {
            detail::apply_key(cfg, key, value, "flag " + a);
        }
    }

    const bool needs_scenario = cfg.command == RunConfig::Command::Run ||
                                cfg.command == RunConfig::Command::Table ||
                                cfg.command == RunConfig::Command::Sweep;
    if (needs_scenario && cfg.scenario.empty() && cfg.inline_params.empty())
        throw config_error("missing scenario: pass --scenario ID (or --id for table)");
    return cfg;
}

}  // namespace arrival
