#include "gaussdyn/cli/config.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace gaussdyn::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double x = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (!t.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, x);
    if (t.empty() || ec != std::errc() || ptr != last) {
        throw ConfigError(key, "expected a number, got '" + text + "'");
    }
    return x;
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {"model", "r",     "lambda", "gamma0", "cutoff",
                                                  "kt",    "t_end", "dt",     "output"};
    return keys;
}

void set_value(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "model") {
        cfg.model = trim(value);
    } else if (key == "output") {
        cfg.output = trim(value);
    } else if (key == "r") {
        cfg.r = parse_number(key, value);
    } else if (key == "lambda") {
        cfg.lambda = parse_number(key, value);
    } else if (key == "gamma0") {
        cfg.gamma0 = parse_number(key, value);
    } else if (key == "cutoff") {
        cfg.cutoff = parse_number(key, value);
    } else if (key == "kt") {
        cfg.kt = parse_number(key, value);
    } else if (key == "t_end") {
        cfg.t_end = parse_number(key, value);
    } else if (key == "dt") {
        cfg.dt = parse_number(key, value);
    } else {
        throw ConfigError(key, "unknown key");
    }
}

void apply_text(ScenarioConfig& cfg, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(line, "line " + std::to_string(lineno) + " is not of the form key = value");
        }
        set_value(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
}

void apply_file(ScenarioConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot read file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    apply_text(cfg, text.str());
}

void validate(const ScenarioConfig& cfg) {
    try {
        parse_model(cfg.model);
    } catch (const DomainError& e) {
        throw ConfigError("model", e.what());
    }
    auto require = [](bool ok, const char* key, const std::string& what) {
        if (!ok) throw ConfigError(key, what);
    };
    require(std::isfinite(cfg.r), "r", "must be finite");
    require(std::isfinite(cfg.lambda) && std::abs(cfg.lambda) < 1.0, "lambda",
            "must satisfy |lambda| < omega_r^2 = 1 (got " + format_number(cfg.lambda) + ")");
    require(std::isfinite(cfg.gamma0) && cfg.gamma0 >= 0.0, "gamma0", "must be >= 0");
    require(std::isfinite(cfg.cutoff) && cfg.cutoff > 0.0, "cutoff", "must be > 0");
    require(std::isfinite(cfg.kt) && cfg.kt > 0.0, "kt", "must be > 0");
    require(std::isfinite(cfg.t_end) && cfg.t_end > 0.0, "t_end", "must be > 0");
    require(cfg.dt > 0.0 && cfg.dt <= 1e-2, "dt", "must lie in (0, 1e-2]");
    require(!cfg.output.empty(), "output", "must not be empty");
    if (model_of(cfg) == ModelKind::MarkovianRWA) {
        require(cfg.lambda == 0.0, "lambda", "must be 0 for the markovian_rwa model");
    }
}

ModelKind model_of(const ScenarioConfig& cfg) {
    try {
        return parse_model(cfg.model);
    } catch (const DomainError& e) {
        throw ConfigError("model", e.what());
    }
}

SystemParams params_of(const ScenarioConfig& cfg) {
    SystemParams p;
    p.lambda = cfg.lambda;
    p.r = cfg.r;
    p.bath.gamma0 = cfg.gamma0;
    p.bath.cutoff = cfg.cutoff;
    p.bath.temperature = cfg.kt;
    return p;
}

std::vector<std::pair<std::string, std::string>> describe(const ScenarioConfig& cfg) {
    return {{"model", cfg.model},
            {"r", format_number(cfg.r)},
            {"lambda", format_number(cfg.lambda)},
            {"gamma0", format_number(cfg.gamma0)},
            {"cutoff", format_number(cfg.cutoff)},
            {"kt", format_number(cfg.kt)},
            {"t_end", format_number(cfg.t_end)},
            {"dt", format_number(cfg.dt)},
            {"output", cfg.output}};
}

std::string format_number(double x) {
    std::ostringstream s;
    s << std::setprecision(17) << x;
    return s.str();
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_number(key, item));
    if (out.empty()) throw ConfigError(key, "expected a comma-separated list of numbers");
    return out;
}

}  // namespace gaussdyn::cli
