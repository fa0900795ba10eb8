// Scenario configuration shared by all subcommands.
//
// Files hold one `key = value` pair per line; '#' starts a comment. Command
// line flags use the same keys and override values read from a file.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gaussdyn/dynamics.hpp"
#include "gaussdyn/errors.hpp"

namespace gaussdyn::cli {

// A bad or unknown configuration entry. key() names the offending key.
class ConfigError : public DomainError {
public:
    ConfigError(const std::string& key, const std::string& what)
        : DomainError("config key '" + key + "': " + what), key_(key) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct ScenarioConfig {
    std::string model = "isolated";
    double r = 0.0;
    double lambda = 0.0;
    double gamma0 = 0.0;
    double cutoff = 2000.0;
    double kt = 10.0;
    double t_end = 10.0;
    double dt = 1e-3;
    std::string output = "-";  // "-" is standard output
};

// All recognised keys, in metadata order.
const std::vector<std::string>& config_keys();

// Sets one key from its textual value. Throws ConfigError for unknown keys
// and unparsable numbers.
void set_value(ScenarioConfig& cfg, const std::string& key, const std::string& value);

// Applies the key = value lines of `text` on top of `cfg`.
void apply_text(ScenarioConfig& cfg, const std::string& text);
// Reads a file and applies it; throws ConfigError (key "config") if unreadable.
void apply_file(ScenarioConfig& cfg, const std::string& path);

// Range checks; throws ConfigError naming the first bad key.
void validate(const ScenarioConfig& cfg);

ModelKind model_of(const ScenarioConfig& cfg);
SystemParams params_of(const ScenarioConfig& cfg);

// key/value pairs with numbers at full precision, for CSV metadata.
std::vector<std::pair<std::string, std::string>> describe(const ScenarioConfig& cfg);

// Shortest text that parses back to the same double (17 significant digits).
std::string format_number(double x);

// Parses a comma-separated list of numbers; `key` is used in error messages.
std::vector<double> parse_list(const std::string& key, const std::string& text);

}  // namespace gaussdyn::cli
