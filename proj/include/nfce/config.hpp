#ifndef NFCE_CONFIG_HPP
#define NFCE_CONFIG_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "nfce/harness.hpp"

namespace nfce {

// Flat key=value view of the experiment configuration. Precedence is
// CLI flag > config file > built-in default; apply_key is the single entry
// point for both file keys and flag overrides.
struct CliConfig {
    ExperimentConfig experiment;
    std::string output_dir = "out";
    std::vector<std::pair<std::string, std::string>> provenance;  // key -> source
};

// Throws std::invalid_argument on unknown keys or malformed values.
void apply_key(CliConfig& config, const std::string& key, const std::string& value,
               const std::string& source);

// '#' starts a comment; blank lines are skipped.
void load_config_file(CliConfig& config, const std::string& path);

void dump_defaults(std::ostream& out);

std::vector<double> parse_double_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);
std::vector<std::string> parse_string_list(const std::string& text);

}  // namespace nfce

#endif
