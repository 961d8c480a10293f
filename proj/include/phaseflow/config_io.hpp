#ifndef PHASEFLOW_CONFIG_IO_HPP
#define PHASEFLOW_CONFIG_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "phaseflow/experiment.hpp"

namespace phaseflow {

struct ParsedConfig {
  ExperimentConfig config;
  std::vector<std::string> defaulted_keys;  // keys absent from the input
};

/// key = value lines; blank lines and lines starting with '#' are skipped.
/// Unknown keys, duplicate keys, trailing garbage after a number, and
/// values that fail validation all raise ConfigError with the line number.
/// Keys not present keep their defaults and are reported in defaulted_keys.
ParsedConfig parse_config(std::istream& in);
ParsedConfig parse_config_file(const std::string& path);

/// Canonical echo: every key once, fixed order, doubles at 17 significant
/// digits. parse_config(format_config(c)) reproduces c bit for bit.
std::string format_config(const ExperimentConfig& config);

const char* scheme_name(Scheme scheme);        // "upwind" / "upwind-muscl"
Scheme parse_scheme(const std::string& token); // case-insensitive

}  // namespace phaseflow

#endif
