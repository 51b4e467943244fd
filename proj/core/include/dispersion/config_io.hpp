#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dispersion/runtime.hpp"

namespace dispersion {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `key = value` per line; `#` starts a comment; blank lines are skipped.
/// Duplicate keys are an error.
using KeyValues = std::map<std::string, std::string, std::less<>>;

KeyValues parse_key_values(std::istream& in);
KeyValues read_key_value_file(const std::string& path);

/// Comma-separated list with surrounding whitespace trimmed.
std::vector<std::string> split_list(std::string_view text);

bool parse_bool(std::string_view text);
std::uint64_t parse_uint(std::string_view key, std::string_view text);

/// "rooted", "rooted:<v>", "arbitrary", or "explicit:<v>,<v>,...".
Placement parse_placement(std::string_view text);
std::string to_string(const Placement& placement);

/// Applies recognised keys on top of `base`. Keys: graph, n, m, rows, cols,
/// graph_seed, port_seed, k, algorithm, placement, seed, max_rounds, c_mem,
/// audit, trace, counter_exponent, subround_cap, restrict_bits,
/// hidden_port (node:port). Unknown keys raise ConfigError.
ExperimentConfig experiment_from_key_values(const KeyValues& kv, ExperimentConfig base = {});

}  // namespace dispersion
