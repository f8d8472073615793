#pragma once

#include <string>
#include <utility>
#include <vector>

#include "minipic/sim_config.hpp"

namespace pic {

// (key, value) pairs applied after the file, e.g. from CLI flags.
using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

// Apply one key=value setting. ConfigError names the key on unknown keys or
// unparseable values. Keys mirror SimConfig fields; see README for the list.
void apply_config_key(SimConfig& cfg, const std::string& key, const std::string& value);

// Parse a flat key=value config file ('#' comments, blank lines ok), apply
// overrides, then validate. An empty path means "defaults only". Missing
// file, parse failure, or invariant violation throw ConfigError.
SimConfig parse_config(const std::string& path, const ConfigOverrides& overrides = {});

// Same, from an in-memory string.
SimConfig parse_config_text(const std::string& text, const ConfigOverrides& overrides = {});

}  // namespace pic
