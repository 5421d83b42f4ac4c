#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "swarmsim/swarm.hpp"

namespace swarmsim {

// Flat "key = value" format with [section] headers and '#' comments. Angles
// are degrees in the file and radians in SimConfig. Unknown sections or keys
// are hard errors; a repeated key takes its last value, which is how CLI
// overrides are layered on for byte-exact replays.
SimConfig parse_config_text(const std::string& text, const std::string& name);

// the canonical defaults, parseable by parse_config_text
std::string default_config_text();

// Loads the file (or the defaults when path is empty), appends any override
// lines, and returns the parsed config together with the exact text that
// produced it; feeding snapshot_text back in reproduces the run.
SimConfig load_config(const std::string& path, const std::optional<std::string>& scenario_override,
                      const std::optional<std::uint64_t>& seed_override,
                      std::string* snapshot_text);

}  // namespace swarmsim
