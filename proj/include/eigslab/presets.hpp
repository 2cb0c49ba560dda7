#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eigslab/core.hpp"

namespace eigslab {

// Built-in systems. Recognised names:
//   dhl, vicsek, laakso, xi, fig2, binary-tree, flower:U,V
// (flower also accepts the spellings flower(U,V) and flower-U-V).
// Returns nullopt for unknown names.
std::optional<EIGSystem> make_preset(const std::string& name);

// Names of the fixed presets, in table order (flower is parametric and is
// listed as flower:2,3 and flower:3,2).
std::vector<std::string> preset_names();

// Resolve a CLI config argument: an existing file is loaded as JSON, else
// the argument is tried as a preset name. Throws ConfigError if neither
// works.
EIGSystem resolve_config(const std::string& arg);

}  // namespace eigslab
