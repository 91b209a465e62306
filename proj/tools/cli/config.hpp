#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "leocdn/engine.hpp"

namespace leocdn::cli {

/// Builds a validated SimulationConfig.
///
/// Layering, later wins: defaults, preset (`preset_name`, else the file's top-level
/// `preset` key), the TOML file, then `key=value` overrides. Unknown keys, type
/// mismatches and invalid values raise ConfigError naming the key path; an
/// unreadable file raises IoError.
SimulationConfig parse_config(const std::optional<std::filesystem::path>& path,
                              const std::optional<std::string>& preset_name,
                              const std::vector<std::string>& overrides);

/// Same as parse_config but from TOML text.
SimulationConfig parse_config_text(std::string_view toml_text, std::string_view source,
                                   const std::optional<std::string>& preset_name,
                                   const std::vector<std::string>& overrides);

/// Applies one `section.key=value` override. The value is read as a TOML value
/// when it parses as one, otherwise as a bare string.
void apply_override(SimulationConfig& config, std::string_view assignment);

/// Renders the effective configuration as TOML.
std::string to_toml(const SimulationConfig& config);

}  // namespace leocdn::cli
