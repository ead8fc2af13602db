#pragma once

#include <filesystem>
#include <string>

#include "fejc/scenarios.hpp"

namespace fejc {

/**
 * Parses a YAML scenario file, fills scenario-specific defaults and checks
 * every value. Unknown keys, out-of-range values and a grating period that
 * disagrees with phase matching by more than 1% in Q raise ConfigError.
 */
[[nodiscard]] ScenarioConfig validate_config(const std::string& yaml_text);

[[nodiscard]] ScenarioConfig load_config(const std::filesystem::path& path);

/// Relative mismatch between the recoil implied by `grating_period_m` and the phase-matched recoil.
[[nodiscard]] double grating_recoil_mismatch(const PhysicalSetup& setup);

} // namespace fejc
