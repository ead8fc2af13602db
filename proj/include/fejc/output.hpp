#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "fejc/scenarios.hpp"

namespace fejc {

/// Header row then one line per row, every value as %.15e.
void write_csv(std::ostream& out, const ResultTable& table);

/// Flat JSON object of the manifest entries, in insertion order.
[[nodiscard]] std::string manifest_json(const ScenarioResult& result);

/**
 * Writes <scenario>_<table>.csv for every table and <scenario>_manifest.json
 * into `directory` (created if needed). Returns the written paths.
 */
std::vector<std::filesystem::path> write_outputs(const ScenarioResult& result, const std::filesystem::path& directory);

} // namespace fejc
