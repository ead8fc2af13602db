#pragma once

#include <ostream>

namespace fejc_tools {

/// Prints one PASS/FAIL line per check; true when every check passes.
bool run_selftest(std::ostream& out);

} // namespace fejc_tools
