#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qwh::cli {

/// Parses and runs one qwh command line (args excludes the program name).
/// Returns 0 on success, 1 when an invariant check fails, 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qwh::cli
