#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wordorder::cli {

/// Runs one command line (without the program name). Exit status: 0 on
/// success, 1 on domain errors (a JSON error record goes to `err`), 2 on
/// usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wordorder::cli
