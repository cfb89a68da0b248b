#pragma once

// Command-line front end. Results go to `out` as one JSON object (or CSV
// rows), diagnostics to `err`.
//
// Exit codes: 0 success, 1 a validate check failed or an unexpected error,
// 2 invalid input, 3 unsupported regime (ν ≥ 1), 4 quadrature or series
// failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace morsespec::cli {

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace morsespec::cli
