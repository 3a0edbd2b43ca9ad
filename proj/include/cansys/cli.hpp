#pragma once

#include "cansys/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace cansys::cli {

/// Runs the command line `args` (args[0] is the program name).
/// Exit codes: 0 success, 1 domain error or invalid input field, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a+bi", "a-bi", "a", "bi", "i", "-i". Throws std::invalid_argument.
Complex parse_complex(const std::string& text);

/// "pi", "pi/2", "3*pi/4", or a plain number. Throws std::invalid_argument.
double parse_angle(const std::string& text);

/// Shortest-round-trip rendering of a complex number as "a+bi".
std::string format_complex(Complex z);

} // namespace cansys::cli
