#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace modeldelta::cli {

/// Runs one command line (args excludes the program name) and returns the
/// exit status: 0 ok, 1 validation/integrity, 2 usage/parse, 3 I/O.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modeldelta::cli
