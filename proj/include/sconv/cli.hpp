#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sconv {

/// Runs one strongconv subcommand. `args` excludes the program name.
/// Returns 0 on success, 1 when a requested check fails, 2 on usage errors.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_command(const std::vector<std::string>& args);

}  // namespace sconv
