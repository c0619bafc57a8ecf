#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace roadplan {

/// Entry point behind the `roadplan` binary, injectable for tests.
/// `args` excludes the program name. Exit codes: 0 success, 2 validation or
/// parse failure (including bad interactive answers), 3 infeasible planning
/// problem, 4 any other runtime failure.
int cli_main(const std::vector<std::string>& args, std::istream& in,
             std::ostream& out, std::ostream& err);

int cli_main(int argc, const char* const* argv);

}  // namespace roadplan
