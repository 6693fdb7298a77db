#ifndef DOQR_TOOLS_CLI_HPP
#define DOQR_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace doqr::cli {

/**
 * Run one command line. `args` excludes the program name.
 *
 * Returns 0 on success, 2 on a usage error and 1 on a runtime error; diagnostics go to `err`.
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}

#endif
