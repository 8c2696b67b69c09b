#ifndef TREESHIFT_CLI_APP_HPP
#define TREESHIFT_CLI_APP_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace treeshift {

// Runs the command-line tool on the given argument list (program name not
// included) writing results to out and diagnostics to err. Returns the
// process exit code: 0 success, 1 failed checks or computation errors,
// 2 usage, format, or I/O problems.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace treeshift

#endif
