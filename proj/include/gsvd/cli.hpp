#ifndef GSVD_CLI_HPP
#define GSVD_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace gsvd {

///
/// Entry point of the `gsvd` command. `args[0]` is the program name.
///
/// Exit codes: 0 success (run: all targets converged), 1 error or usage
/// error, 2 run stopped at max_iters with unconverged targets.
///
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace gsvd

#endif // GSVD_CLI_HPP
