#ifndef HILBERT_CLI_APP_HPP
#define HILBERT_CLI_APP_HPP

#include <string>
#include <vector>

namespace hilbert::cli {

/// Runs the CLI on argv-style arguments (without the program name).
/// Exit codes: 0 success, 1 validation/configuration error, 2 numerical
/// non-convergence (a flagged fit).
int run(const std::vector<std::string>& args);

} // namespace hilbert::cli

#endif
