#ifndef HETDIST_CLI_HPP
#define HETDIST_CLI_HPP

#include <iosfwd>

namespace hetdist::cli {

enum exit_status : int { ok = 0, usage_error = 1, data_error = 2 };

/**
 * @brief Runs `hetdist <subcommand> ...` and returns the exit status.
 *
 * Subcommands: eval, compare, dist, probmap, curve, stats. Reports go to `out` unless
 * --out names a file; diagnostics go to `err`.
 */
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hetdist::cli

#endif
