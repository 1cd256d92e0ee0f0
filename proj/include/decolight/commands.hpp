#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "decolight/config.hpp"

namespace decolight {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitConvergence = 2,
  kExitOracle = 3,
};

/// Kernel table: columns u, theta, J on a u_samples x theta_samples grid
/// with u in [0, u_max] and theta in [0, pi/2].
void cmd_kernel(const RunConfig& config, std::ostream& csv);

/// Amplitude at the decay position on t in [0, t_max]. Throws
/// ConvergenceError when a quadrature misses its tolerance.
void cmd_decay(const RunConfig& config, std::ostream& csv, std::ostream& log);

/// A and B along the z axis. A homogeneous-phase field writes zeros and a
/// warning.
void cmd_profile(const RunConfig& config, std::ostream& csv, std::ostream& log);

/// Runs the lattice oracle and prints one line per check. Returns true when
/// every check passed.
bool cmd_oracle(const RunConfig& config, std::ostream& report);

/// Dispatches `command` ("kernel", "decay", "profile" or "oracle"),
/// writes to `out`, and maps failures to an ExitCode with a message on
/// `log`.
int run_command(const std::string& command, const RunConfig& config, std::ostream& out, std::ostream& log);

}  // namespace decolight
