#ifndef CAVITYFLOW_COMMANDS_HPP
#define CAVITYFLOW_COMMANDS_HPP

#include <iosfwd>
#include <string>

#include "cavityflow/run_config.hpp"

namespace cavityflow {

/// Command exit codes: 0 converged/complete, 1 usage or config error,
/// 2 numerical non-convergence. Artifacts are written in all cases that
/// reach the solver. The CAVITYFLOW_OUTPUT environment variable overrides
/// the configured output directory.
int cmd_solve(const std::string& config_path, std::ostream& log);
int cmd_continue(const std::string& config_path, std::ostream& log);
int cmd_sweep(const std::string& config_path, std::ostream& log);

/// Prints mesh and space statistics for `square:m`, `semi_ellipse:m`, or an
/// MSH file path.
int cmd_mesh_info(const std::string& target, std::ostream& log);

}  // namespace cavityflow

#endif
