#pragma once

#include "config.hpp"

namespace evofam::cli {

/// Exit codes: 0 pass, 1 check failure, 2 config error, 3 numerical
/// failure. Commands throw ConfigError (2), std::invalid_argument (2) or
/// NumericalError (3); main() translates.
int cmd_solve(const RunConfig& config);
int cmd_converge(const RunConfig& config);
int cmd_verify(const RunConfig& config);
int cmd_modulus(const RunConfig& config);

}  // namespace evofam::cli
