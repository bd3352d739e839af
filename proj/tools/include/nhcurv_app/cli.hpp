#pragma once

#include <ostream>

namespace nhcurv::app {

/// Entry point of the `nhcurv` tool. Reports go to `out`, diagnostics to
/// `err`. Returns the process exit status: 0 success, 1 a check failed,
/// 2 usage/parse/validation error, 3 numerical or singular-point error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nhcurv::app
