#pragma once

#include <ostream>

namespace cobranet::cli {

/// Entry point of the cobranet tool. Returns the process exit code; regular
/// output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cobranet::cli
