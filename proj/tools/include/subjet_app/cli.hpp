#pragma once

#include <ostream>

namespace subjet::app {

/// Command-line entry point. Returns 0 on success, 1 when a check fails or a
/// computation errors out, 2 on malformed input.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace subjet::app
