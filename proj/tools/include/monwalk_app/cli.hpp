#pragma once

#include <ostream>

namespace monwalk::app {

// Parses arguments, runs the selected subcommand and returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace monwalk::app
