#pragma once

#include <iosfwd>

namespace drivebrake::cli {

enum ExitCode { Ok = 0, ConfigFailure = 2, NumericalFailure = 3 };

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace drivebrake::cli
