#pragma once

// Command-line front end. run_cli is the whole program minus process setup,
// so tests can drive it with argument vectors and captured streams.
//
// Exit status: 0 ok, 1 numeric engine refused the input, 2 input error,
// 3 a checked theorem or assertion failed, 4 a resource cap was hit.

#include <iosfwd>
#include <string>
#include <vector>

namespace l2approx {

enum ExitCode : int { kExitOk = 0, kExitNumeric = 1, kExitInput = 2, kExitViolation = 3, kExitResource = 4 };

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace l2approx
