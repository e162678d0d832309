#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cpz::cli {

// Runs one command line (without the program name). Returns the exit code:
// 0 success, 1 no witness within budget, 2 invalid input or domain error
// (a JSON error object is written to `err`).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cpz::cli
