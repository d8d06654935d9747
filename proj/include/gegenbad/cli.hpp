#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gegenbad {

// Runs the command-line tool in-process. args excludes the program
// name. Returns the process exit code: 0 success, 2 usage/parse error,
// 3 I/O error, 4 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}
