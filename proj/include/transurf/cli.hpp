#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace transurf {

// Runs the command line given the arguments after the program name, writing
// data and reports to out and diagnostics to err.  Exit codes: 0 success,
// 1 usage or input-format error, 2 evaluation or domain error, 3 a
// verification that ran to completion and failed.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace transurf
