#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace covsys::cli {

enum ExitCode : int { ok = 0, input_error = 1, guard_exceeded = 2 };

/// Runs one command. args excludes the program name. Reports go to out,
/// diagnostics and usage errors to err; "-" as an input path reads in.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

}  // namespace covsys::cli
