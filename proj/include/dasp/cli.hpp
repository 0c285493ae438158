#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dasp::cli {

/// Runs one `dasp` invocation. `args` includes the program name.
/// Returns 0 on success, 1 on a usage or input error, 2 on a numerical failure.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, const char* const* argv);

}  // namespace dasp::cli
