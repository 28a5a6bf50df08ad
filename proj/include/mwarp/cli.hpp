#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mwarp {

/// Command-line entry point. Exit codes: 0 success, 1 usage error, 2 data error.
/// args excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, const char* const* argv);

}  // namespace mwarp
