#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smd {

/// Entry point of the `smdgen` tool. `args` excludes the program name.
/// Returns the process exit code; diagnostics go to `err`.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smd
