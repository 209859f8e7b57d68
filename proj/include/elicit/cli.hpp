#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace elicit {

/// Entry point of the `elicit` tool: subcommands run, diagnose, report, render.
/// Returns 0 on success and nonzero with a message on `err` otherwise.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace elicit
