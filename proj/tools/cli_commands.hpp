// cli_commands.hpp
//
// Front end for the `trb` tool: `ci`, `diagnose` and `simulate`.
//
// Parameters resolve as defaults < command-line flags < --config file.  The
// resolved configuration (everything except output paths and the thread
// count, which never change results) is embedded in every output, and an
// output file can itself be passed back as --config to replay it.

#ifndef TRB_CLI_COMMANDS_HPP
#define TRB_CLI_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace trb::cli
{

/// Run the tool; args exclude the program name.  Returns the exit code.
int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);

}  // namespace trb::cli

#endif  // TRB_CLI_COMMANDS_HPP
