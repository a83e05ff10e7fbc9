#pragma once

#include <ostream>

namespace hdmt {

/// Entry point of the `hdmt` command. Subcommands: test, simulate,
/// separation, coverage. Exit codes: `test` returns 0 on accept and 1 on
/// reject; every command returns 2 on usage or data errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hdmt
